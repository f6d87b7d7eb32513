#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cftk {

struct Sl2NormResult {
    double truncated_norm = 0;
    double paper_bound = 0;
};

// Compression of e^{z L_{-1}} r^{L_0} to the span of xi_0..xi_cutoff in the
// lowest-weight sl(2) module V_t, built from the recursion
//   L_0 xi_n = (t+n) xi_n,   L_{-1} xi_n = sqrt((n+2t)(n+1)) xi_{n+1}.
// The spectral norm of the compression is compared against the closed-form
// bound (|z|+r)^t / (r sqrt(1-(|z|+r)^2)).
inline Sl2NormResult sl2_norm_experiment(double t_lowest, std::complex<double> z, double r,
                                         long cutoff) {
    double s = std::abs(z) + r;
    if (!(r > 0) || !(s < 1)) throw std::invalid_argument("need r > 0 and |z| + r < 1");
    if (t_lowest < 0) throw std::invalid_argument("lowest weight must be nonnegative");

    Sl2NormResult res;
    res.paper_bound = std::pow(s, t_lowest) / (r * std::sqrt(1.0 - s * s));
    if (t_lowest == 0) {
        // V_0 is the one-dimensional vacuum module and the operator is 1
        res.truncated_norm = 1.0;
        return res;
    }

    const long n = cutoff + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    // column j: e^{zL_{-1}} applied to r^{t+j} xi_j; the step
    // xi_{i-1} -> xi_i carries sqrt((i-1+2t) i)
    for (long j = 0; j < n; ++j) {
        std::complex<double> coeff(std::pow(r, t_lowest + double(j)), 0.0);
        m(j, j) += coeff;
        for (long i = j + 1; i < n; ++i) {
            double step = std::sqrt((double(i - 1) + 2 * t_lowest) * double(i));
            coeff *= z * step / double(i - j);
            m(i, j) += coeff;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    res.truncated_norm = svd.singularValues()(0);
    return res;
}

}  // namespace cftk
