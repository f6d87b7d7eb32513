#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cftk/codes.hpp"
#include "cftk/exact_linalg.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

struct Lattice {
    int rank = 0;
    QMat basis;  // rows are sqrt(2) * basis vectors / 2, i.e. rational coordinates
    QMat gram;   // exact Gram matrix, entries in (1/2) Z
    bool integral = false;
    bool even = false;
    bool from_code = false;
    BinaryCode code;  // the source code when from_code

    Rational determinant() const { return det_real(gram); }
};

// Lambda_C = union over codewords of sqrt(2) Z^n + c/sqrt(2). A Z-basis is
// given by the lifted reduced generators over sqrt(2) together with
// sqrt(2) e_j for the non-pivot coordinates j. Gram entries land in (1/2) Z.
inline Lattice code_lattice(const BinaryCode& c) {
    const int n = c.length;
    Lattice lat;
    lat.rank = n;
    lat.code = c;
    lat.from_code = true;
    // integer rows of sqrt(2) * basis: fully reduced lifted generators (0/1
    // entries, pivot columns clean) and 2 e_j on non-pivot coordinates
    RrefF2 rr = rref_f2(n, c.gens);
    std::vector<std::vector<long>> rows;
    std::vector<bool> pivot(static_cast<std::size_t>(n), false);
    for (int p : rr.pivot_of_row) pivot[static_cast<std::size_t>(p)] = true;
    for (std::uint64_t g : rr.rows) {
        std::vector<long> r(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = (g >> i) & 1;
        rows.push_back(std::move(r));
    }
    for (int j = 0; j < n; ++j) {
        if (pivot[static_cast<std::size_t>(j)]) continue;
        std::vector<long> r(static_cast<std::size_t>(n), 0);
        r[static_cast<std::size_t>(j)] = 2;
        rows.push_back(std::move(r));
    }
    lat.basis = QMat(n, n);
    lat.gram = QMat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            lat.basis.at(i, j) = Scalar(ratio(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 2));
    // gram = (1/2) * rows rows^T
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long s = 0;
            for (int k = 0; k < n; ++k)
                s += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                     rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            lat.gram.at(i, j) = Scalar(ratio(s, 2));
        }
    lat.integral = true;
    lat.even = true;
    for (int i = 0; i < n && lat.integral; ++i)
        for (int j = 0; j < n; ++j)
            if (!is_integer(lat.gram.at(i, j).re)) {
                lat.integral = false;
                break;
            }
    for (int i = 0; i < n; ++i) {
        const Rational& d = lat.gram.at(i, i).re;
        if (!is_integer(d) || to_long(d) % 2 != 0) lat.even = false;
    }
    lat.even = lat.even && lat.integral;
    return lat;
}

struct LatticeReport {
    std::vector<std::pair<Rational, Integer>> theta;  // (norm, count), norm ascending
    Integer root_count;                               // vectors of norm exactly 2
    Rational min_norm;                                // smallest nonzero norm
    bool integral = false;
    bool even = false;
    Rational det;
};

struct EnumerationBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive theta coefficients of Lambda_C by the codeword-coset shell
// decomposition: coordinates with c_i = 0 contribute norms (2m)^2/2, c_i = 1
// contribute (2m+1)^2/2. Counts are exact.
inline LatticeReport lattice_report(const Lattice& lat, long norm_cutoff) {
    if (!lat.from_code) throw std::invalid_argument("lattice_report requires a code lattice");
    if (lat.rank > 24 || norm_cutoff > 8) throw EnumerationBudget("desk-scale budget: rank <= 24, norm <= 8");
    const BinaryCode& c = lat.code;
    const int n = c.length;
    const long tmax = 2 * norm_cutoff;  // doubled norms
    // per-coordinate doubled-norm series
    std::vector<Integer> even_series(static_cast<std::size_t>(tmax) + 1, Integer(0));
    std::vector<Integer> odd_series(static_cast<std::size_t>(tmax) + 1, Integer(0));
    for (long m = 0;; ++m) {
        long t = 4 * m * m;  // (2m)^2 doubled-norm contribution: x^2 with x = 2m
        if (t > tmax) break;
        even_series[static_cast<std::size_t>(t)] += (m == 0 ? 1 : 2);
    }
    for (long m = 0;; ++m) {
        long t = (2 * m + 1) * (2 * m + 1);
        if (t > tmax) break;
        odd_series[static_cast<std::size_t>(t)] += 2;
    }
    std::map<long, Integer> theta;  // doubled norm -> count
    for (std::uint64_t w : c.codewords()) {
        std::vector<Integer> acc(static_cast<std::size_t>(tmax) + 1, Integer(0));
        acc[0] = 1;
        for (int i = 0; i < n; ++i) {
            const auto& series = ((w >> i) & 1) ? odd_series : even_series;
            std::vector<Integer> next(static_cast<std::size_t>(tmax) + 1, Integer(0));
            for (long t = 0; t <= tmax; ++t) {
                if (acc[static_cast<std::size_t>(t)] == 0) continue;
                for (long s = 0; t + s <= tmax; ++s) {
                    if (series[static_cast<std::size_t>(s)] == 0) continue;
                    next[static_cast<std::size_t>(t + s)] +=
                        acc[static_cast<std::size_t>(t)] * series[static_cast<std::size_t>(s)];
                }
            }
            acc = std::move(next);
        }
        for (long t = 0; t <= tmax; ++t)
            if (acc[static_cast<std::size_t>(t)] != 0) theta[t] += acc[static_cast<std::size_t>(t)];
    }
    LatticeReport rep;
    rep.integral = lat.integral;
    rep.even = lat.even;
    rep.det = lat.determinant();
    rep.root_count = 0;
    bool have_min = false;
    for (const auto& [t, cnt] : theta) {
        rep.theta.emplace_back(ratio(t, 2), cnt);
        if (t == 4) rep.root_count = cnt;
        if (t > 0 && !have_min) {
            rep.min_norm = ratio(t, 2);
            have_min = true;
        }
    }
    return rep;
}

}  // namespace cftk
