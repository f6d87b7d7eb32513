#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <map>
#include <string>

#include "cftk/annulus_geometry.hpp"
#include "cftk/koenigs.hpp"
#include "cftk/virasoro.hpp"

namespace cftk {

// Float matrix realization of a generalized-annulus factor on the
// orthonormalized irreducible truncation, with a provenance record.
struct TruncatedAnnulusOp {
    VirasoroParams params;
    long cutoff = 0;
    CMat mat;
    bool exact_on_truncation = false;
    nlohmann::json provenance;

    nlohmann::json describe() const {
        nlohmann::json j = provenance;
        j["c"] = to_string(params.c);
        j["h"] = to_string(params.h);
        j["cutoff"] = cutoff;
        j["exact"] = exact_on_truncation;
        // e^{2 pi i L0} lift convention on a single truncation
        j["phase_convention"] = "principal";
        return j;
    }
};

// Hermitian compression of L(f) for a real function f with Fourier
// coefficients f_hat(-n) = conj(f_hat(n)).
inline CMat compressed_field(const IrreducibleTruncation& t, const std::map<long, Cd>& fourier,
                             long cutoff) {
    for (const auto& [n, c] : fourier) {
        auto it = fourier.find(-n);
        Cd other = (it == fourier.end()) ? Cd(0, 0) : it->second;
        if (std::abs(std::conj(c) - other) > 1e-9)
            throw std::invalid_argument("field coefficients are not hermitian (real function) at n=" +
                                        std::to_string(n));
    }
    return smeared_mode_matrix(t, fourier, cutoff).mat;
}

// e^{-t L(rho)} factor; exact on the truncation since levels <= cutoff are
// invariant under L(rho) when rho is supported on n >= 0.
inline TruncatedAnnulusOp build_exact_part(const IrreducibleTruncation& t,
                                           const std::map<long, Cd>& rho_coeffs, double time,
                                           long cutoff) {
    TruncatedAnnulusOp op;
    op.params = t.params;
    op.cutoff = cutoff;
    op.mat = exp_annulus_matrix(t, rho_coeffs, time, cutoff).mat;
    op.exact_on_truncation = true;
    op.provenance["path"] = "exp-annulus";
    op.provenance["t"] = time;
    return op;
}

// U(gamma_s) = e^{i s L(g)} at truncation: the exponential of the compressed
// generator, which is approximate because compression does not commute with
// exponentiation. The generator may be compressed at a working cutoff above
// the output cutoff; the unitarity defect of the returned corner is recorded.
inline TruncatedAnnulusOp build_diffeo_factor(const IrreducibleTruncation& t,
                                              const std::map<long, Cd>& g_fourier, double s,
                                              long cutoff, long working_cutoff = -1) {
    if (working_cutoff < 0) working_cutoff = t.cutoff;
    if (working_cutoff < cutoff) throw std::invalid_argument("working cutoff below output cutoff");
    CMat gen = compressed_field(t, g_fourier, working_cutoff);
    Eigen::SelfAdjointEigenSolver<CMat> eig(gen);
    CMat phases = (Cd(0, 1) * s * eig.eigenvalues().array()).exp().matrix().asDiagonal();
    CMat full = eig.eigenvectors() * phases * eig.eigenvectors().adjoint();
    long dim = 0;
    for (long n = 0; n <= cutoff; ++n) dim += t.level_dim(n);
    TruncatedAnnulusOp op;
    op.params = t.params;
    op.cutoff = cutoff;
    op.mat = full.topLeftCorner(dim, dim);
    op.exact_on_truncation = false;
    op.provenance["path"] = "diffeo-exp";
    op.provenance["s"] = s;
    op.provenance["working_cutoff"] = working_cutoff;
    double defect = (op.mat * op.mat.adjoint() - CMat::Identity(dim, dim)).norm();
    op.provenance["unitarity_defect"] = defect;
    return op;
}

// (e^{-i t L(g)/N} e^{-t L(f)/N})^N, all factors compressed at `cutoff`.
inline TruncatedAnnulusOp trotter_product(const IrreducibleTruncation& t,
                                          const std::map<long, Cd>& f_fourier,
                                          const std::map<long, Cd>& g_fourier, double time, long n_steps,
                                          long cutoff) {
    if (n_steps < 1) throw std::invalid_argument("Trotter N must be >= 1");
    CMat f = compressed_field(t, f_fourier, cutoff);
    Eigen::SelfAdjointEigenSolver<CMat> ef(f);
    CMat e_f = ef.eigenvectors() *
               CMat((-time / double(n_steps) * ef.eigenvalues().array()).exp().matrix().asDiagonal()) *
               ef.eigenvectors().adjoint();
    CMat factor;
    bool has_g = false;
    for (const auto& [k, c] : g_fourier)
        if (std::abs(c) > 0) { has_g = true; (void)k; }
    if (has_g) {
        CMat g = compressed_field(t, g_fourier, cutoff);
        Eigen::SelfAdjointEigenSolver<CMat> eg(g);
        CMat e_g = eg.eigenvectors() *
                   CMat((Cd(0, -1) * time / double(n_steps) * eg.eigenvalues().array()).exp().matrix().asDiagonal()) *
                   eg.eigenvectors().adjoint();
        factor = e_g * e_f;
    } else {
        factor = e_f;
    }
    CMat prod = CMat::Identity(factor.rows(), factor.cols());
    for (long k = 0; k < n_steps; ++k) prod = factor * prod;
    TruncatedAnnulusOp op;
    op.params = t.params;
    op.cutoff = cutoff;
    op.mat = prod;
    op.exact_on_truncation = false;
    op.provenance["path"] = "trotter";
    op.provenance["N"] = n_steps;
    op.provenance["t"] = time;
    return op;
}

struct CovarianceResult {
    Cd alpha;
    double residual = 0;         // relative Frobenius misfit over the full truncation
    double window_residual = 0;  // misfit on the low-level observable corner
    long window = 0;
};

// Checks U(gamma_{t/N}) e^{-t L(f_j)/N} U(gamma_{t/N})^* = alpha_j e^{-t L(f_{j+1})/N}
// at truncation. The reparametrized family transports f as a vector field,
// f_j = (f o gamma_{-tj/N}) / gamma'_{-tj/N}, which is the transport under
// which Ad U(gamma_s) L(f) = L(f_s) + scalar holds for L(f) = sum f_hat(n) L_n.
inline CovarianceResult covariance_check(const IrreducibleTruncation& t, const RhoSplit& split,
                                         double time, long n_steps, long j, long cutoff,
                                         long window = -1, std::size_t samples = 256) {
    if (j < 0 || j >= n_steps) throw std::invalid_argument("need 0 <= j < N");
    if (window < 0) window = cutoff / 2;
    auto reparam = [&](long jj) {
        std::vector<Cd> vals(samples);
        double s = -time * double(jj) / double(n_steps);
        for (std::size_t k = 0; k < samples; ++k) {
            double th = 2.0 * M_PI * double(k) / double(samples);
            auto [gth, gdth] = split.gamma_with_derivative(s, th);
            vals[k] = Cd(split.f_eval(gth) / gdth, 0.0);
        }
        auto table = circle_fourier(vals);
        std::map<long, Cd> fourier;
        long m = static_cast<long>(samples);
        for (long n = -m / 2 + 1; n < m / 2; ++n) {
            Cd c = fourier_coeff(table, n);
            if (std::abs(c) > 1e-13) fourier[n] = c;
        }
        // enforce exact hermitian symmetry against sampling noise
        std::map<long, Cd> sym;
        for (const auto& [n, c] : fourier) {
            Cd other = fourier.count(-n) ? fourier.at(-n) : Cd(0, 0);
            sym[n] = 0.5 * (c + std::conj(other));
        }
        return sym;
    };
    std::map<long, Cd> g_fourier;
    {
        long m = static_cast<long>(split.g_fourier.size());
        for (long n = -m / 2 + 1; n < m / 2; ++n) {
            Cd c = fourier_coeff(split.g_fourier, n);
            if (std::abs(c) > 1e-13) g_fourier[n] = c;
        }
    }
    CMat g = compressed_field(t, g_fourier, cutoff);
    Eigen::SelfAdjointEigenSolver<CMat> eg(g);
    CMat u = eg.eigenvectors() *
             CMat((Cd(0, 1) * time / double(n_steps) * eg.eigenvalues().array()).exp().matrix().asDiagonal()) *
             eg.eigenvectors().adjoint();
    auto exp_factor = [&](const std::map<long, Cd>& fourier) {
        CMat f = compressed_field(t, fourier, cutoff);
        Eigen::SelfAdjointEigenSolver<CMat> ef(f);
        return CMat(ef.eigenvectors() *
                    CMat((-time / double(n_steps) * ef.eigenvalues().array()).exp().matrix().asDiagonal()) *
                    ef.eigenvectors().adjoint());
    };
    CMat lhs = u * exp_factor(reparam(j)) * u.adjoint();
    CMat rhs = exp_factor(reparam(j + 1));
    Cd alpha = (rhs.adjoint() * lhs).trace() / (rhs.adjoint() * rhs).trace();
    CovarianceResult res;
    res.alpha = alpha;
    res.residual = (lhs - alpha * rhs).norm() / lhs.norm();
    res.window = window;
    long wdim = 0;
    for (long n = 0; n <= std::min(window, cutoff); ++n) wdim += t.level_dim(n);
    if (wdim > 0) {
        CMat lw = lhs.topLeftCorner(wdim, wdim), rw = rhs.topLeftCorner(wdim, wdim);
        Cd aw = (rw.adjoint() * lw).trace() / (rw.adjoint() * rw).trace();
        res.window_residual = (lw - aw * rw).norm() / std::max(lw.norm(), 1e-300);
    }
    return res;
}

inline TruncatedAnnulusOp compose_annuli(const TruncatedAnnulusOp& a, const TruncatedAnnulusOp& b) {
    if (a.params.c != b.params.c || a.params.h != b.params.h || a.cutoff != b.cutoff)
        throw std::invalid_argument("annulus composition across different truncations");
    if (a.mat.cols() != b.mat.rows()) throw std::invalid_argument("annulus composition shape mismatch");
    TruncatedAnnulusOp op;
    op.params = a.params;
    op.cutoff = a.cutoff;
    op.mat = a.mat * b.mat;
    op.exact_on_truncation = a.exact_on_truncation && b.exact_on_truncation;
    op.provenance["path"] = "compose";
    op.provenance["factors"] = nlohmann::json::array({a.describe(), b.describe()});
    return op;
}

// U(psi) for a Mobius disk automorphism, realized through the sl(2) triple as
// e^{x L_{-1}} lambda^{L_0} e^{-y L_1} from the Gauss decomposition of the
// normalized matrix. Approximate at truncation.
inline TruncatedAnnulusOp build_mobius_factor(const IrreducibleTruncation& t, const Mobius& psi,
                                              long cutoff) {
    // psi = e^{i beta}(z - a)/(1 - conj(a) z) as an SL(2,C) matrix, det-normalized
    Cd eb = std::polar(1.0, psi.beta);
    Cd A = eb, B = -psi.a * eb, C = -std::conj(psi.a), D(1.0, 0.0);
    Cd det = A * D - B * C;
    Cd root = std::sqrt(det);
    A /= root; B /= root; C /= root; D /= root;
    if (std::abs(D) < 1e-12) throw std::invalid_argument("Mobius factor: Gauss decomposition needs D != 0");
    Cd x = B / D, y = C / D, sdiag = Cd(1.0, 0.0) / D;  // diag(s, 1/s), lambda = s^2
    Cd lambda = sdiag * sdiag;

    CMat lm1 = smeared_mode_matrix(t, {{-1, Cd(1, 0)}}, cutoff).mat;
    CMat lp1 = smeared_mode_matrix(t, {{1, Cd(1, 0)}}, cutoff).mat;
    long dim = lm1.rows();
    // nilpotent exponentials: finite sums
    auto nilexp = [&](const CMat& m, Cd coeff) {
        CMat r = CMat::Identity(dim, dim);
        CMat term = r;
        for (long k = 1; k <= cutoff + 1; ++k) {
            term = term * (coeff * m) / double(k);
            if (term.norm() == 0) break;
            r += term;
        }
        return r;
    };
    CMat e_lower = nilexp(lm1, x);
    CMat e_upper = nilexp(lp1, -y);
    CMat lam = CMat::Zero(dim, dim);
    double h = to_double(t.params.h);
    long off = 0;
    Cd loglam = std::log(lambda);
    for (long n = 0; n <= cutoff; ++n) {
        for (long i = 0; i < t.level_dim(n); ++i) lam(off + i, off + i) = std::exp(loglam * (h + double(n)));
        off += t.level_dim(n);
    }
    TruncatedAnnulusOp op;
    op.params = t.params;
    op.cutoff = cutoff;
    op.mat = e_lower * lam * e_upper;
    op.exact_on_truncation = false;
    op.provenance["path"] = "mobius-sl2";
    op.provenance["a_re"] = psi.a.real();
    op.provenance["a_im"] = psi.a.imag();
    op.provenance["beta"] = psi.beta;
    return op;
}

}  // namespace cftk
