#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cftk/exact_linalg.hpp"
#include "cftk/graded.hpp"
#include "cftk/partition.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

struct VirasoroParams {
    Rational c, h;
};

inline std::string registry_name(const VirasoroParams& p, const char* kind) {
    return std::string(kind) + ":c=" + to_string(p.c) + ",h=" + to_string(p.h);
}

// PBW monomial L_{-a1} L_{-a2} ... L_{-ak} v with a1 >= a2 >= ... >= 1.
using VirMonomial = std::vector<long>;
// Exact linear combination of PBW monomials.
using VirState = std::map<VirMonomial, Scalar>;

inline long monomial_level(const VirMonomial& m) {
    long s = 0;
    for (long p : m) s += p;
    return s;
}

inline void state_add(VirState& s, const VirMonomial& m, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    auto [it, fresh] = s.emplace(m, coeff);
    if (!fresh) {
        it->second += coeff;
        if (it->second.is_zero()) s.erase(it);
    }
}

inline void state_add(VirState& dst, const VirState& src, const Scalar& coeff) {
    for (const auto& [m, x] : src) state_add(dst, m, x * coeff);
}

struct CutoffOverflow : std::runtime_error {
    long level;
    explicit CutoffOverflow(long lvl)
        : std::runtime_error("state pushed past working cutoff (level " + std::to_string(lvl) + ")"),
          level(lvl) {}
};

struct NonUnitaryGram : std::runtime_error {
    long level;
    explicit NonUnitaryGram(long lvl)
        : std::runtime_error("Gram matrix not positive semidefinite at level " + std::to_string(lvl)),
          level(lvl) {}
};

// Exact normal-ordering engine for one (c,h). Memoizes L_n applied to PBW
// monomials; every result is fully re-expressed in the PBW basis.
class VirasoroContext {
  public:
    explicit VirasoroContext(VirasoroParams p) : p_(std::move(p)) {}

    const VirasoroParams& params() const { return p_; }

    // L_n acting on a PBW monomial, exact
    const VirState& apply_mode(long n, const VirMonomial& mono) {
        auto key = std::make_pair(n, mono);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        VirState out = compute(n, mono);
        return memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    VirState apply_mode(long n, const VirState& s) {
        VirState out;
        for (const auto& [m, x] : s) state_add(out, apply_mode(n, m), x);
        return out;
    }

    // <L_{-a} v, L_{-b} v>, computed by commutator reduction via the adjoint
    // word L_{a_k} ... L_{a_1} applied to the monomial b.
    Scalar inner(const VirMonomial& a, const VirMonomial& b) {
        VirState s;
        s.emplace(b, Scalar(1));
        // adjoint of L_{-a1}...L_{-ak} is L_{ak}...L_{a1}: a1 acts first
        for (long part : a) {
            s = apply_mode(part, s);
            if (s.empty()) return Scalar(0);
        }
        auto f = s.find(VirMonomial{});
        return f == s.end() ? Scalar(0) : f->second;
    }

  private:
    VirState compute(long n, const VirMonomial& mono) {
        VirState out;
        if (mono.empty()) {
            if (n > 0) return out;                          // L_n v = 0, n >= 1
            if (n == 0) {                                   // L_0 v = h v
                state_add(out, VirMonomial{}, Scalar(p_.h));
                return out;
            }
            state_add(out, VirMonomial{-n}, Scalar(1));
            return out;
        }
        long mu = -mono.front();  // leading mode, mu <= -1
        if (n < 0 && -n >= mono.front()) {
            VirMonomial m2;
            m2.reserve(mono.size() + 1);
            m2.push_back(-n);
            m2.insert(m2.end(), mono.begin(), mono.end());
            state_add(out, m2, Scalar(1));
            return out;
        }
        // L_n L_mu rest = L_mu L_n rest + (n - mu) L_{n+mu} rest
        //                + delta_{n,-mu} c/12 (n^3 - n) rest
        VirMonomial rest(mono.begin() + 1, mono.end());
        VirState inner = apply_mode(n, rest);
        for (const auto& [m, x] : inner) state_add(out, apply_mode(mu, m), x);
        if (n != mu) {
            Scalar f(Rational(n - mu));
            state_add(out, apply_mode(n + mu, rest), f);
        }
        if (n == -mu) {
            Rational central = p_.c * ratio(n * n * n - n, 12);
            state_add(out, rest, Scalar(central));
        }
        return out;
    }

    VirasoroParams p_;
    std::map<std::pair<long, VirMonomial>, VirState> memo_;
};

// Level-graded PBW basis of the Verma module M(c,h), levels 0..cutoff.
struct VermaTruncation {
    VirasoroParams params;
    long cutoff = 0;
    std::vector<std::vector<VirMonomial>> basis;  // per level, canonical order

    long level_dim(long n) const { return static_cast<long>(basis[static_cast<std::size_t>(n)].size()); }
    long index_of(long level, const VirMonomial& m) const {
        const auto& b = basis[static_cast<std::size_t>(level)];
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i] == m) return static_cast<long>(i);
        return -1;
    }
};

inline VermaTruncation verma_basis(const VirasoroParams& p, long cutoff) {
    if (cutoff < 0) throw std::invalid_argument("negative cutoff");
    VermaTruncation t;
    t.params = p;
    t.cutoff = cutoff;
    t.basis.resize(static_cast<std::size_t>(cutoff) + 1);
    for (long n = 0; n <= cutoff; ++n) {
        auto parts = enumerate_partitions(Rational(n), PartSet::PositiveIntegers, false);
        for (const auto& prt : parts) {
            VirMonomial m;
            for (long tp : prt.twice) m.push_back(tp / 2);
            t.basis[static_cast<std::size_t>(n)].push_back(std::move(m));
        }
    }
    return t;
}

// Exact Gram (Shapovalov) matrix at one level.
inline QMat gram_matrix(VirasoroContext& ctx, const VermaTruncation& t, long level) {
    const auto& b = t.basis[static_cast<std::size_t>(level)];
    const long n = static_cast<long>(b.size());
    QMat g(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j) {
            Scalar v = ctx.inner(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
            g.at(i, j) = v;
            g.at(j, i) = v.conj();
        }
    return g;
}

inline QMat gram_matrix(const VirasoroParams& p, long level) {
    VirasoroContext ctx(p);
    VermaTruncation t = verma_basis(p, level);
    return gram_matrix(ctx, t, level);
}

// GradedVector bridge for Verma states (weights h + level).
inline GradedVector to_graded(const VermaTruncation& t, const VirState& s) {
    GradedVector g;
    g.registry = registry_name(t.params, "verma");
    int par = -1;
    for (const auto& [m, x] : s) {
        long lvl = monomial_level(m);
        if (lvl > t.cutoff) throw CutoffOverflow(lvl);
        Weight w = t.params.h + Rational(lvl);
        auto& block = g.entries[w];
        block.resize(static_cast<std::size_t>(t.level_dim(lvl)));
        long idx = t.index_of(lvl, m);
        block[static_cast<std::size_t>(idx)] += x;
        (void)par;
    }
    g.parity = Parity::Even;
    g.prune();
    return g;
}

inline VirState from_graded(const VermaTruncation& t, const GradedVector& g) {
    VirState s;
    for (const auto& [w, coeffs] : g.entries) {
        Rational lvl_q = w - t.params.h;
        long lvl = to_long(lvl_q);
        const auto& b = t.basis.at(static_cast<std::size_t>(lvl));
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (!coeffs[i].is_zero()) state_add(s, b[i], coeffs[i]);
    }
    return s;
}

// L_n on a graded state; the engine raises its working cutoff internally for
// intermediate terms, but the *result* must fit under working_cutoff.
inline GradedVector apply_ln(const VirasoroParams& p, long n, const GradedVector& state, long working_cutoff) {
    VermaTruncation t = verma_basis(p, working_cutoff);
    VirasoroContext ctx(p);
    VirState s = from_graded(t, state);
    VirState r = ctx.apply_mode(n, s);
    for (const auto& [m, x] : r) {
        (void)x;
        if (monomial_level(m) > working_cutoff) throw CutoffOverflow(monomial_level(m));
    }
    return to_graded(t, r);
}

// Unitary quotient M(c,h)/rad with exact per-level data:
//   kept     indices of Verma basis vectors that descend to a quotient basis
//   reduce   matrix expressing any Verma vector in the quotient basis (mod radical)
//   gram     quotient Gram (positive definite)
//   chol     exact LDL^T of the quotient Gram for the one float conversion
class IrreducibleTruncation {
  public:
    VirasoroParams params;
    long cutoff = 0;
    VermaTruncation verma;

    struct Level {
        std::vector<long> kept;
        QMat reduce;  // kept x full
        QMat gram;    // kept x kept, positive definite
        QMat chol_l;  // unit lower triangular
        std::vector<Rational> chol_d;
    };
    std::vector<Level> levels;

    long level_dim(long n) const { return static_cast<long>(levels[static_cast<std::size_t>(n)].kept.size()); }
    long total_dim() const {
        long s = 0;
        for (const auto& l : levels) s += static_cast<long>(l.kept.size());
        return s;
    }
    long level_offset(long n) const {
        long s = 0;
        for (long k = 0; k < n; ++k) s += level_dim(k);
        return s;
    }
    std::vector<long> dims() const {
        std::vector<long> d;
        for (const auto& l : levels) d.push_back(static_cast<long>(l.kept.size()));
        return d;
    }

    // Exact mode matrix of L_n mapping quotient level `src` to level `src - n`.
    // Returns an empty matrix when the target level is outside [0, cutoff].
    QMat mode_block(VirasoroContext& ctx, long n, long src) const {
        long dst = src - n;
        if (dst < 0 || dst > cutoff) return QMat();
        const Level& ls = levels[static_cast<std::size_t>(src)];
        const Level& ld = levels[static_cast<std::size_t>(dst)];
        const auto& full_dst = verma.basis[static_cast<std::size_t>(dst)];
        QMat m_full(static_cast<long>(full_dst.size()), static_cast<long>(ls.kept.size()));
        for (std::size_t jc = 0; jc < ls.kept.size(); ++jc) {
            const VirMonomial& mono = verma.basis[static_cast<std::size_t>(src)][static_cast<std::size_t>(ls.kept[jc])];
            VirState out = ctx.apply_mode(n, VirState{{mono, Scalar(1)}});
            for (const auto& [m, x] : out) {
                long idx = verma.index_of(dst, m);
                if (idx < 0) throw std::logic_error("mode image missing from basis");
                m_full.at(idx, static_cast<long>(jc)) += x;
            }
        }
        return ld.reduce * m_full;
    }
};

inline IrreducibleTruncation irreducible_truncation(const VirasoroParams& p, long cutoff) {
    IrreducibleTruncation t;
    t.params = p;
    t.cutoff = cutoff;
    t.verma = verma_basis(p, cutoff);
    VirasoroContext ctx(p);
    t.levels.resize(static_cast<std::size_t>(cutoff) + 1);
    for (long n = 0; n <= cutoff; ++n) {
        QMat g = gram_matrix(ctx, t.verma, n);
        LdltResult full_ldlt = ldlt_real(g);
        if (!full_ldlt.psd) throw NonUnitaryGram(n);
        // pivot columns of the Gram = kept basis vectors
        BareissResult br = bareiss_eliminate(g);
        auto& lvl = t.levels[static_cast<std::size_t>(n)];
        lvl.kept = br.pivot_cols;
        const long r = static_cast<long>(lvl.kept.size());
        const long full = g.rows;
        lvl.gram = QMat(r, r);
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < r; ++j) lvl.gram.at(i, j) = g.at(lvl.kept[static_cast<std::size_t>(i)], lvl.kept[static_cast<std::size_t>(j)]);
        // reduce: alpha(x) = G_kk^{-1} (G x)_keep; solve via LDL of G_kk
        LdltResult ch = ldlt_real(lvl.gram);
        if (!ch.psd) throw NonUnitaryGram(n);
        for (long i = 0; i < r; ++i)
            if (ch.d[static_cast<std::size_t>(i)] == 0) throw NonUnitaryGram(n);
        lvl.chol_l = ch.l;
        lvl.chol_d = ch.d;
        QMat gk(r, full);
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < full; ++j) gk.at(i, j) = g.at(lvl.kept[static_cast<std::size_t>(i)], j);
        // solve G_kk * reduce = gk column-wise: L D L^T x = b
        lvl.reduce = QMat(r, full);
        for (long col = 0; col < full; ++col) {
            std::vector<Rational> b(static_cast<std::size_t>(r));
            for (long i = 0; i < r; ++i) b[static_cast<std::size_t>(i)] = gk.at(i, col).re;
            // forward: L y = b
            for (long i = 0; i < r; ++i)
                for (long j = 0; j < i; ++j) b[static_cast<std::size_t>(i)] -= ch.l.at(i, j).re * b[static_cast<std::size_t>(j)];
            // diag
            for (long i = 0; i < r; ++i) b[static_cast<std::size_t>(i)] /= ch.d[static_cast<std::size_t>(i)];
            // back: L^T x = y
            for (long i = r - 1; i >= 0; --i)
                for (long j = i + 1; j < r; ++j) b[static_cast<std::size_t>(i)] -= ch.l.at(j, i).re * b[static_cast<std::size_t>(j)];
            for (long i = 0; i < r; ++i) lvl.reduce.at(i, col) = Scalar(b[static_cast<std::size_t>(i)]);
        }
    }
    return t;
}

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// Mode matrix of L_n between orthonormalized quotient levels, one float
// conversion at the boundary:  D_b^{1/2} L_b^T  M  L_a^{-T} D_a^{-1/2}.
inline Eigen::MatrixXd orthonormal_mode_block(VirasoroContext& ctx, const IrreducibleTruncation& t,
                                              long n, long src) {
    long dst = src - n;
    QMat m = t.mode_block(ctx, n, src);
    const auto& la = t.levels[static_cast<std::size_t>(src)];
    const auto& lb = t.levels[static_cast<std::size_t>(dst)];
    const long ra = static_cast<long>(la.kept.size());
    const long rb = static_cast<long>(lb.kept.size());
    if (m.rows == 0 || ra == 0 || rb == 0) return Eigen::MatrixXd::Zero(rb, ra);
    // T1 = L_b^T * M (rational)
    QMat t1(rb, ra);
    for (long i = 0; i < rb; ++i)
        for (long j = 0; j < ra; ++j) {
            Scalar s;
            for (long k = i; k < rb; ++k) s += lb.chol_l.at(k, i) * m.at(k, j);
            t1.at(i, j) = s;
        }
    // T2 = T1 * (L_a^T)^{-1}: solve T2 * L_a^T = T1 row-wise; L_a^T upper unit triangular
    QMat t2(rb, ra);
    for (long i = 0; i < rb; ++i) {
        for (long j = 0; j < ra; ++j) {
            Scalar s = t1.at(i, j);
            for (long k = 0; k < j; ++k) s -= t2.at(i, k) * la.chol_l.at(j, k).conj();
            t2.at(i, j) = s;
        }
    }
    Eigen::MatrixXd out(rb, ra);
    for (long i = 0; i < rb; ++i)
        for (long j = 0; j < ra; ++j) {
            double num = std::sqrt(to_double(lb.chol_d[static_cast<std::size_t>(i)]));
            double den = std::sqrt(to_double(la.chol_d[static_cast<std::size_t>(j)]));
            out(i, j) = to_double(t2.at(i, j).re) * num / den;
        }
    return out;
}

struct ModeMatrix {
    VirasoroParams params;
    long cutoff = 0;
    std::vector<long> level_dims;
    CMat mat;  // orthonormalized basis, levels ascending
};

// Matrix of sum_n coeffs(n) L_n compressed to levels <= cutoff.
inline ModeMatrix smeared_mode_matrix(const IrreducibleTruncation& t,
                                      const std::map<long, Cplx>& coeffs, long cutoff) {
    if (cutoff > t.cutoff) throw std::invalid_argument("cutoff exceeds truncation");
    VirasoroContext ctx(t.params);
    ModeMatrix r;
    r.params = t.params;
    r.cutoff = cutoff;
    long dim = 0;
    std::vector<long> off(static_cast<std::size_t>(cutoff) + 1);
    for (long n = 0; n <= cutoff; ++n) {
        off[static_cast<std::size_t>(n)] = dim;
        r.level_dims.push_back(t.level_dim(n));
        dim += t.level_dim(n);
    }
    r.mat = CMat::Zero(dim, dim);
    for (const auto& [n, cf] : coeffs) {
        if (cf == Cplx(0.0, 0.0)) continue;
        for (long src = 0; src <= cutoff; ++src) {
            long dst = src - n;
            if (dst < 0 || dst > cutoff) continue;
            if (t.level_dim(src) == 0 || t.level_dim(dst) == 0) continue;
            Eigen::MatrixXd blk = orthonormal_mode_block(ctx, t, n, src);
            r.mat.block(off[static_cast<std::size_t>(dst)], off[static_cast<std::size_t>(src)], blk.rows(), blk.cols()) +=
                cf * blk;
        }
    }
    return r;
}

namespace detail {

// expm by scaling-and-squaring with a Taylor core; adequate fallback when the
// Parlett recurrence is not applicable
inline CMat expm_taylor(const CMat& a) {
    double nrm = a.cwiseAbs().sum();
    int sq = 0;
    CMat b = a;
    while (nrm > 0.25 && sq < 40) {
        b *= 0.5;
        nrm *= 0.5;
        ++sq;
    }
    CMat r = CMat::Identity(a.rows(), a.cols());
    CMat term = r;
    for (int k = 1; k <= 24; ++k) {
        term = term * b / double(k);
        r += term;
        if (term.cwiseAbs().maxCoeff() < 1e-20) break;
    }
    for (int k = 0; k < sq; ++k) r = r * r;
    return r;
}

}  // namespace detail

// e^{-t L(rho)} for rho supported on modes n >= 0. The truncation is
// L(rho)-invariant, so this block-triangular exponential is the exact
// compression of the full operator. Computed by the Parlett recurrence on
// level blocks (scalar diagonals) when the diagonal is nondegenerate.
inline ModeMatrix exp_annulus_matrix(const IrreducibleTruncation& t,
                                     const std::map<long, Cplx>& rho_coeffs, double time,
                                     long cutoff) {
    for (const auto& [n, cf] : rho_coeffs) {
        (void)cf;
        if (n < 0) throw std::invalid_argument("exp_annulus_matrix requires modes n >= 0");
    }
    ModeMatrix gen = smeared_mode_matrix(t, rho_coeffs, cutoff);
    ModeMatrix r = gen;
    const long L = cutoff;
    Cplx rho0(0.0, 0.0);
    auto it0 = rho_coeffs.find(0);
    if (it0 != rho_coeffs.end()) rho0 = it0->second;

    double h = to_double(t.params.h);
    // eigenvalue of -tA on level block k is lam_k = -t rho0 (h + k)
    bool parlett_ok = std::abs(rho0) * time > 1e-8;
    if (!parlett_ok) {
        r.mat = detail::expm_taylor(CMat(-time * gen.mat));
        return r;
    }
    std::vector<long> off(static_cast<std::size_t>(L) + 1), dim(static_cast<std::size_t>(L) + 1);
    long total = 0;
    for (long n = 0; n <= L; ++n) {
        off[static_cast<std::size_t>(n)] = total;
        dim[static_cast<std::size_t>(n)] = r.level_dims[static_cast<std::size_t>(n)];
        total += dim[static_cast<std::size_t>(n)];
    }
    CMat A = -time * gen.mat;
    CMat F = CMat::Zero(total, total);
    std::vector<Cplx> lam(static_cast<std::size_t>(L) + 1);
    for (long k = 0; k <= L; ++k) lam[static_cast<std::size_t>(k)] = -time * rho0 * (h + double(k));
    auto block = [&](CMat& mat, long i, long j) {
        return mat.block(off[static_cast<std::size_t>(i)], off[static_cast<std::size_t>(j)],
                         dim[static_cast<std::size_t>(i)], dim[static_cast<std::size_t>(j)]);
    };
    for (long k = 0; k <= L; ++k)
        block(F, k, k) = std::exp(lam[static_cast<std::size_t>(k)]) *
                         CMat::Identity(dim[static_cast<std::size_t>(k)], dim[static_cast<std::size_t>(k)]);
    // A maps level src to dst < src (row block dst, col block src): upper blocks by level order
    for (long sep = 1; sep <= L; ++sep) {
        for (long i = 0; i + sep <= L; ++i) {
            long j = i + sep;
            if (dim[static_cast<std::size_t>(i)] == 0 || dim[static_cast<std::size_t>(j)] == 0) continue;
            // Parlett: F_ij (lam_i - lam_j) = F_ii A_ij - A_ij F_jj + sum_m (F_im A_mj - A_im F_mj)
            CMat s = std::exp(lam[static_cast<std::size_t>(i)]) * block(A, i, j) -
                     block(A, i, j) * std::exp(lam[static_cast<std::size_t>(j)]);
            for (long m = i + 1; m < j; ++m) {
                if (dim[static_cast<std::size_t>(m)] == 0) continue;
                s += block(F, i, m) * block(A, m, j) - block(A, i, m) * block(F, m, j);
            }
            block(F, i, j) = s / (lam[static_cast<std::size_t>(i)] - lam[static_cast<std::size_t>(j)]);
        }
    }
    r.mat = F;
    return r;
}

}  // namespace cftk
