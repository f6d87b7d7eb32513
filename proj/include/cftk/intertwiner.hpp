#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cftk/exact_linalg.hpp"
#include "cftk/fermion.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

struct NotASubmodule : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Orthogonal projection onto a submodule of the Fock truncation, stored as
// exact per-weight blocks plus an exact action on untruncated states (needed
// so axiom checks can pass through intermediate weights above the cutoff).
// Parity projections are the shipped instance.
struct SubmoduleProjection {
    const FermionSpace* space = nullptr;
    std::vector<QMat> blocks;  // per weight index
    std::function<FermionState(const FermionState&)> act;
    std::string label;

    QMat full() const {
        long dim = space->total_dim();
        QMat p(dim, dim);
        for (std::size_t w = 0; w < blocks.size(); ++w) {
            long off = space->offset(static_cast<long>(w));
            const QMat& b = blocks[w];
            for (long i = 0; i < b.rows; ++i)
                for (long j = 0; j < b.cols; ++j) p.at(off + i, off + j) = b.at(i, j);
        }
        return p;
    }

    // p^2 = p = p*; commutation with L0 is structural (blocks are per weight)
    void validate_projection() const {
        for (const auto& b : blocks) {
            if (!(b * b == b)) throw NotASubmodule("projection is not idempotent: " + label);
            if (!(b.adjoint() == b)) throw NotASubmodule("projection is not self-adjoint: " + label);
        }
    }

    // exact commutation with the modes of the given even states
    void validate_commutes(FermionContext& ctx, const std::vector<FermionState>& generators,
                           long mode_band) const {
        QMat p = full();
        for (const auto& gen : generators)
            for (long n = -mode_band; n <= mode_band; ++n) {
                QMat m = mode_matrix(ctx, *space, gen, n);
                if (!(p * m == m * p))
                    throw NotASubmodule("projection does not commute with subalgebra mode n=" +
                                        std::to_string(n) + ": " + label);
            }
    }
};

inline SubmoduleProjection parity_projection(const FermionSpace& sp, int parity) {
    SubmoduleProjection p;
    p.space = &sp;
    p.label = parity == 0 ? "even" : "odd";
    for (std::size_t w = 0; w < sp.basis.size(); ++w) {
        long d = sp.dim(static_cast<long>(w));
        QMat b(d, d);
        for (long i = 0; i < d; ++i)
            if (sp.basis[w][static_cast<std::size_t>(i)].parity() == parity) b.at(i, i) = Scalar(1);
        p.blocks.push_back(std::move(b));
    }
    p.act = [parity](const FermionState& s) {
        FermionState out;
        for (const auto& [w, c] : s)
            if (w.parity() == parity) state_add(out, w, c);
        return out;
    };
    return p;
}

inline SubmoduleProjection identity_projection(const FermionSpace& sp) {
    SubmoduleProjection p;
    p.space = &sp;
    p.label = "identity";
    for (std::size_t w = 0; w < sp.basis.size(); ++w)
        p.blocks.push_back(QMat::identity(sp.dim(static_cast<long>(w))));
    p.act = [](const FermionState& s) { return s; };
    return p;
}

// Delta = -Delta_K + Delta_M + Delta_N of the descent construction.
inline Rational delta_shift(const Rational& dm, const Rational& dn, const Rational& dk) {
    return -dk + dm + dn;
}

// Descent intertwiner at truncation: modes a^Y_(k) = p_K a_(k + Delta) |_N on
// the shifted-integer grid k in [-w, w] + (Delta mod 1).
struct IntertwinerTruncation {
    const FermionSpace* space = nullptr;
    SubmoduleProjection p_k, p_n;
    FermionState charge;
    Rational delta;
    long grid_halfwidth = 0;
    std::map<long, QMat> modes;  // key: integer n with actual mode index n - Delta

    Rational charge_weight() const {
        for (const auto& [w, c] : charge) {
            (void)c;
            return w.weight();
        }
        return Rational(0);
    }
    int charge_parity() const {
        for (const auto& [w, c] : charge) {
            (void)c;
            return w.parity();
        }
        return 0;
    }
};

struct GridUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline IntertwinerTruncation descent_modes(FermionContext& ctx, const SubmoduleProjection& pk,
                                           const SubmoduleProjection& pn, const FermionState& charge,
                                           long grid_halfwidth, const Rational& delta = Rational(0)) {
    if (pk.space != pn.space) throw std::invalid_argument("projections live on different spaces");
    if (!is_integer(delta))
        throw std::invalid_argument("descent grid offset must keep k + Delta integral");
    pk.validate_projection();
    pn.validate_projection();
    std::vector<FermionState> gens{FermionContext::conformal_vector(),
                                   FermionState{{FockState{{1}, {1}}, Scalar(1)}}};
    pk.validate_commutes(ctx, gens, 2);
    pn.validate_commutes(ctx, gens, 2);

    IntertwinerTruncation t;
    t.space = pk.space;
    t.p_k = pk;
    t.p_n = pn;
    t.charge = charge;
    t.delta = delta;
    t.grid_halfwidth = grid_halfwidth;
    QMat kfull = pk.full(), nfull = pn.full();
    for (long k = -grid_halfwidth; k <= grid_halfwidth; ++k) {
        long n = k + to_long(delta);
        QMat m = mode_matrix(ctx, *t.space, charge, n);
        t.modes[k] = kfull * m * nfull;
    }
    return t;
}

struct AxiomReport {
    std::string axiom;
    long samples = 0;
    bool all_zero = true;
    std::string max_residual = "0";
    std::string witness;
};

// (i) L_{-1}-derivative property as mode identities on the grid:
//     (L_{-1}a)^Y_(k) = -k a^Y_(k-1)
inline AxiomReport check_derivative_axiom(FermionContext& ctx, const IntertwinerTruncation& y) {
    AxiomReport rep{"l-1-derivative", 0, true, "0", ""};
    FermionState la = ctx.virasoro(-1, y.charge);
    QMat kfull = y.p_k.full(), nfull = y.p_n.full();
    for (long k = -y.grid_halfwidth + 1; k <= y.grid_halfwidth; ++k) {
        long n = k + to_long(y.delta);
        QMat lhs = kfull * mode_matrix(ctx, *y.space, la, n) * nfull;
        QMat rhs = y.modes.at(k - 1) * Scalar(Rational(-k));
        ++rep.samples;
        QMat diff = lhs - rhs;
        if (!diff.is_zero()) {
            rep.all_zero = false;
            rep.witness = "mode k=" + std::to_string(k);
            rep.max_residual = std::to_string(diff.max_abs());
            return rep;
        }
    }
    return rep;
}

// Stored mode matrices agree with the defining composition p_K a_(k+Delta) p_N
// recomputed column by column; catches corrupted entries.
inline AxiomReport check_mode_consistency(FermionContext& ctx, const IntertwinerTruncation& y) {
    AxiomReport rep{"mode-consistency", 0, true, "0", ""};
    for (const auto& [k, stored] : y.modes) {
        long n = k + to_long(y.delta);
        QMat fresh(y.space->total_dim(), y.space->total_dim());
        for (std::size_t widx = 0; widx < y.space->basis.size(); ++widx)
            for (std::size_t i = 0; i < y.space->basis[widx].size(); ++i) {
                const FockState& c = y.space->basis[widx][i];
                long col = y.space->offset(static_cast<long>(widx)) + static_cast<long>(i);
                FermionState in = y.p_n.act(FermionState{{c, Scalar(1)}});
                FermionState out = y.p_k.act(ctx.mode_apply(y.charge, n, in));
                for (const auto& [w, x] : out) {
                    long row = y.space->flat_index(w);
                    if (row >= 0) fresh.at(row, col) += x;
                }
            }
        ++rep.samples;
        QMat diff = stored - fresh;
        if (!diff.is_zero()) {
            rep.all_zero = false;
            rep.witness = "mode k=" + std::to_string(k);
            rep.max_residual = std::to_string(diff.max_abs());
            return rep;
        }
    }
    return rep;
}

// (ii) intertwiner Borcherds identity, verified exactly at the state level
// (intermediate weights are never truncated) on sampled (a, m, n, k) applied
// to every basis state of N.
inline AxiomReport check_intertwiner_borcherds(FermionContext& ctx, const IntertwinerTruncation& y,
                                               const std::vector<FermionState>& subalgebra_samples,
                                               const std::vector<long>& mode_samples) {
    AxiomReport rep{"borcherds", 0, true, "0", ""};
    const FermionState& b = y.charge;
    long dshift = to_long(y.delta);
    if (2 * y.grid_halfwidth < twice_to_long(y.space->cutoff) + 4)
        throw GridUnderflow("mode grid narrower than the sampled identity window; widen the grid");
    auto ymode_apply = [&](long true_mode, const FermionState& s) {
        return y.p_k.act(ctx.mode_apply(b, true_mode + dshift, y.p_n.act(s)));
    };
    for (const auto& a : subalgebra_samples) {
        Rational da(0);
        int pa = 0;
        {
            const FockState& st = a.begin()->first;
            da = st.weight();
            pa = st.parity();
        }
        if (pa != 0) throw std::invalid_argument("Borcherds samples must come from the even subalgebra");
        int pb = y.charge_parity();
        long twa = twice_to_long(da), twb = twice_to_long(y.charge_weight());
        for (long m : mode_samples)
            for (long n : mode_samples)
                for (long k : mode_samples)
                    for (const auto& blk : y.space->basis)
                        for (const auto& cst : blk) {
                            FermionState c = y.p_n.act(FermionState{{cst, Scalar(1)}});
                            if (c.empty()) continue;
                            long twc = cst.twice_weight();
                            FermionState residual;
                            // LHS: sum_j binom(m,j) (a_(n+j) b)^Y_(m+k-j) c
                            long jmax = (twa + twb) / 2 - 1 - n;
                            if (m >= 0) jmax = std::min(jmax, m);
                            for (long j = 0; j <= jmax; ++j) {
                                Integer bc = binomial(m, j);
                                if (bc == 0) continue;
                                FermionState d = ctx.mode_apply(a, n + j, b);
                                if (d.empty()) continue;
                                FermionState t = y.p_k.act(ctx.mode_apply(d, m + k - j + dshift, c));
                                state_add(residual, t, Scalar(Rational(bc)));
                            }
                            // RHS first sum: (-1)^j binom(n,j) a^K_(m+n-j) b^Y_(k+j) c
                            long j1max = (twc + twb) / 2 - 1 - k - dshift;
                            if (n >= 0) j1max = std::min(j1max, n);
                            for (long j = 0; j <= j1max; ++j) {
                                Integer bc = binomial(n, j);
                                if (bc == 0) continue;
                                FermionState t = ymode_apply(k + j, c);
                                t = ctx.mode_apply(a, m + n - j, t);
                                Scalar cf = Scalar(Rational(bc));
                                if (j % 2 != 0) cf = -cf;
                                state_add(residual, t, -cf);
                            }
                            // RHS second sum: -(-1)^{p(a)p(b)+n}(-1)^j binom(n,j)
                            //                 b^Y_(n+k-j) a^N_(m+j) c
                            int npar = static_cast<int>(((n % 2) + 2) % 2);
                            long j2max = (twc + twa) / 2 - 1 - m;
                            if (n >= 0) j2max = std::min(j2max, n);
                            for (long j = 0; j <= j2max; ++j) {
                                Integer bc = binomial(n, j);
                                if (bc == 0) continue;
                                FermionState t = ctx.mode_apply(a, m + j, c);
                                if (t.empty()) continue;
                                t = ymode_apply(n + k - j, t);
                                Scalar cf = Scalar(Rational(bc));
                                if ((j + npar + pa * pb) % 2 != 0) cf = -cf;
                                state_add(residual, t, cf);
                            }
                            ++rep.samples;
                            if (!residual.empty()) {
                                rep.all_zero = false;
                                rep.witness = "(m,n,k)=(" + std::to_string(m) + "," + std::to_string(n) +
                                              "," + std::to_string(k) + ") on " + cst.str();
                                rep.max_residual = residual.begin()->second.str();
                                return rep;
                            }
                        }
    }
    return rep;
}

// (iii) commutator formula, exact at the state level:
//   a^K_(m) b^Y_(k) c - (-1)^{p(a)p(b)} b^Y_(k) a^N_(m) c
//   = sum_j binom(m,j) (a_(j) b)^Y_(m+k-j) c
inline AxiomReport check_intertwiner_commutator(FermionContext& ctx, const IntertwinerTruncation& y,
                                                const std::vector<FermionState>& subalgebra_samples,
                                                const std::vector<long>& mode_samples) {
    AxiomReport rep{"commutator", 0, true, "0", ""};
    const FermionState& b = y.charge;
    long dshift = to_long(y.delta);
    auto ymode_apply = [&](long true_mode, const FermionState& s) {
        return y.p_k.act(ctx.mode_apply(b, true_mode + dshift, y.p_n.act(s)));
    };
    for (const auto& a : subalgebra_samples) {
        const FockState& st = a.begin()->first;
        int pa = st.parity();
        int pb = y.charge_parity();
        long twa = st.twice_weight(), twb = twice_to_long(y.charge_weight());
        for (long m : mode_samples)
            for (long k : mode_samples)
                for (const auto& blk : y.space->basis)
                    for (const auto& cst : blk) {
                        FermionState c = y.p_n.act(FermionState{{cst, Scalar(1)}});
                        if (c.empty()) continue;
                        FermionState residual = ctx.mode_apply(a, m, ymode_apply(k, c));
                        FermionState swap = ymode_apply(k, ctx.mode_apply(a, m, c));
                        state_add(residual, swap, Scalar(((pa * pb) % 2 == 0) ? -1 : 1));
                        long jmax = (twa + twb) / 2 - 1;
                        if (m >= 0) jmax = std::min(jmax, m);
                        for (long j = 0; j <= jmax; ++j) {
                            Integer bc = binomial(m, j);
                            if (bc == 0) continue;
                            FermionState d = ctx.mode_apply(a, j, b);
                            if (d.empty()) continue;
                            FermionState t = y.p_k.act(ctx.mode_apply(d, m + k - j + dshift, c));
                            state_add(residual, t, -Scalar(Rational(bc)));
                        }
                        ++rep.samples;
                        if (!residual.empty()) {
                            rep.all_zero = false;
                            rep.witness = "(m,k)=(" + std::to_string(m) + "," + std::to_string(k) + ")";
                            rep.max_residual = residual.begin()->second.str();
                            return rep;
                        }
                    }
    }
    return rep;
}

// Full residual report for one constructed intertwiner.
inline std::vector<AxiomReport> check_intertwiner_axioms(FermionContext& ctx,
                                                         const IntertwinerTruncation& y,
                                                         unsigned seed = 20240811,
                                                         int n_subalgebra_samples = 3) {
    std::vector<FermionState> samples{FermionState{{FockState{}, Scalar(1)}},
                                      FermionContext::conformal_vector()};
    // add even two-mode words as extra subalgebra elements
    std::vector<FockState> pool;
    for (const auto& blk : y.space->basis)
        for (const auto& st : blk)
            if (st.parity() == 0 && !st.is_vacuum()) pool.push_back(st);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n_subalgebra_samples && !pool.empty(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        samples.push_back(FermionState{{pool[pick(rng)], Scalar(1)}});
    }
    std::vector<long> mode_samples{-2, -1, 0, 1, 2};
    std::vector<AxiomReport> reports;
    reports.push_back(check_mode_consistency(ctx, y));
    reports.push_back(check_derivative_axiom(ctx, y));
    reports.push_back(check_intertwiner_borcherds(ctx, y, samples, mode_samples));
    reports.push_back(check_intertwiner_commutator(ctx, y, samples, mode_samples));
    return reports;
}

}  // namespace cftk
