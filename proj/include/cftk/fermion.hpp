#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cftk/exact_linalg.hpp"
#include "cftk/graded.hpp"
#include "cftk/partition.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

// Canonical Fock word psi_{-a1}...psi_{-ak} psi*_{-b1}...psi*_{-bl} |0>,
// parts stored doubled and strictly decreasing inside each block.
struct FockState {
    std::vector<long> psi;   // doubled mode magnitudes, e.g. {3,1} = psi_{-3/2} psi_{-1/2}
    std::vector<long> star;

    long twice_weight() const {
        long s = 0;
        for (long p : psi) s += p;
        for (long p : star) s += p;
        return s;
    }
    Rational weight() const { return ratio(twice_weight(), 2); }
    int parity() const { return static_cast<int>((psi.size() + star.size()) % 2); }
    bool is_vacuum() const { return psi.empty() && star.empty(); }

    friend bool operator==(const FockState& a, const FockState& b) {
        return a.psi == b.psi && a.star == b.star;
    }
    friend bool operator<(const FockState& a, const FockState& b) {
        if (a.psi != b.psi) return a.psi < b.psi;
        return a.star < b.star;
    }

    std::string str() const {
        if (is_vacuum()) return "|0>";
        std::string s;
        for (long p : psi) s += "psi(-" + ratio(p, 2).get_str() + ")";
        for (long p : star) s += "psi*(-" + ratio(p, 2).get_str() + ")";
        return s + "|0>";
    }
};

using FermionState = std::map<FockState, Scalar>;

inline void state_add(FermionState& s, const FockState& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = s.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) s.erase(it);
    }
}

inline void state_add(FermionState& dst, const FermionState& src, const Scalar& c) {
    for (const auto& [w, x] : src) state_add(dst, w, x * c);
}

enum class Fam { Psi, Star };

// Generator mode psi_r / psi*_r (two_r = 2r, odd) applied to a canonical
// word: creation inserts with an anticommutation sign, annihilation contracts
// against the opposite family. At most one term survives.
inline std::optional<std::pair<int, FockState>> car_apply(Fam fam, long two_r, const FockState& st) {
    if (two_r % 2 == 0) throw std::invalid_argument("fermion modes live on half-odd integers");
    FockState out = st;
    if (fam == Fam::Psi) {
        if (two_r < 0) {
            long part = -two_r;
            std::size_t pos = 0;
            while (pos < out.psi.size() && out.psi[pos] > part) ++pos;
            if (pos < out.psi.size() && out.psi[pos] == part) return std::nullopt;  // square zero
            out.psi.insert(out.psi.begin() + static_cast<long>(pos), part);
            return std::make_pair((pos % 2 == 0) ? 1 : -1, out);
        }
        // psi_r, r>0: anticommute past the psi block, contract psi*_{-r}
        int sign = (st.psi.size() % 2 == 0) ? 1 : -1;
        for (std::size_t j = 0; j < out.star.size(); ++j) {
            if (out.star[j] == two_r) {
                out.star.erase(out.star.begin() + static_cast<long>(j));
                return std::make_pair((j % 2 == 0) ? sign : -sign, out);
            }
        }
        return std::nullopt;  // reaches the vacuum
    }
    // Fam::Star
    if (two_r < 0) {
        long part = -two_r;
        int sign = (st.psi.size() % 2 == 0) ? 1 : -1;
        std::size_t pos = 0;
        while (pos < out.star.size() && out.star[pos] > part) ++pos;
        if (pos < out.star.size() && out.star[pos] == part) return std::nullopt;
        out.star.insert(out.star.begin() + static_cast<long>(pos), part);
        return std::make_pair((pos % 2 == 0) ? sign : -sign, out);
    }
    // psi*_s, s>0: contract against psi_{-s} inside the psi block
    for (std::size_t i = 0; i < out.psi.size(); ++i) {
        if (out.psi[i] == two_r) {
            out.psi.erase(out.psi.begin() + static_cast<long>(i));
            return std::make_pair((i % 2 == 0) ? 1 : -1, out);
        }
    }
    return std::nullopt;
}

inline FermionState car_apply(Fam fam, long two_r, const FermionState& s) {
    FermionState out;
    for (const auto& [w, c] : s) {
        auto r = car_apply(fam, two_r, w);
        if (r) state_add(out, r->second, c * Scalar(r->first));
    }
    return out;
}

// PCT: antilinear, fixes the vacuum, exchanges psi <-> psi* labels, and
// multiplies each word by (-1)^{mode count}. The grading factor is forced by
// positivity: invariance with the plain label swap would require
// <psi* omega, psi* omega> = -1.
inline FermionState theta(const FermionState& s) {
    FermionState out;
    for (const auto& [w, c] : s) {
        FockState sw{w.star, w.psi};
        long k = static_cast<long>(w.star.size()), l = static_cast<long>(w.psi.size());
        long swaps = k * l + k + l;  // block reorder + one sign per mode
        int sign = (swaps % 2 == 0) ? 1 : -1;
        state_add(out, sw, c.conj() * Scalar(sign));
    }
    return out;
}

inline FermionState kappa(const FermionState& s) {
    FermionState out;
    for (const auto& [w, c] : s) state_add(out, w, c * Scalar::i_pow(w.parity()));
    return out;
}

// Exact mode arithmetic for the charged free fermion. States are never
// truncated inside the recursion; all sums terminate because annihilators
// vanish on bounded-weight states.
class FermionContext {
  public:
    // a_(n) c, exact
    FermionState mode_apply(const FockState& a, long n, const FockState& c, int depth = 0) {
        if (depth > 64) throw std::runtime_error("fermion mode recursion depth exceeded (malformed state)");
        if (a.is_vacuum()) {
            FermionState out;
            if (n == -1) out.emplace(c, Scalar(1));
            return out;
        }
        auto key = std::make_tuple(a, n, c);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        Fam fam;
        long lead;
        FockState b = a;
        if (!a.psi.empty()) {
            fam = Fam::Psi;
            lead = a.psi.front();
            b.psi.erase(b.psi.begin());
        } else {
            fam = Fam::Star;
            lead = a.star.front();
            b.star.erase(b.star.begin());
        }
        long m = -(lead + 1) / 2;  // a = g_(m) b with g the weight-1/2 generator
        int pb = b.parity();
        long twice_db = b.twice_weight();
        long twice_wc = c.twice_weight();

        FermionState out;
        // first sum: (-1)^j binom(m,j) g_(m-j) (b_(k+j) c), k = n
        {
            long jmax = (twice_wc + twice_db) / 2 - 1 - n;  // b_(n+j) c = 0 beyond
            for (long j = 0; j <= jmax; ++j) {
                Integer bc = binomial(m, j);
                if (bc == 0) continue;
                FermionState inner = mode_apply(b, n + j, c, depth + 1);
                if (inner.empty()) continue;
                FermionState outer = car_apply(fam, 2 * (m - j) + 1, inner);
                Scalar coeff = Scalar(Rational(bc));
                if (j % 2 != 0) coeff = -coeff;
                state_add(out, outer, coeff);
            }
        }
        // second sum: -(-1)^{p(g)p(b)+m} (-1)^j binom(m,j) b_(m+n-j) (g_(j) c)
        {
            long sign_exp = pb + m;  // p(g) = 1
            for (long j = 0; 2 * j + 1 <= twice_wc; ++j) {
                Integer bc = binomial(m, j);
                if (bc == 0) continue;
                FermionState gc = car_apply(fam, 2 * j + 1, FermionState{{c, Scalar(1)}});
                if (gc.empty()) continue;
                FermionState inner;
                for (const auto& [w, x] : gc) {
                    FermionState t = mode_apply(b, m + n - j, w, depth + 1);
                    state_add(inner, t, x);
                }
                Scalar coeff = Scalar(Rational(bc));
                if ((j + sign_exp) % 2 != 0) coeff = -coeff;
                state_add(out, inner, -coeff);
            }
        }
        memo_.emplace(std::move(key), out);
        return out;
    }

    FermionState mode_apply(const FermionState& a, long n, const FermionState& c, int depth = 0) {
        FermionState out;
        for (const auto& [wa, xa] : a)
            for (const auto& [wc, xc] : c) {
                FermionState t = mode_apply(wa, n, wc, depth);
                state_add(out, t, xa * xc);
            }
        return out;
    }

    // Conformal vector of the charged fermion, c = 1. In canonical word order
    // this is (1/2)(psi_{-3/2} psi*_{-1/2} - psi_{-1/2} psi*_{-3/2}) |0>,
    // i.e. the symmetric bilinear combination after anticommuting into shape.
    static FermionState conformal_vector() {
        FermionState nu;
        nu.emplace(FockState{{3}, {1}}, Scalar(Rational(1, 2)));
        nu.emplace(FockState{{1}, {3}}, Scalar(Rational(-1, 2)));
        return nu;
    }

    // L_n = nu_(n+1)
    FermionState virasoro(long n, const FermionState& s) {
        return mode_apply(conformal_vector(), n + 1, s);
    }

  private:
    std::map<std::tuple<FockState, long, FockState>, FermionState> memo_;
};

// Level-graded orthonormal Fock basis up to a half-integer weight cutoff.
struct FermionSpace {
    Rational cutoff;
    std::vector<Weight> weights;                       // 0, 1/2, ..., cutoff
    std::vector<std::vector<FockState>> basis;         // per weight
    std::map<FockState, std::pair<long, long>> index;  // state -> (weight idx, position)

    long dim(long widx) const { return static_cast<long>(basis[static_cast<std::size_t>(widx)].size()); }
    long total_dim() const {
        long s = 0;
        for (const auto& b : basis) s += static_cast<long>(b.size());
        return s;
    }
    long offset(long widx) const {
        long s = 0;
        for (long i = 0; i < widx; ++i) s += dim(i);
        return s;
    }
    long flat_index(const FockState& st) const {
        auto it = index.find(st);
        if (it == index.end()) return -1;
        return offset(it->second.first) + it->second.second;
    }
    std::string registry() const { return "fock:cutoff=" + to_string(cutoff); }

    std::map<Weight, long> graded_dims() const {
        std::map<Weight, long> d;
        for (std::size_t i = 0; i < weights.size(); ++i)
            d[weights[i]] = static_cast<long>(basis[i].size());
        return d;
    }

    GradedVector to_graded(const FermionState& s) const {
        GradedVector g;
        g.registry = registry();
        int par = -1;
        bool mixed = false;
        for (const auto& [w, c] : s) {
            auto it = index.find(w);
            if (it == index.end()) throw std::out_of_range("state beyond the truncation: " + w.str());
            auto& block = g.entries[w.weight()];
            block.resize(static_cast<std::size_t>(dim(it->second.first)));
            block[static_cast<std::size_t>(it->second.second)] += c;
            if (par < 0) par = w.parity();
            else if (par != w.parity()) mixed = true;
        }
        g.parity = mixed ? Parity::Mixed : (par == 1 ? Parity::Odd : Parity::Even);
        g.prune();
        return g;
    }

    FermionState from_graded(const GradedVector& g) const {
        FermionState s;
        for (const auto& [w, coeffs] : g.entries) {
            long widx = -1;
            for (std::size_t i = 0; i < weights.size(); ++i)
                if (weights[i] == w) widx = static_cast<long>(i);
            if (widx < 0) throw std::out_of_range("weight not in truncation");
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                if (!coeffs[i].is_zero())
                    state_add(s, basis[static_cast<std::size_t>(widx)][i], coeffs[i]);
        }
        return s;
    }
};

inline FermionSpace fock_basis(const Rational& cutoff) {
    if (!is_half_integer(cutoff) || cutoff < 0)
        throw std::invalid_argument("fermion cutoff must be a nonnegative half-integer");
    FermionSpace sp;
    sp.cutoff = cutoff;
    long twice_cut = twice_to_long(cutoff);
    for (long tw = 0; tw <= twice_cut; ++tw) {
        Weight w = ratio(tw, 2);
        std::vector<FockState> states;
        for (long ta = tw; ta >= 0; --ta) {
            auto as = enumerate_partitions(ratio(ta, 2), PartSet::HalfOddPositive, true);
            auto bs = enumerate_partitions(ratio(tw - ta, 2), PartSet::HalfOddPositive, true);
            for (const auto& a : as)
                for (const auto& b : bs) states.push_back(FockState{a.twice, b.twice});
        }
        sp.weights.push_back(w);
        for (std::size_t i = 0; i < states.size(); ++i)
            sp.index[states[i]] = {static_cast<long>(sp.basis.size()), static_cast<long>(i)};
        sp.basis.push_back(std::move(states));
    }
    return sp;
}

// Exact matrix of a_(n) compressed to the truncation (columns are exact; the
// compression only drops output weights beyond the cutoff).
inline QMat mode_matrix(FermionContext& ctx, const FermionSpace& sp, const FermionState& a, long n) {
    const long dim = sp.total_dim();
    QMat m(dim, dim);
    for (std::size_t widx = 0; widx < sp.basis.size(); ++widx)
        for (std::size_t i = 0; i < sp.basis[widx].size(); ++i) {
            const FockState& c = sp.basis[widx][i];
            long col = sp.offset(static_cast<long>(widx)) + static_cast<long>(i);
            FermionState out = ctx.mode_apply(a, n, FermionState{{c, Scalar(1)}});
            for (const auto& [w, x] : out) {
                long row = sp.flat_index(w);
                if (row >= 0) m.at(row, col) += x;
            }
        }
    return m;
}

// Borcherds identity LHS - RHS applied to c, exact; empty means zero.
inline FermionState check_borcherds(FermionContext& ctx, const FermionState& a, const FermionState& b,
                                    const FermionState& c, long m, long n, long k) {
    auto twice_wt = [](const FermionState& s) {
        long w = 0;
        for (const auto& [st, x] : s) {
            (void)x;
            w = std::max(w, st.twice_weight());
        }
        return w;
    };
    auto par = [](const FermionState& s) {
        int p = -1;
        for (const auto& [st, x] : s) {
            (void)x;
            if (p < 0) p = st.parity();
            else if (p != st.parity()) throw std::invalid_argument("parity-mixed state in Borcherds check");
        }
        return p < 0 ? 0 : p;
    };
    int pa = par(a), pb = par(b);
    long twb = twice_wt(b), twc = twice_wt(c);
    long twa = twice_wt(a);

    FermionState residual;
    // LHS: sum_j binom(m,j) (a_(n+j) b)_(m+k-j) c
    {
        long jmax = (twb + twa) / 2 - 1 - n;  // a_(n+j) b vanishes beyond
        if (m >= 0) jmax = std::min(jmax, m);
        for (long j = 0; j <= jmax; ++j) {
            Integer bc = binomial(m, j);
            if (bc == 0) continue;
            FermionState d = ctx.mode_apply(a, n + j, b);
            if (d.empty()) continue;
            FermionState t = ctx.mode_apply(d, m + k - j, c);
            state_add(residual, t, Scalar(Rational(bc)));
        }
    }
    // RHS first sum: (-1)^j binom(n,j) a_(m+n-j) b_(k+j) c
    {
        long jmax = (twc + twb) / 2 - 1 - k;
        if (n >= 0) jmax = std::min(jmax, n);
        for (long j = 0; j <= jmax; ++j) {
            Integer bc = binomial(n, j);
            if (bc == 0) continue;
            FermionState t = ctx.mode_apply(b, k + j, c);
            t = ctx.mode_apply(a, m + n - j, t);
            Scalar coeff = Scalar(Rational(bc));
            if (j % 2 != 0) coeff = -coeff;
            state_add(residual, t, -coeff);
        }
    }
    // RHS second sum: -(-1)^{p(a)p(b)} (-1)^{j+n} binom(n,j) b_(n+k-j) a_(m+j) c
    {
        long jmax = (twc + twa) / 2 - 1 - m;
        if (n >= 0) jmax = std::min(jmax, n);
        for (long j = 0; j <= jmax; ++j) {
            Integer bc = binomial(n, j);
            if (bc == 0) continue;
            FermionState t = ctx.mode_apply(a, m + j, c);
            t = ctx.mode_apply(b, n + k - j, t);
            Scalar coeff = Scalar(Rational(bc));
            if ((j + n + pa * pb) % 2 != 0) coeff = -coeff;
            state_add(residual, t, coeff);
        }
    }
    return residual;
}

struct InvarianceReport {
    bool all_zero = true;
    long first_bad_mode = 0;
    double max_abs = 0;
};

// Per-mode coefficient identity of the invariance axiom:
//   [(theta a)_(n)]^dagger = sum_k (1/k!) i^{2 Delta_a + p(a)} (L_1^k a)_(2 Delta_a - k - n - 2)
// with (-1)^{L_0} = e^{i pi L_0}.
inline InvarianceReport check_invariance(FermionContext& ctx, const FermionSpace& sp,
                                         const FermionState& a) {
    Rational da(0);
    int pa = 0;
    {
        bool first = true;
        for (const auto& [st, x] : a) {
            (void)x;
            if (first) {
                da = st.weight();
                pa = st.parity();
                first = false;
            } else if (st.weight() != da || st.parity() != pa) {
                throw std::invalid_argument("invariance check requires a homogeneous state");
            }
        }
    }
    long twice_da = twice_to_long(da);
    if (twice_da % 2 != 0 && pa == 0)
        throw std::invalid_argument("parity inconsistent with conformal weight");

    long twice_cut = twice_to_long(sp.cutoff);
    long nmax = (twice_cut + twice_da) / 2 + 1;

    // L_1^k a, k = 0, 1, ... until zero
    std::vector<FermionState> lka{a};
    while (!lka.back().empty()) lka.push_back(ctx.virasoro(1, lka.back()));

    FermionState ta = theta(a);
    Scalar phase = Scalar::i_pow(twice_da + pa);

    InvarianceReport rep;
    for (long n = -nmax; n <= nmax; ++n) {
        QMat lhs = mode_matrix(ctx, sp, ta, n).adjoint();
        QMat rhs(lhs.rows, lhs.cols);
        Integer fact(1);
        for (std::size_t k = 0; k < lka.size(); ++k) {
            if (k > 0) fact *= static_cast<long>(k);
            if (lka[k].empty()) break;
            long mode = twice_da - static_cast<long>(k) - n - 2;
            QMat mk = mode_matrix(ctx, sp, lka[k], mode);
            rhs = rhs + mk * (phase * Scalar(ratio(Integer(1), fact)));
        }
        QMat diff = lhs - rhs;
        if (!diff.is_zero()) {
            rep.all_zero = false;
            rep.first_bad_mode = n;
            rep.max_abs = diff.max_abs();
            return rep;
        }
    }
    return rep;
}

inline QSeries character(const FermionSpace& sp) {
    return qseries_of_graded_dims(sp.graded_dims(), sp.cutoff);
}

// ---- Segal commutation relation at the round annulus, over Q(sqrt r) ----

// x + y sqrt(r) with exact rational x, y
struct QuadExt {
    Rational x, y;
    bool is_zero() const { return x == 0 && y == 0; }
};

inline QuadExt quad_add(const QuadExt& a, const QuadExt& b) { return {a.x + b.x, a.y + b.y}; }
inline QuadExt quad_sub(const QuadExt& a, const QuadExt& b) { return {a.x - b.x, a.y - b.y}; }
inline QuadExt quad_mul(const QuadExt& a, const QuadExt& b, const Rational& r) {
    return {a.x * b.x + r * (a.y * b.y), a.x * b.y + a.y * b.x};
}

struct SegalCheckResult {
    bool exact_zero = true;
    std::string witness;  // first nonzero residual entry, if any
};

// Verifies a(z^k) r^{L0} = r^{k+1/2} r^{L0} a(z^k) exactly on the truncation.
// a(z^k) is the annihilation mode psi_{k+1/2} (it lowers weight by k + 1/2);
// the pulled-back boundary pair for F = z^k is (z^k, r^{k+1/2} z^k).
inline SegalCheckResult segal_round_annulus_check(const Rational& r, long k, const Rational& cutoff) {
    if (r <= 0 || r > 1) throw std::invalid_argument("need r in (0, 1]");
    if (k < 0) throw std::invalid_argument("need k >= 0");
    FermionSpace sp = fock_basis(cutoff);
    FermionContext ctx;
    const long dim = sp.total_dim();

    // A = matrix of psi_{k+1/2} (exact rational, entries 0/+-1)
    QMat a(dim, dim);
    for (std::size_t widx = 0; widx < sp.basis.size(); ++widx)
        for (std::size_t i = 0; i < sp.basis[widx].size(); ++i) {
            const FockState& c = sp.basis[widx][i];
            long col = sp.offset(static_cast<long>(widx)) + static_cast<long>(i);
            auto out = car_apply(Fam::Psi, 2 * k + 1, c);
            if (out) {
                long row = sp.flat_index(out->second);
                if (row >= 0) a.at(row, col) += Scalar(out->first);
            }
        }

    // r^{L0} as a diagonal over Q(sqrt r): weight w = tw/2 gives r^{tw/2} (sqrt r)^{tw mod 2}
    std::vector<QuadExt> rdiag(static_cast<std::size_t>(dim));
    for (std::size_t widx = 0; widx < sp.basis.size(); ++widx) {
        long tw = twice_to_long(sp.weights[widx]);
        Rational rpow = 1;
        for (long i = 0; i < tw / 2; ++i) rpow *= r;
        QuadExt v = (tw % 2 == 0) ? QuadExt{rpow, Rational(0)} : QuadExt{Rational(0), rpow};
        for (long i = 0; i < sp.dim(static_cast<long>(widx)); ++i)
            rdiag[static_cast<std::size_t>(sp.offset(static_cast<long>(widx)) + i)] = v;
    }

    // residual = A R - r^{k+1/2} R A, with r^{k+1/2} = (0, r^k)
    Rational rk = 1;
    for (long i = 0; i < k; ++i) rk *= r;
    QuadExt scale{Rational(0), rk};
    SegalCheckResult res;
    for (long i = 0; i < dim && res.exact_zero; ++i)
        for (long j = 0; j < dim; ++j) {
            const Scalar& aij = a.at(i, j);
            if (aij.is_zero()) continue;
            QuadExt lhs = quad_mul(QuadExt{aij.re, Rational(0)}, rdiag[static_cast<std::size_t>(j)], r);
            QuadExt rhs = quad_mul(scale, quad_mul(rdiag[static_cast<std::size_t>(i)],
                                                   QuadExt{aij.re, Rational(0)}, r), r);
            QuadExt d = quad_sub(lhs, rhs);
            if (!d.is_zero()) {
                res.exact_zero = false;
                res.witness = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
                break;
            }
        }
    return res;
}

// State literals: "psi(-1/2)psi*(-3/2)|0>", "nu", "omega".
inline FermionState parse_fermion_state(const std::string& text) {
    if (text == "nu") return FermionContext::conformal_vector();
    if (text == "omega" || text == "|0>") return FermionState{{FockState{}, Scalar(1)}};
    std::vector<std::pair<Fam, long>> ops;
    std::size_t pos = 0;
    while (pos < text.size() && text.compare(pos, 1, "|") != 0) {
        Fam fam;
        if (text.compare(pos, 4, "psi*") == 0) {
            fam = Fam::Star;
            pos += 4;
        } else if (text.compare(pos, 3, "psi") == 0) {
            fam = Fam::Psi;
            pos += 3;
        } else {
            throw std::invalid_argument("bad state literal near '" + text.substr(pos) + "'");
        }
        if (pos >= text.size() || text[pos] != '(') throw std::invalid_argument("expected '(' in state literal");
        std::size_t close = text.find(')', pos);
        if (close == std::string::npos) throw std::invalid_argument("unbalanced '(' in state literal");
        Rational q = rational_from_string(text.substr(pos + 1, close - pos - 1));
        long two_r = twice_to_long(q);
        ops.emplace_back(fam, two_r);
        pos = close + 1;
    }
    if (text.compare(pos, 3, "|0>") != 0) throw std::invalid_argument("state literal must end in |0>");
    FermionState s{{FockState{}, Scalar(1)}};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) s = car_apply(it->first, it->second, s);
    return s;
}

}  // namespace cftk
