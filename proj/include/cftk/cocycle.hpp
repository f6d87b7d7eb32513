#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cftk/codes.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

enum class CurrentKind { Bosonic, Fermionic, Semionic };

inline CurrentKind current_kind_from_string(const std::string& s) {
    if (s == "bosonic" || s == "1") return CurrentKind::Bosonic;
    if (s == "fermionic" || s == "-1") return CurrentKind::Fermionic;
    if (s == "semionic" || s == "i") return CurrentKind::Semionic;
    throw std::invalid_argument("unknown simple-current kind: " + s);
}

struct SemionicParity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// epsilon^{p.q} with epsilon = 1, -1, i; the semionic case demands p.q even
// and evaluates to (-1)^{(p.q)/2}.
inline Scalar braid_sign(std::uint64_t p, std::uint64_t q, CurrentKind kind) {
    int d = dot(p, q);
    switch (kind) {
        case CurrentKind::Bosonic: return Scalar(1);
        case CurrentKind::Fermionic: return (d % 2 == 0) ? Scalar(1) : Scalar(-1);
        case CurrentKind::Semionic:
            if (d % 2 != 0)
                throw SemionicParity("semionic braid requires p.q even (got p.q = " + std::to_string(d) + ")");
            return (d % 4 == 0) ? Scalar(1) : Scalar(-1);
    }
    throw std::logic_error("unreachable");
}

// Cocycle values live in mu_8, stored as exponents of zeta_8 = e^{i pi / 4}.
struct Cocycle {
    BinaryCode code;
    CurrentKind kind = CurrentKind::Bosonic;
    std::map<std::pair<std::uint64_t, std::uint64_t>, int> zeta8_exp;

    int exponent(std::uint64_t p, std::uint64_t i) const { return zeta8_exp.at({p, i}); }

    // exact scalar value; mu_4 values embed in the Gaussian rationals
    Scalar value(std::uint64_t p, std::uint64_t i) const {
        int e = exponent(p, i);
        if (e % 2 != 0) throw std::domain_error("cocycle value is a primitive 8th root of unity");
        return Scalar::i_pow(e / 2);
    }
};

struct CocycleObstruction {
    std::uint64_t p, q, i;     // the constraint instance that failed
    std::string detail;
};

struct CocycleResult {
    bool solvable = false;
    Cocycle cocycle;
    std::optional<CocycleObstruction> obstruction;
    bool verified = false;  // exhaustive re-check of the twisted condition
};

namespace detail {

inline int kind_weight(CurrentKind k) {
    switch (k) {
        case CurrentKind::Bosonic: return 0;
        case CurrentKind::Fermionic: return 4;
        case CurrentKind::Semionic: return 2;
    }
    return 0;
}

}  // namespace detail

// Backtracking search for c : C x C -> mu_8 with gauge c(0,.) = c(.,0) = 1 and
//   c(p, q+i) c(q, i) = eps^{p.q} c(q, p+i) c(p, i).
// Additively: x(p,q+i) + x(q,i) - x(q,p+i) - x(p,i) = w (p.q) mod 8.
// On success the condition is re-verified over all |C|^3 triples.
inline CocycleResult solve_cocycle(const BinaryCode& c, CurrentKind kind, bool verify = true) {
    CodePredicates pred = code_predicates(c);
    if (kind == CurrentKind::Fermionic && !pred.self_orthogonal)
        throw std::invalid_argument("fermionic code type requires a self-orthogonal code");
    if (kind == CurrentKind::Semionic && !(pred.self_orthogonal && pred.doubly_even))
        throw std::invalid_argument("semionic code type requires a doubly even self-orthogonal code");
    if (c.dim() > 6) throw std::runtime_error("cocycle search budget: |C| <= 2^6");

    auto words = c.codewords();
    const std::size_t m = words.size();
    std::map<std::uint64_t, std::size_t> word_index;
    for (std::size_t i = 0; i < m; ++i) word_index[words[i]] = i;
    const int w = detail::kind_weight(kind);

    // variables x(p,i) indexed by (p_idx, i_idx); -1 = unassigned
    std::vector<int> x(m * m, -1);
    auto vid = [&](std::size_t p, std::size_t i) { return p * m + i; };
    for (std::size_t i = 0; i < m; ++i) {
        x[vid(0, i)] = 0;  // gauge: words[0] = 0 since the zero word reduces first
        x[vid(i, 0)] = 0;
    }
    if (words[0] != 0) throw std::logic_error("codeword enumeration must start at 0");

    struct Constraint {
        std::size_t a, b, cc, d;  // x_a + x_b - x_c - x_d = rhs mod 8
        int rhs;
        std::uint64_t p, q, i;
    };
    std::vector<Constraint> cons;
    for (std::size_t pi = 0; pi < m; ++pi)
        for (std::size_t qi = 0; qi < m; ++qi)
            for (std::size_t ii = 0; ii < m; ++ii) {
                std::uint64_t p = words[pi], q = words[qi], i = words[ii];
                int rhs = (w * dot(p, q)) % 8;
                cons.push_back({vid(pi, word_index.at(q ^ i)), vid(qi, ii),
                                vid(qi, word_index.at(p ^ i)), vid(pi, ii), rhs, p, q, i});
            }

    // constraint propagation: derive the single unknown of a constraint
    std::optional<CocycleObstruction> bad;
    auto propagate = [&]() -> bool {
        bool progress = true;
        while (progress) {
            progress = false;
            for (const auto& cn : cons) {
                int known = 0;
                known += (x[cn.a] >= 0) + (x[cn.b] >= 0) + (x[cn.cc] >= 0) + (x[cn.d] >= 0);
                if (known == 4) {
                    int lhs = ((x[cn.a] + x[cn.b] - x[cn.cc] - x[cn.d]) % 8 + 8) % 8;
                    if (lhs != cn.rhs % 8) {
                        bad = CocycleObstruction{cn.p, cn.q, cn.i,
                                                 "violated: lhs zeta8^" + std::to_string(lhs) +
                                                     " != zeta8^" + std::to_string(cn.rhs)};
                        return false;
                    }
                } else if (known == 3) {
                    int target = cn.rhs;
                    if (x[cn.a] < 0) {
                        x[cn.a] = ((target - x[cn.b] + x[cn.cc] + x[cn.d]) % 8 + 8) % 8;
                        progress = true;
                    } else if (x[cn.b] < 0) {
                        x[cn.b] = ((target - x[cn.a] + x[cn.cc] + x[cn.d]) % 8 + 8) % 8;
                        progress = true;
                    } else if (x[cn.cc] < 0) {
                        x[cn.cc] = ((x[cn.a] + x[cn.b] - target - x[cn.d]) % 8 + 8) % 8;
                        progress = true;
                    } else {
                        x[cn.d] = ((x[cn.a] + x[cn.b] - target - x[cn.cc]) % 8 + 8) % 8;
                        progress = true;
                    }
                }
            }
        }
        return true;
    };

    // backtracking over remaining free variables, deterministic order
    std::vector<int> snapshot;
    std::function<bool()> search = [&]() -> bool {
        if (!propagate()) return false;
        std::size_t free_var = x.size();
        for (std::size_t v = 0; v < x.size(); ++v)
            if (x[v] < 0) { free_var = v; break; }
        if (free_var == x.size()) return true;
        std::vector<int> saved = x;
        auto saved_bad = bad;
        for (int val = 0; val < 8; ++val) {
            x[free_var] = val;
            if (search()) return true;
            x = saved;
            bad = saved_bad;
        }
        if (!bad) bad = CocycleObstruction{0, 0, 0, "no mu_8 assignment extends the gauge"};
        return false;
    };

    CocycleResult res;
    if (!search()) {
        res.solvable = false;
        res.obstruction = bad;
        return res;
    }
    res.solvable = true;
    res.cocycle.code = c;
    res.cocycle.kind = kind;
    for (std::size_t pi = 0; pi < m; ++pi)
        for (std::size_t ii = 0; ii < m; ++ii)
            res.cocycle.zeta8_exp[{words[pi], words[ii]}] = x[vid(pi, ii)];

    if (verify) {
        // independent exhaustive verification over all triples
        for (std::size_t pi = 0; pi < m; ++pi)
            for (std::size_t qi = 0; qi < m; ++qi)
                for (std::size_t ii = 0; ii < m; ++ii) {
                    std::uint64_t p = words[pi], q = words[qi], i = words[ii];
                    int lhs = res.cocycle.exponent(p, q ^ i) + res.cocycle.exponent(q, i);
                    int rhs = w * dot(p, q) + res.cocycle.exponent(q, p ^ i) + res.cocycle.exponent(p, i);
                    if (((lhs - rhs) % 8 + 8) % 8 != 0)
                        throw std::logic_error("cocycle verification failed after search");
                }
        res.verified = true;
    }
    return res;
}

}  // namespace cftk
