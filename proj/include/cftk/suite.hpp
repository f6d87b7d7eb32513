#pragma once

#include <chrono>
#include <random>
#include <vector>

#include "cftk/annulus_ops.hpp"
#include "cftk/cocycle.hpp"
#include "cftk/fermion.hpp"
#include "cftk/intertwiner.hpp"
#include "cftk/lattice.hpp"
#include "cftk/report.hpp"
#include "cftk/sl2_bound.hpp"
#include "cftk/virasoro.hpp"

namespace cftk {

// The acceptance battery. Each criterion is pinned here with its tolerances;
// the `fast` profile trims grid sizes without touching any tolerance.
namespace suite {

inline const std::vector<VirasoroParams>& unitary_pairs() {
    static const std::vector<VirasoroParams> pairs{
        {Rational(1, 2), Rational(0)},      {Rational(1, 2), Rational(1, 2)},
        {Rational(1, 2), Rational(1, 16)},  {Rational(1), Rational(0)},
        {Rational(1), Rational(1)},
    };
    return pairs;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// 1. Adjointness and the commutation relation, exactly, |m|,|n| <= 4 at
//    level <= 4 for the five unitary pairs. Budget 30 s.
inline Report criterion_virasoro_exactness() {
    Timer timer;
    Report rep;
    rep.check = "virasoro-exactness";
    rep.params = {{"pairs", 5}, {"mode_band", 4}, {"level", 4}};
    long checked = 0;
    for (const auto& p : unitary_pairs()) {
        VirasoroContext ctx(p);
        VermaTruncation t = verma_basis(p, 4);
        for (long n = -4; n <= 4; ++n) {
            for (long la = 0; la <= 4; ++la) {
                long lb = la - n;
                if (lb < 0 || lb > 4) continue;
                for (const auto& ma : t.basis[static_cast<std::size_t>(la)])
                    for (const auto& mb : t.basis[static_cast<std::size_t>(lb)]) {
                        VirState sa = ctx.apply_mode(n, VirState{{ma, Scalar(1)}});
                        VirState sb = ctx.apply_mode(-n, VirState{{mb, Scalar(1)}});
                        Scalar lhs, rhs;
                        for (const auto& [m, x] : sa) lhs += x * ctx.inner(m, mb);
                        for (const auto& [m, x] : sb) rhs += ctx.inner(ma, m) * x.conj();
                        ++checked;
                        if (!(lhs == rhs)) {
                            rep.fail("adjointness at c=" + to_string(p.c) + " h=" + to_string(p.h) +
                                     " n=" + std::to_string(n));
                            break;
                        }
                    }
            }
        }
        for (long m = -4; m <= 4; ++m)
            for (long n = -4; n <= 4; ++n)
                for (long lvl = 0; lvl <= 4; ++lvl)
                    for (const auto& mono : t.basis[static_cast<std::size_t>(lvl)]) {
                        VirState x{{mono, Scalar(1)}};
                        VirState lhs = ctx.apply_mode(m, ctx.apply_mode(n, x));
                        state_add(lhs, ctx.apply_mode(n, ctx.apply_mode(m, x)), Scalar(-1));
                        VirState rhs = ctx.apply_mode(m + n, x);
                        for (auto& [mm, c] : rhs) c *= Scalar(Rational(m - n));
                        if (m == -n) state_add(rhs, x, Scalar(p.c * ratio(m * m * m - m, 12)));
                        state_add(lhs, rhs, Scalar(-1));
                        ++checked;
                        if (!lhs.empty()) {
                            rep.fail("commutator at c=" + to_string(p.c) + " h=" + to_string(p.h) +
                                     " (m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ")");
                        }
                    }
    }
    rep.metrics["identities_checked"] = checked;
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 30.0, "runtime budget 30 s exceeded");
    return rep;
}

// 2. Gram positivity at levels <= 6, with the frozen level-1/level-2 forms.
//    Budget 60 s.
inline Report criterion_gram(bool mutate = false) {
    Timer timer;
    Report rep;
    rep.check = "virasoro-gram";
    rep.params = {{"pairs", 5}, {"max_level", 6}};
    for (const auto& p : unitary_pairs()) {
        VirasoroContext ctx(p);
        VermaTruncation t = verma_basis(p, 6);
        for (long lvl = 0; lvl <= 6; ++lvl) {
            QMat g = gram_matrix(ctx, t, lvl);
            if (mutate && lvl == 2) g.at(0, 0) += Scalar(1);  // corrupted-build canary
            auto ld = ldlt_real(g);
            rep.require(ld.psd, "gram not PSD at c=" + to_string(p.c) + " h=" + to_string(p.h) +
                                    " level " + std::to_string(lvl));
            if (lvl == 1) {
                rep.require(g.at(0, 0) == Scalar(Rational(2) * p.h), "level-1 gram != [2h]");
            }
            if (lvl == 2) {
                bool ok = g.at(0, 0) == Scalar(Rational(4) * p.h + p.c / 2) &&
                          g.at(0, 1) == Scalar(Rational(6) * p.h) && g.at(1, 0) == Scalar(Rational(6) * p.h) &&
                          g.at(1, 1) == Scalar(Rational(8) * p.h * p.h + Rational(4) * p.h);
                rep.require(ok, "level-2 gram deviates from [[4h+c/2,6h],[6h,8h^2+4h]] at c=" +
                                    to_string(p.c) + " h=" + to_string(p.h));
            }
        }
    }
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 60.0, "runtime budget 60 s exceeded");
    return rep;
}

// 3. The dilation-translation norm bound on a 5 x 5 x 3 grid, cutoffs
//    16/32/64, nondecreasing in cutoff, strictly below the closed-form bound
//    with 1e-9 slack. Budget 60 s.
inline Report criterion_norm_bound(bool fast = false) {
    Timer timer;
    Report rep;
    rep.check = "sl2-norm-bound";
    const std::vector<double> s_values{0.5, 0.7, 0.9};
    const std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};
    const std::vector<double> t_values{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<long> cutoffs{16, 32, 64};
    if (fast) cutoffs = {16, 32};
    rep.params = {{"grid", "5x5x3"}, {"cutoffs", cutoffs}};
    double worst_margin = 1e300;
    for (double s : s_values)
        for (double f : fractions)
            for (double t : t_values) {
                std::complex<double> z = std::polar(f * s, 0.6);
                double r = (1.0 - f) * s;
                double prev = 0;
                for (long cutoff : cutoffs) {
                    auto res = sl2_norm_experiment(t, z, r, cutoff);
                    if (!(res.truncated_norm <= res.paper_bound - 1e-9))
                        rep.fail("bound violated at s=" + std::to_string(s) + " f=" + std::to_string(f) +
                                 " t=" + std::to_string(t) + " cutoff=" + std::to_string(cutoff));
                    if (!(res.truncated_norm >= prev - 1e-12))
                        rep.fail("norm not nondecreasing in cutoff at s=" + std::to_string(s));
                    prev = res.truncated_norm;
                    worst_margin = std::min(worst_margin, res.paper_bound - res.truncated_norm);
                }
            }
    rep.metrics["worst_margin"] = worst_margin;
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 60.0, "runtime budget 60 s exceeded");
    return rep;
}

// 4. Semigroup law, Koenigs functional equation, and the closed forms for
//    sigma = id and sigma = z/(1 - z/2), residuals < 1e-8 at 64 samples.
//    Budget 10 s.
inline Report criterion_semigroup() {
    Timer timer;
    Report rep;
    rep.check = "semigroup-koenigs";
    rep.params = {{"samples", 64}, {"times", {0.25, "ln2"}}};
    std::vector<Cd> zs;
    for (double r : {0.2, 0.45, 0.7, 0.9})
        for (int j = 0; j < 16; ++j) zs.push_back(std::polar(r, 2.0 * M_PI * j / 16.0));
    const double times[2] = {0.25, std::log(2.0)};
    double worst = 0;

    auto run = [&](const SemigroupSpec& s, auto closed_form, const char* name) {
        for (double t : times) {
            double fr = koenigs_functional_check(s, t, zs);
            worst = std::max(worst, fr);
            if (!(fr < 1e-8)) rep.fail(std::string("functional equation residual ") + name);
            auto ph = evolve_phi(s, t, zs);
            for (std::size_t i = 0; i < zs.size(); ++i) {
                double dr = std::abs(ph[i] - closed_form(t, zs[i]));
                worst = std::max(worst, dr);
                if (!(dr < 1e-8)) {
                    rep.fail(std::string("closed form residual ") + name);
                    break;
                }
            }
        }
        // semigroup law over the pinned times
        for (double t1 : times)
            for (double t2 : times)
                for (std::size_t i = 0; i < zs.size(); i += 7) {
                    Cd a = evolve_phi_point(s, t1, evolve_phi_point(s, t2, zs[i]));
                    Cd b = evolve_phi_point(s, t1 + t2, zs[i]);
                    worst = std::max(worst, std::abs(a - b));
                    if (!(std::abs(a - b) < 1e-8)) {
                        rep.fail(std::string("semigroup law residual ") + name);
                        break;
                    }
                }
    };
    auto sid = make_semigroup(koenigs_identity(), 64);
    run(sid, [](double t, Cd z) { return std::exp(-t) * z; }, "sigma=id");
    auto sm = make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64);
    run(sm, [](double t, Cd z) { return std::exp(-t) * z / (Cd(1, 0) - 0.5 * z * (1.0 - std::exp(-t))); },
        "sigma=mobius(1/2)");
    rep.metrics["max_residual"] = worst;
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 10.0, "runtime budget 10 s exceeded");
    return rep;
}

// 5. Trotter Cauchy convergence for rho(z) = 1 - z/2 on L(1/2,0), t = 1:
//    d(N,2N) strictly decreasing over N in {8,16,32,64}, d(64,128) < 1e-3 at
//    cutoff 8, and the g = 0 product equals e^{-tL(f)} to 1e-12. Budget 2 min.
inline Report criterion_trotter(bool fast = false) {
    Timer timer;
    Report rep;
    rep.check = "trotter";
    std::vector<long> cutoffs{4, 6, 8};
    if (fast) cutoffs = {4, 6};
    rep.params = {{"rho", "1 - z/2"}, {"t", 1.0}, {"cutoffs", cutoffs}};
    const double t_time = 1.0;
    VirasoroParams ising{Rational(1, 2), Rational(0)};
    IrreducibleTruncation trunc = irreducible_truncation(ising, cutoffs.back());
    auto gen = rho_from_koenigs(koenigs_mobius(Cd(0.5, 0)), 256);
    auto split = split_rho(gen.rho);
    std::map<long, Cd> ff, gf;
    long m = static_cast<long>(split.f_fourier.size());
    for (long n = -m / 2 + 1; n < m / 2; ++n) {
        Cd f = fourier_coeff(split.f_fourier, n);
        Cd g = fourier_coeff(split.g_fourier, n);
        if (std::abs(f) > 1e-13) ff[n] = f;
        if (std::abs(g) > 1e-13) gf[n] = g;
    }
    nlohmann::json dists = nlohmann::json::object();
    for (long cutoff : cutoffs) {
        std::vector<double> d;
        auto prev = trotter_product(trunc, ff, gf, t_time, 8, cutoff);
        for (long n : {16L, 32L, 64L, 128L}) {
            auto cur = trotter_product(trunc, ff, gf, t_time, n, cutoff);
            d.push_back((cur.mat - prev.mat).norm());
            prev = cur;
        }
        dists["cutoff" + std::to_string(cutoff)] = d;
        for (std::size_t i = 1; i < d.size(); ++i)
            if (!(d[i] < d[i - 1]))
                rep.fail("Cauchy distances not strictly decreasing at cutoff " + std::to_string(cutoff));
        if (cutoff == 8 && !(d.back() < 1e-3)) rep.fail("d(64,128) >= 1e-3 at cutoff 8");
    }
    // g = 0 collapses to e^{-tL(f)} for every N
    auto direct = trotter_product(trunc, ff, {}, t_time, 1, 6);
    for (long n : {8L, 16L, 64L}) {
        auto p = trotter_product(trunc, ff, {}, t_time, n, 6);
        double diff = (p.mat - direct.mat).norm();
        if (!(diff < 1e-12)) rep.fail("g=0 product deviates from e^{-tL(f)} at N=" + std::to_string(n));
    }
    rep.metrics["cauchy_distances"] = dists;
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 120.0, "runtime budget 2 min exceeded");
    return rep;
}

// 6. The fermion exactness battery at cutoff 3 plus the character through q^4.
//    Budget 2 min.
inline Report criterion_fermion(std::uint64_t seed, bool fast = false) {
    Timer timer;
    Report rep;
    rep.check = "fermion-vosa";
    rep.params = {{"cutoff", 3}, {"borcherds_samples", fast ? 40 : 100},
                  {"commutator_samples", fast ? 20 : 50}, {"seed", seed}};
    FermionContext ctx;
    FermionSpace sp = fock_basis(Rational(3));

    // CAR relations within the cutoff band
    for (long r = -5; r <= 5 && rep.status == "pass"; r += 2)
        for (long t = -5; t <= 5; t += 2)
            for (const auto& blk : sp.basis)
                for (const auto& st : blk) {
                    FermionState s{{st, Scalar(1)}};
                    auto anti = [&](Fam f1, long a, Fam f2, long b) {
                        FermionState sum = car_apply(f1, a, car_apply(f2, b, s));
                        state_add(sum, car_apply(f2, b, car_apply(f1, a, s)), Scalar(1));
                        return sum;
                    };
                    if (!anti(Fam::Psi, r, Fam::Psi, t).empty() ||
                        !anti(Fam::Star, r, Fam::Star, t).empty()) {
                        rep.fail("CAR same-family anticommutator nonzero");
                        break;
                    }
                    FermionState mixed = anti(Fam::Psi, r, Fam::Star, t);
                    bool ok = (r + t == 0) ? (mixed.size() == 1 && mixed.begin()->second == Scalar(1) &&
                                              mixed.begin()->first == st)
                                           : mixed.empty();
                    if (!ok) {
                        rep.fail("CAR mixed anticommutator wrong");
                        break;
                    }
                }

    std::mt19937_64 rng(seed);
    auto random_word = [&]() {
        std::uniform_int_distribution<long> widx(0, static_cast<long>(sp.basis.size()) - 1);
        long w = widx(rng);
        while (sp.basis[static_cast<std::size_t>(w)].empty()) w = widx(rng);
        std::uniform_int_distribution<long> idx(0, static_cast<long>(sp.basis[static_cast<std::size_t>(w)].size()) - 1);
        return sp.basis[static_cast<std::size_t>(w)][static_cast<std::size_t>(idx(rng))];
    };
    std::uniform_int_distribution<long> md(-2, 2);

    // grading law and L_{-1}-derivative on sampled words
    for (int trial = 0; trial < 25; ++trial) {
        FockState a = random_word(), c = random_word();
        long n = md(rng);
        for (const auto& [w, x] : ctx.mode_apply(a, n, c)) {
            (void)x;
            if (w.weight() != c.weight() - Rational(n) - 1 + a.weight()) {
                rep.fail("grading law violated");
                break;
            }
        }
        FermionState la = ctx.virasoro(-1, FermionState{{a, Scalar(1)}});
        FermionState lhs = ctx.mode_apply(la, n, FermionState{{c, Scalar(1)}});
        FermionState rhs = ctx.mode_apply(a, n - 1, c);
        for (auto& [w, x] : rhs) x *= Scalar(Rational(-n));
        state_add(lhs, rhs, Scalar(-1));
        if (!lhs.empty()) rep.fail("L_{-1}-derivative violated");
    }

    // Borcherds identity on seeded samples
    int nb = fast ? 40 : 100;
    for (int trial = 0; trial < nb; ++trial) {
        FermionState a{{random_word(), Scalar(1)}}, b{{random_word(), Scalar(1)}},
            c{{random_word(), Scalar(1)}};
        if (!check_borcherds(ctx, a, b, c, md(rng), md(rng), md(rng)).empty()) {
            rep.fail("Borcherds identity residual nonzero at sample " + std::to_string(trial));
            break;
        }
    }
    // commutator formula on seeded samples
    int nc = fast ? 20 : 50;
    for (int trial = 0; trial < nc; ++trial) {
        FockState wa = random_word(), wb = random_word(), wc = random_word();
        long mm = md(rng), kk = md(rng);
        FermionState a{{wa, Scalar(1)}}, b{{wb, Scalar(1)}};
        FermionState lhs = ctx.mode_apply(a, mm, ctx.mode_apply(b, kk, FermionState{{wc, Scalar(1)}}));
        FermionState swap = ctx.mode_apply(b, kk, ctx.mode_apply(a, mm, FermionState{{wc, Scalar(1)}}));
        state_add(lhs, swap, Scalar(((wa.parity() * wb.parity()) % 2 == 0) ? -1 : 1));
        long jmax = (wa.twice_weight() + wb.twice_weight()) / 2 - 1;
        if (mm >= 0) jmax = std::min(jmax, mm);
        for (long j = 0; j <= jmax; ++j) {
            Integer bc = binomial(mm, j);
            if (bc == 0) continue;
            FermionState d = ctx.mode_apply(a, j, b);
            if (d.empty()) continue;
            state_add(lhs, ctx.mode_apply(d, mm + kk - j, FermionState{{wc, Scalar(1)}}),
                      -Scalar(Rational(bc)));
        }
        if (!lhs.empty()) {
            rep.fail("commutator formula residual nonzero at sample " + std::to_string(trial));
            break;
        }
    }

    // invariance axiom for omega, nu, psi_{-1/2}|0>
    for (const auto& [name, state] :
         {std::pair<std::string, FermionState>{"omega", FermionState{{FockState{}, Scalar(1)}}},
          {"nu", FermionContext::conformal_vector()},
          {"psi(-1/2)|0>", FermionState{{FockState{{1}, {}}, Scalar(1)}}}}) {
        auto inv = check_invariance(ctx, sp, state);
        if (!inv.all_zero) rep.fail("invariance axiom residual nonzero for " + name);
    }

    // character through q^4 with the frozen leading coefficients
    FermionSpace sp4 = fock_basis(Rational(4));
    QSeries ch = character(sp4);
    std::vector<long> expect{1, 2, 1, 2, 4, 4, 5, 6, 9};
    bool chok = ch.terms.size() == expect.size();
    for (std::size_t i = 0; chok && i < expect.size(); ++i)
        chok = ch.terms[i].first == ratio(static_cast<long>(i), 2) &&
               ch.terms[i].second == expect[i];
    // independent product expansion
    {
        std::map<long, Integer> prod{{0, Integer(1)}};
        for (long n = 1; 2 * n - 1 <= 8; ++n)
            for (int repccl = 0; repccl < 2; ++repccl) {
                std::map<long, Integer> next = prod;
                for (const auto& [e, ccf] : prod)
                    if (e + 2 * n - 1 <= 8) next[e + 2 * n - 1] += ccf;
                prod = std::move(next);
            }
        for (const auto& [e, ccf] : prod) {
            bool found = false;
            for (const auto& [we, wc] : ch.terms)
                if (we == ratio(e, 2) && wc == ccf) found = true;
            if (!found) chok = false;
        }
    }
    rep.require(chok, "character does not match the product expansion through q^4");
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 120.0, "runtime budget 2 min exceeded");
    return rep;
}

// 7. Segal round-annulus relation, exact, k in {0,1,2}, r in {1/3,1/2},
//    cutoff 4. Budget 10 s.
inline Report criterion_segal() {
    Timer timer;
    Report rep;
    rep.check = "segal-round-annulus";
    rep.params = {{"k", {0, 1, 2}}, {"r", {"1/3", "1/2"}}, {"cutoff", 4}};
    for (long k : {0L, 1L, 2L})
        for (const char* rs : {"1/3", "1/2"}) {
            auto res = segal_round_annulus_check(rational_from_string(rs), k, Rational(4));
            rep.require(res.exact_zero,
                        "Segal relation residual at k=" + std::to_string(k) + " r=" + rs + " " + res.witness);
        }
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 10.0, "runtime budget 10 s exceeded");
    return rep;
}

// 8. Parity-descent intertwiner axioms at cutoff 3 and the delta-shift table.
//    Budget 30 s.
inline Report criterion_intertwiner(std::uint64_t seed) {
    Timer timer;
    Report rep;
    rep.check = "intertwiner-descent";
    rep.params = {{"cutoff", 3}, {"seed", seed}};
    bool d1 = delta_shift(Rational(0), Rational(0), Rational(0)) == 0;
    bool d2 = delta_shift(Rational(1, 2), Rational(0), Rational(1, 2)) == 0;
    bool d3 = delta_shift(Rational(1, 4), Rational(1, 4), Rational(0)) == Rational(1, 2);
    rep.require(d1 && d2 && d3, "delta_shift table mismatch");

    FermionContext ctx;
    FermionSpace sp = fock_basis(Rational(3));
    auto even = parity_projection(sp, 0);
    auto odd = parity_projection(sp, 1);
    FermionState gen{{FockState{{1}, {}}, Scalar(1)}};
    auto y = descent_modes(ctx, odd, even, gen, 6);
    for (const auto& r : check_intertwiner_axioms(ctx, y, static_cast<unsigned>(seed)))
        rep.require(r.all_zero, "axiom '" + r.axiom + "' residual nonzero: " + r.witness);
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 30.0, "runtime budget 30 s exceeded");
    return rep;
}

// 9. Hamming/Golay lattices and the predicate <-> flag equivalences on 20
//    seeded random codes of length <= 12. Budget 3 min.
inline Report criterion_codes(std::uint64_t seed, bool fast = false) {
    Timer timer;
    Report rep;
    rep.check = "codes-lattices";
    int n_random = fast ? 8 : 20;
    rep.params = {{"random_codes", n_random}, {"seed", seed}};
    auto h = builtin_code("hamming8");
    auto hp = code_predicates(h);
    rep.require(hp.even && hp.doubly_even && hp.self_orthogonal && hp.self_dual,
                "hamming8 predicates not all true");
    auto hl = code_lattice(h);
    rep.require(hl.even && hl.determinant() == 1, "Lambda_hamming8 not even unimodular");
    auto hrep = lattice_report(hl, 4);
    rep.require(hrep.root_count == 240, "Lambda_hamming8 root count != 240");
    rep.require(hrep.theta.size() >= 3 && hrep.theta[1].second == 240 && hrep.theta[2].second == 2160,
                "Lambda_hamming8 theta != 1 + 240q + 2160q^2");

    auto g = builtin_code("golay24");
    auto gl = code_lattice(g);
    rep.require(gl.even && gl.determinant() == 1, "Lambda_golay24 not even unimodular");
    auto grep = lattice_report(gl, 2);
    rep.require(grep.root_count == 48, "Lambda_golay24 root count != 48 (A1^24)");

    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < n_random; ++trial) {
        std::uniform_int_distribution<int> nl(2, 12);
        int n = nl(rng);
        std::uniform_int_distribution<std::uint64_t> wd(0, (1ull << n) - 1);
        std::vector<std::uint64_t> rows;
        std::uniform_int_distribution<int> kd(1, 4);
        for (int k = kd(rng); k > 0; --k) rows.push_back(wd(rng));
        auto c = code_from_rows(n, rows);
        auto p = code_predicates(c);
        auto lat = code_lattice(c);
        rep.require(lat.integral == p.self_orthogonal,
                    "integral <=> self-orthogonal failed on random code " + std::to_string(trial));
        rep.require(lat.even == p.doubly_even,
                    "even <=> doubly-even failed on random code " + std::to_string(trial));
    }
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 180.0, "runtime budget 3 min exceeded");
    return rep;
}

// 10. Cocycle solving/verification plus exhaustive braid tables on length 4.
//     Budget 30 s.
inline Report criterion_cocycles() {
    Timer timer;
    Report rep;
    rep.check = "cocycles-braids";
    rep.params = {{"codes", {"trivial(4)", "{00,11}", "{0000,1111}"}}};
    for (auto kind : {CurrentKind::Bosonic, CurrentKind::Fermionic, CurrentKind::Semionic}) {
        auto res = solve_cocycle(builtin_code("trivial(4)"), kind);
        rep.require(res.solvable && res.verified, "trivial-code cocycle failed");
    }
    auto r2 = solve_cocycle(builtin_code("repetition(2)"), CurrentKind::Fermionic);
    rep.require(r2.solvable && r2.verified, "{00,11} fermionic cocycle failed");
    auto r4 = solve_cocycle(builtin_code("repetition(4)"), CurrentKind::Semionic);
    rep.require(r4.solvable && r4.verified, "{0000,1111} semionic cocycle failed");

    for (std::uint64_t p = 0; p < 16; ++p)
        for (std::uint64_t q = 0; q < 16; ++q) {
            int d = dot(p, q);
            if (braid_sign(p, q, CurrentKind::Bosonic) != Scalar(1)) rep.fail("bosonic braid table");
            if (braid_sign(p, q, CurrentKind::Fermionic) != Scalar((d % 2 == 0) ? 1 : -1))
                rep.fail("fermionic braid table");
            if (d % 2 == 0) {
                if (braid_sign(p, q, CurrentKind::Semionic) != Scalar((d % 4 == 0) ? 1 : -1))
                    rep.fail("semionic braid table");
            } else {
                bool threw = false;
                try {
                    braid_sign(p, q, CurrentKind::Semionic);
                } catch (const SemionicParity&) {
                    threw = true;
                }
                if (!threw) rep.fail("semionic parity violation not rejected");
            }
        }
    rep.metrics["elapsed_s"] = timer.seconds();
    rep.require(timer.seconds() < 30.0, "runtime budget 30 s exceeded");
    return rep;
}

struct SuiteResult {
    std::vector<Report> reports;
    bool all_pass = true;
    double elapsed_s = 0;

    Report aggregate() const {
        Report rep;
        rep.check = "suite";
        rep.status = all_pass ? "pass" : "fail";
        rep.metrics["elapsed_s"] = elapsed_s;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports)
            arr.push_back(nlohmann::json{{"check", r.check}, {"status", r.status}});
        rep.metrics["criteria"] = arr;
        for (const auto& r : reports)
            if (r.status != "pass") rep.metrics["first_failure"] = r.check;
        return rep;
    }
};

// profile: "fast" trims grids, "full" runs the battery exactly as pinned.
// `mutate` flips the corrupted-build canary inside the Gram criterion.
inline SuiteResult run_suite(const std::string& profile, const RunConfig& cfg, bool mutate = false) {
    bool fast = profile == "fast";
    if (!fast && profile != "full") throw std::invalid_argument("profile must be fast or full");
    Timer timer;
    SuiteResult res;
    res.reports.push_back(criterion_virasoro_exactness());
    res.reports.push_back(criterion_gram(mutate));
    res.reports.push_back(criterion_norm_bound(fast));
    res.reports.push_back(criterion_semigroup());
    res.reports.push_back(criterion_trotter(fast));
    res.reports.push_back(criterion_fermion(cfg.seed, fast));
    res.reports.push_back(criterion_segal());
    res.reports.push_back(criterion_intertwiner(cfg.seed));
    res.reports.push_back(criterion_codes(cfg.seed, fast));
    res.reports.push_back(criterion_cocycles());
    for (const auto& r : res.reports) res.all_pass = res.all_pass && (r.status == "pass");
    res.elapsed_s = timer.seconds();
    return res;
}

}  // namespace suite
}  // namespace cftk
