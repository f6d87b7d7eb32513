#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftk/koenigs.hpp"

using namespace cftk;

namespace {

std::vector<Cd> disk_samples(std::size_t per_ring = 16) {
    std::vector<Cd> zs;
    for (double r : {0.2, 0.45, 0.7, 0.9})
        for (std::size_t j = 0; j < per_ring; ++j)
            zs.push_back(std::polar(r, 2.0 * M_PI * double(j) / double(per_ring)));
    return zs;
}

// closed-form Bernoulli solution for sigma = z/(1 - a z):
// phi_t(z) = e^{-t} z / (1 - a z (1 - e^{-t}))
Cd bernoulli_phi(Cd a, double t, Cd z) {
    return std::exp(-t) * z / (Cd(1, 0) - a * z * (1.0 - std::exp(-t)));
}

}  // namespace

TEST_CASE("rho for identity and mobius koenigs maps") {
    auto gid = rho_from_koenigs(koenigs_identity(), 64);
    for (const Cd& v : gid.rho) CHECK(std::abs(v - Cd(1, 0)) < 1e-12);
    CHECK(std::abs(fourier_coeff(gid.fourier, 0) - Cd(1, 0)) < 1e-12);
    for (long n = 1; n < 8; ++n) CHECK(std::abs(fourier_coeff(gid.fourier, n)) < 1e-12);

    // sigma = z/(1 - z/2): rho(z) = 1 - z/2, rho_hat = {0:1, 1:-1/2}
    auto gm = rho_from_koenigs(koenigs_mobius(Cd(0.5, 0)), 64);
    for (std::size_t j = 0; j < 64; ++j) {
        Cd z = std::polar(1.0, 2.0 * M_PI * double(j) / 64.0);
        CHECK(std::abs(gm.rho[j] - (Cd(1, 0) - 0.5 * z)) < 1e-12);
    }
    CHECK(std::abs(fourier_coeff(gm.fourier, 0) - Cd(1, 0)) < 1e-12);
    CHECK(std::abs(fourier_coeff(gm.fourier, 1) - Cd(-0.5, 0)) < 1e-12);
    CHECK(std::abs(fourier_coeff(gm.fourier, -1)) < 1e-12);
    CHECK_FALSE(gm.band_warning);
}

TEST_CASE("scaled sigma violates the normalization precondition") {
    std::vector<Cd> cs{Cd(2, 0)};  // sigma'(0) = 2
    CHECK_THROWS_AS(koenigs_series(cs), std::invalid_argument);
}

TEST_CASE("evolve_phi: identity flow is e^{-t} z, t=0 is the identity") {
    auto s = make_semigroup(koenigs_identity(), 64);
    auto zs = disk_samples();
    auto at0 = evolve_phi(s, 0.0, zs);
    for (std::size_t i = 0; i < zs.size(); ++i) CHECK(at0[i] == zs[i]);
    for (double t : {0.25, 0.8}) {
        auto ph = evolve_phi(s, t, zs);
        for (std::size_t i = 0; i < zs.size(); ++i)
            CHECK(std::abs(ph[i] - std::exp(-t) * zs[i]) < 1e-9);
    }
}

TEST_CASE("evolve_phi matches the closed-form Bernoulli solution") {
    auto s = make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64);
    auto zs = disk_samples();
    for (double t : {0.25, std::log(2.0)}) {
        auto ph = evolve_phi(s, t, zs);
        for (std::size_t i = 0; i < zs.size(); ++i)
            CHECK(std::abs(ph[i] - bernoulli_phi(Cd(0.5, 0), t, zs[i])) < 1e-8);
    }
}

TEST_CASE("koenigs functional equation residual") {
    auto zs = disk_samples();
    auto sid = make_semigroup(koenigs_identity(), 64);
    CHECK(koenigs_functional_check(sid, 0.7, zs) < 1e-9);
    CHECK(koenigs_functional_check(sid, 0.0, zs) == 0.0);
    auto sm = make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64);
    CHECK(koenigs_functional_check(sm, std::log(2.0), zs) < 1e-8);
}

TEST_CASE("semigroup law on randomized times") {
    auto s = make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    auto zs = disk_samples(8);
    for (int k = 0; k < 5; ++k) {
        double t1 = ud(rng), t2 = ud(rng);
        for (Cd z : zs) {
            Cd a = evolve_phi_point(s, t1, evolve_phi_point(s, t2, z));
            Cd b = evolve_phi_point(s, t1 + t2, z);
            CHECK(std::abs(a - b) < 1e-7);
        }
    }
}

TEST_CASE("normalization condition via Richardson extrapolation") {
    auto s = make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64);
    Cd z(0.4, 0.3);
    Cd target = -s.koenigs.sigma(z) / s.koenigs.dsigma(z);
    // (phi_t(z) - z)/t at t = 1e-2, 1e-3, 1e-4 should approach the generator
    double prev_err = 1e9;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        Cd q = (evolve_phi_point(s, t, z) - z) / t;
        double err = std::abs(q - target);
        CHECK(err < prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err < 1e-3);
}

TEST_CASE("contraction |sigma(phi_t)| = e^{-t} |sigma|") {
    auto s = make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64);
    for (Cd z : disk_samples(8)) {
        Cd ph = evolve_phi_point(s, 0.6, z);
        CHECK(std::abs(std::abs(s.koenigs.sigma(ph)) - std::exp(-0.6) * std::abs(s.koenigs.sigma(z))) < 1e-8);
    }
}

TEST_CASE("fourier reconstruction of band-limited generators") {
    auto g = rho_from_koenigs(koenigs_mobius(Cd(0.5, 0)), 512);
    for (std::size_t j = 0; j < 512; j += 37) {
        double th = 2.0 * M_PI * double(j) / 512.0;
        CHECK(std::abs(fourier_eval(g.fourier, th) - g.rho[j]) < 1e-10);
    }
}

TEST_CASE("split_rho: constants, trigonometric split, flow property") {
    // rho == 1
    std::vector<Cd> ones(64, Cd(1, 0));
    auto s1 = split_rho(ones);
    for (double v : s1.g) CHECK(v == 0.0);
    for (double v : s1.f) CHECK(v == 1.0);
    CHECK(s1.gamma(0.37, 1.0) == 1.0);

    // rho(e^{i th}) = 1 - e^{i th}/2: f = 1 - cos/2, g = -sin/2
    std::vector<Cd> rho(64);
    for (std::size_t j = 0; j < 64; ++j) {
        double th = 2.0 * M_PI * double(j) / 64.0;
        rho[j] = Cd(1, 0) - 0.5 * std::polar(1.0, th);
    }
    auto sp = split_rho(rho);
    for (std::size_t j = 0; j < 64; ++j) {
        double th = 2.0 * M_PI * double(j) / 64.0;
        CHECK(std::abs(sp.f[j] - (1.0 - 0.5 * std::cos(th))) < 1e-14);
        CHECK(std::abs(sp.g[j] - (-0.5 * std::sin(th))) < 1e-14);
    }
    // flow property gamma_{s+u} = gamma_s o gamma_u
    for (double th0 : {0.3, 2.0, 5.5}) {
        double a = sp.gamma(0.45, sp.gamma(0.3, th0));
        double b = sp.gamma(0.75, th0);
        CHECK(std::abs(a - b) < 1e-9);
    }
    // variational derivative against finite differences
    auto [gv, gd] = sp.gamma_with_derivative(0.5, 1.2);
    double fd = (sp.gamma(0.5, 1.2 + 1e-6) - sp.gamma(0.5, 1.2 - 1e-6)) / 2e-6;
    CHECK(gv == Catch::Approx(sp.gamma(0.5, 1.2)).margin(1e-12));
    CHECK(gd == Catch::Approx(fd).margin(1e-6));
}

TEST_CASE("descriptor parsing") {
    CHECK(koenigs_from_descriptor("identity").desc == "identity");
    auto m = koenigs_from_descriptor("mobius:a=1/2");
    CHECK(std::abs(m.sigma(Cd(0.5, 0)) - Cd(0.5, 0) / Cd(0.75, 0)) < 1e-15);
    auto s = koenigs_from_descriptor("series:1/4,-1/8");
    CHECK(std::abs(s.sigma(Cd(0.1, 0)) - (Cd(0.1, 0) + 0.25 * Cd(0.01, 0) - 0.125 * Cd(0.001, 0))) < 1e-15);
    CHECK_THROWS_AS(koenigs_from_descriptor("nope"), std::invalid_argument);
}
