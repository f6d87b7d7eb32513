#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftk/annulus_geometry.hpp"

using namespace cftk;

TEST_CASE("mobius normal form maps the disk to itself") {
    Mobius m{Cd(0.3, -0.2), 0.7};
    REQUIRE(m.valid());
    for (double th = 0; th < 6.28; th += 0.5) {
        Cd z = std::polar(1.0, th);
        CHECK(std::abs(std::abs(m(z)) - 1.0) < 1e-12);
        CHECK(std::abs(m.inverse(m(z)) - z) < 1e-12);
    }
    CHECK(std::abs(m(Cd(0.2, 0.1))) < 1.0);
}

TEST_CASE("t = 0 gives the empty region") {
    AnnulusSpec spec{Mobius{}, make_semigroup(koenigs_identity(), 64), 0.0,
                     CircleDiffeo::identity(64)};
    auto r = annulus_interior(spec);
    CHECK(r.empty);
    CHECK(r.membership(Cd(0.75, 0)) == Membership::Outside);
}

TEST_CASE("round annulus: sigma = id, psi = id, t = ln 2") {
    AnnulusSpec spec{Mobius{}, make_semigroup(koenigs_identity(), 64), std::log(2.0),
                     CircleDiffeo::identity(64)};
    auto r = annulus_interior(spec, 1e-2, 256);
    REQUIRE_FALSE(r.empty);
    CHECK(r.membership(Cd(0.75, 0)) == Membership::Inside);
    CHECK(r.membership(Cd(0.25, 0)) == Membership::Outside);
    CHECK(r.membership(Cd(1.2, 0)) == Membership::Outside);
    // boundary points are indeterminate, the interior is open
    CHECK(r.membership(Cd(0.5, 0)) == Membership::Indeterminate);
    CHECK(r.membership(Cd(1.0, 0)) == Membership::Indeterminate);
}

TEST_CASE("membership is rotation equivariant") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(0, 2 * M_PI);
    auto base = make_semigroup(koenigs_identity(), 64);
    AnnulusSpec spec{Mobius{}, base, 0.5, CircleDiffeo::identity(64)};
    auto r0 = annulus_interior(spec, 1e-2, 256);
    for (int k = 0; k < 8; ++k) {
        double beta = ang(rng);
        AnnulusSpec rot{Mobius{Cd(0, 0), beta}, base, 0.5, CircleDiffeo::identity(64)};
        auto rr = annulus_interior(rot, 1e-2, 256);
        Cd q(0.72, 0.31);
        CHECK(r0.membership(q) == rr.membership(q * std::polar(1.0, -beta)));
    }
}

TEST_CASE("degenerate-thin region warns and reports empty") {
    AnnulusSpec spec{Mobius{}, make_semigroup(koenigs_identity(), 64), 1e-6,
                     CircleDiffeo::identity(64)};
    auto r = annulus_interior(spec, 1e-2, 128);
    CHECK(r.empty);
    CHECK(r.thin_warning);
}

TEST_CASE("svg dump contains both boundary paths") {
    AnnulusSpec spec{Mobius{}, make_semigroup(koenigs_mobius(Cd(0.5, 0)), 64), 0.8,
                     CircleDiffeo::identity(64)};
    auto r = annulus_interior(spec, 1e-2, 64);
    auto svg = region_to_svg(r);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("steelblue") != std::string::npos);
}
