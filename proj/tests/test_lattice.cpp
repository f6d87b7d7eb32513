#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftk/lattice.hpp"

using namespace cftk;

TEST_CASE("A1^n: gram 2I, theta, 2n roots") {
    auto lat = code_lattice(builtin_code("trivial(4)"));
    CHECK(lat.gram == QMat::identity(4) * Scalar(2));
    CHECK(lat.integral);
    CHECK(lat.even);
    CHECK(lat.determinant() == 16);
    auto rep = lattice_report(lat, 4);
    CHECK(rep.root_count == 8);  // +-sqrt2 e_i
    CHECK(rep.min_norm == 2);
    // theta starts 1 + 8 q^2 + 24 q^4 + ...: norm-4 vectors are (+-2, 0,..) /sqrt2
    // and (+-1,+-1,..)*sqrt2: 8 + 16 = 24
    REQUIRE(rep.theta.size() >= 3);
    CHECK(rep.theta[0] == std::make_pair(Rational(0), Integer(1)));
    CHECK(rep.theta[1] == std::make_pair(Rational(2), Integer(8)));
    CHECK(rep.theta[2] == std::make_pair(Rational(4), Integer(24)));
}

TEST_CASE("hamming8 gives E8: even unimodular, 240 roots, theta 1+240q+2160q^2") {
    auto lat = code_lattice(builtin_code("hamming8"));
    CHECK(lat.integral);
    CHECK(lat.even);
    CHECK(lat.determinant() == 1);
    auto rep = lattice_report(lat, 4);
    CHECK(rep.root_count == 240);
    REQUIRE(rep.theta.size() >= 3);
    CHECK(rep.theta[1] == std::make_pair(Rational(2), Integer(240)));
    CHECK(rep.theta[2] == std::make_pair(Rational(4), Integer(2160)));
}

TEST_CASE("golay24 gives the Niemeier lattice with root system A1^24") {
    auto lat = code_lattice(builtin_code("golay24"));
    CHECK(lat.integral);
    CHECK(lat.even);
    CHECK(lat.determinant() == 1);
    auto rep = lattice_report(lat, 2);
    CHECK(rep.root_count == 48);
    CHECK(rep.min_norm == 2);
}

TEST_CASE("norm-2 theta coefficient equals 2n + 16 (number of weight-4 codewords)") {
    for (const char* name : {"hamming8", "trivial(6)", "pair11(8)", "repetition(4)"}) {
        auto c = builtin_code(name);
        auto lat = code_lattice(c);
        auto rep = lattice_report(lat, 2);
        long w4 = 0;
        for (auto w : c.codewords())
            if (weight(w) == 4) ++w4;
        CHECK(rep.root_count == Integer(2 * c.length + 16 * w4));
    }
}

TEST_CASE("integral <=> self-orthogonal and even <=> doubly even on random codes") {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 20; ++trial) {
        std::uniform_int_distribution<int> nl(2, 12);
        int n = nl(rng);
        std::uniform_int_distribution<std::uint64_t> wd(0, (1ull << n) - 1);
        std::vector<std::uint64_t> rows;
        std::uniform_int_distribution<int> kd(1, 4);
        for (int k = kd(rng); k > 0; --k) rows.push_back(wd(rng));
        auto c = code_from_rows(n, rows);
        auto p = code_predicates(c);
        auto lat = code_lattice(c);
        CHECK(lat.integral == p.self_orthogonal);
        CHECK(lat.even == p.doubly_even);
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("repetition(2): half-integer norms appear for non-self-orthogonal lifts") {
    // {00, 11} is self-orthogonal; use a code that is not: {0,1} of length 1
    auto c = code_from_rows(1, {1});
    auto p = code_predicates(c);
    CHECK_FALSE(p.even);
    auto lat = code_lattice(c);
    CHECK_FALSE(lat.integral);
    auto rep = lattice_report(lat, 2);
    // shortest vector is 1/sqrt2 with norm 1/2
    CHECK(rep.min_norm == Rational(1, 2));
}

TEST_CASE("determinant is 2^{n-2k}") {
    for (const char* name : {"hamming8", "trivial(3)", "repetition(5)", "pair11(6)"}) {
        auto c = builtin_code(name);
        auto lat = code_lattice(c);
        Rational expect = 1;
        long e = c.length - 2 * c.dim();
        if (e >= 0)
            for (long i = 0; i < e; ++i) expect *= 2;
        else
            for (long i = 0; i < -e; ++i) expect /= 2;
        CHECK(lat.determinant() == expect);
    }
}

TEST_CASE("budget guard") {
    auto lat = code_lattice(builtin_code("hamming8"));
    CHECK_THROWS_AS(lattice_report(lat, 100), EnumerationBudget);
}
