#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftk/scalar.hpp"

using namespace cftk;

namespace {

Scalar random_scalar(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 9);
    return Scalar(ratio(num(rng), den(rng)), ratio(num(rng), den(rng)));
}

}  // namespace

TEST_CASE("rational parsing round-trips") {
    CHECK(rational_from_string("3/4") == Rational(3, 4));
    CHECK(rational_from_string("-7") == Rational(-7));
    CHECK(to_string(rational_from_string("6/8")) == "3/4");
    CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_string("abc"), std::invalid_argument);
}

TEST_CASE("field axioms on randomized triples, exactly") {
    std::mt19937_64 rng(20240811);
    for (int k = 0; k < 200; ++k) {
        Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Scalar(0));
        if (!a.is_zero()) {
            Scalar inv = Scalar(1) / a;
            CHECK(a * inv == Scalar(1));
        }
    }
}

TEST_CASE("conjugation is an involutive field automorphism") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        Scalar a = random_scalar(rng), b = random_scalar(rng);
        CHECK(a.conj().conj() == a);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a + b).conj() == a.conj() + b.conj());
    }
    CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
    CHECK(Scalar::i_pow(7) == -Scalar::i());
}

TEST_CASE("binomials with negative upper index") {
    // binom(-1, k) = (-1)^k
    for (long k = 0; k <= 6; ++k) CHECK(binomial(-1, k) == ((k % 2 == 0) ? 1 : -1));
    CHECK(binomial(-2, 3) == -4);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(3, 9) == 0);
    CHECK(binomial(4, -1) == 0);
}

TEST_CASE("scalar literals") {
    CHECK(scalar_from_string("1/2+3/4i") == Scalar(Rational(1, 2), Rational(3, 4)));
    CHECK(scalar_from_string("-i") == -Scalar::i());
    CHECK(scalar_from_string("2") == Scalar(2));
    CHECK(scalar_from_string("1-i") == Scalar(Rational(1), Rational(-1)));
}
