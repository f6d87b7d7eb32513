#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftk/exact_linalg.hpp"

using namespace cftk;

namespace {

QMat random_real(std::mt19937_64& rng, long r, long c) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    QMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) m.at(i, j) = Scalar(ratio(num(rng), den(rng)));
    return m;
}

// cofactor-expansion determinant, independent of Bareiss
Rational det_cofactor(const QMat& m) {
    if (m.rows == 1) return m.at(0, 0).re;
    Rational s = 0;
    for (long j = 0; j < m.cols; ++j) {
        QMat sub(m.rows - 1, m.cols - 1);
        for (long i = 1; i < m.rows; ++i) {
            long cc = 0;
            for (long k = 0; k < m.cols; ++k) {
                if (k == j) continue;
                sub.at(i - 1, cc++) = m.at(i, k);
            }
        }
        Rational term = m.at(0, j).re * det_cofactor(sub);
        s += (j % 2 == 0) ? term : -term;
    }
    return s;
}

}  // namespace

TEST_CASE("bareiss determinant matches cofactor expansion") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 30; ++k) {
        QMat m = random_real(rng, 4, 4);
        CHECK(det_real(m) == det_cofactor(m));
    }
}

TEST_CASE("kernel vectors are annihilated, rank + nullity = cols") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        QMat m = random_real(rng, 3, 5);
        auto ker = kernel_basis_real(m);
        auto br = bareiss_eliminate(m);
        CHECK(br.rank + static_cast<long>(ker.size()) == m.cols);
        for (const auto& v : ker) {
            for (long i = 0; i < m.rows; ++i) {
                Rational s = 0;
                for (long j = 0; j < m.cols; ++j) s += m.at(i, j).re * v[static_cast<std::size_t>(j)];
                CHECK(s == 0);
            }
        }
    }
}

TEST_CASE("ldlt reconstructs and detects indefiniteness") {
    QMat g(3, 3);
    // A^T A is PSD
    std::mt19937_64 rng(8);
    QMat a = random_real(rng, 3, 3);
    for (long i = 0; i < 3; ++i)
        for (long j = 0; j < 3; ++j) {
            Scalar s;
            for (long k = 0; k < 3; ++k) s += a.at(k, i) * a.at(k, j);
            g.at(i, j) = s;
        }
    auto r = ldlt_real(g);
    REQUIRE(r.psd);
    // L D L^T == G
    QMat d(3, 3);
    for (long i = 0; i < 3; ++i) d.at(i, i) = Scalar(r.d[static_cast<std::size_t>(i)]);
    CHECK(r.l * d * r.l.adjoint() == g);

    QMat bad = QMat::identity(2);
    bad.at(1, 1) = Scalar(-1);
    auto rb = ldlt_real(bad);
    CHECK_FALSE(rb.psd);
    CHECK(rb.bad_index == 1);
}

TEST_CASE("psd with kernel passes ldlt") {
    QMat g(2, 2);
    g.at(0, 0) = Scalar(1);
    g.at(0, 1) = Scalar(1);
    g.at(1, 0) = Scalar(1);
    g.at(1, 1) = Scalar(1);
    auto r = ldlt_real(g);
    CHECK(r.psd);
}

TEST_CASE("singular matrix has zero determinant") {
    QMat m(2, 2);
    m.at(0, 0) = Scalar(Rational(1, 2));
    m.at(0, 1) = Scalar(1);
    m.at(1, 0) = Scalar(Rational(1, 4));
    m.at(1, 1) = Scalar(Rational(1, 2));
    CHECK(det_real(m) == 0);
}
