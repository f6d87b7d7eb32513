#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cftk/scalar.hpp"

namespace cftk {

// Dense matrix over Gaussian rationals.
struct QMat {
    long rows = 0, cols = 0;
    std::vector<Scalar> a;

    QMat() = default;
    QMat(long r, long c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c)) {}

    static QMat identity(long n) {
        QMat m(n, n);
        for (long i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
        return m;
    }

    Scalar& at(long i, long j) { return a[static_cast<std::size_t>(i * cols + j)]; }
    const Scalar& at(long i, long j) const { return a[static_cast<std::size_t>(i * cols + j)]; }

    bool is_zero() const {
        for (const auto& x : a)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_real() const {
        for (const auto& x : a)
            if (x.im != 0) return false;
        return true;
    }

    QMat adjoint() const {
        QMat m(cols, rows);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj();
        return m;
    }

    QMat operator*(const QMat& o) const {
        if (cols != o.rows) throw std::invalid_argument("QMat shape mismatch in product");
        QMat m(rows, o.cols);
        for (long i = 0; i < rows; ++i)
            for (long k = 0; k < cols; ++k) {
                const Scalar& x = at(i, k);
                if (x.is_zero()) continue;
                for (long j = 0; j < o.cols; ++j) {
                    const Scalar& y = o.at(k, j);
                    if (!y.is_zero()) m.at(i, j) += x * y;
                }
            }
        return m;
    }
    QMat operator+(const QMat& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("QMat shape mismatch in sum");
        QMat m = *this;
        for (std::size_t i = 0; i < a.size(); ++i) m.a[i] += o.a[i];
        return m;
    }
    QMat operator-(const QMat& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("QMat shape mismatch in difference");
        QMat m = *this;
        for (std::size_t i = 0; i < a.size(); ++i) m.a[i] -= o.a[i];
        return m;
    }
    QMat operator*(const Scalar& s) const {
        QMat m = *this;
        for (auto& x : m.a) x *= s;
        return m;
    }
    friend bool operator==(const QMat& x, const QMat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    // largest |entry| as double, for diagnostics
    double max_abs() const {
        double m = 0;
        for (const auto& x : a) {
            double v = std::abs(to_double(x.re)) + std::abs(to_double(x.im));
            if (v > m) m = v;
        }
        return m;
    }
};

namespace detail {

// Clear denominators of a real QMat into an Integer matrix (row scaling is not
// used: one global scale keeps symmetry intact for later use).
inline std::vector<Integer> to_integer_matrix(const QMat& m, Integer& scale) {
    scale = 1;
    for (const auto& x : m.a) {
        if (x.im != 0) throw std::invalid_argument("integer elimination requires a real matrix");
        mpz_class den = x.re.get_den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
        scale = scale / g * den;
    }
    std::vector<Integer> z(m.a.size());
    for (std::size_t i = 0; i < m.a.size(); ++i) {
        Rational v = m.a[i].re * scale;
        z[i] = v.get_num();
    }
    return z;
}

}  // namespace detail

// Fraction-free Bareiss elimination on a real matrix. Returns the pivot
// columns (a maximal independent set) and, optionally, the determinant for
// square input. No floating-point rank decisions anywhere.
struct BareissResult {
    std::vector<long> pivot_cols;
    Rational det;  // valid for square input only
    long rank = 0;
};

inline BareissResult bareiss_eliminate(const QMat& m) {
    Integer scale;
    std::vector<Integer> w = detail::to_integer_matrix(m, scale);
    const long R = m.rows, C = m.cols;
    auto at = [&](long i, long j) -> Integer& { return w[static_cast<std::size_t>(i * C + j)]; };

    BareissResult res;
    Integer prev = 1;
    long row = 0;
    long sign = 1;
    for (long col = 0; col < C && row < R; ++col) {
        long piv = -1;
        for (long i = row; i < R; ++i)
            if (at(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row) {
            for (long j = 0; j < C; ++j) std::swap(at(piv, j), at(row, j));
            sign = -sign;
        }
        for (long i = row + 1; i < R; ++i) {
            for (long j = col + 1; j < C; ++j) {
                Integer t = at(row, col) * at(i, j) - at(i, col) * at(row, j);
                mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            at(i, col) = 0;
        }
        prev = at(row, col);
        res.pivot_cols.push_back(col);
        ++row;
    }
    res.rank = row;
    if (R == C) {
        if (res.rank < R) {
            res.det = 0;
        } else {
            // pivot of the last row is det of the integer matrix
            Rational d(prev * sign);
            Rational s(scale);
            Rational sp = 1;
            for (long i = 0; i < R; ++i) sp *= s;
            res.det = d / sp;
        }
    }
    return res;
}

inline Rational det_real(const QMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    if (m.rows == 0) return 1;
    return bareiss_eliminate(m).det;
}

// Kernel basis of a real matrix (column null space), computed from the
// Bareiss pivot structure with exact rational back-substitution.
inline std::vector<std::vector<Rational>> kernel_basis_real(const QMat& m) {
    // reduced row echelon form over Q (exact); small matrices only
    const long R = m.rows, C = m.cols;
    std::vector<std::vector<Rational>> w(static_cast<std::size_t>(R), std::vector<Rational>(static_cast<std::size_t>(C)));
    for (long i = 0; i < R; ++i)
        for (long j = 0; j < C; ++j) {
            if (m.at(i, j).im != 0) throw std::invalid_argument("kernel_basis_real requires a real matrix");
            w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.at(i, j).re;
        }
    std::vector<long> pivot_of_col(static_cast<std::size_t>(C), -1);
    long row = 0;
    for (long col = 0; col < C && row < R; ++col) {
        long piv = -1;
        for (long i = row; i < R; ++i)
            if (w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(w[static_cast<std::size_t>(piv)], w[static_cast<std::size_t>(row)]);
        Rational p = w[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        for (long j = col; j < C; ++j) w[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] /= p;
        for (long i = 0; i < R; ++i) {
            if (i == row) continue;
            Rational f = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (long j = col; j < C; ++j)
                w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= f * w[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        }
        pivot_of_col[static_cast<std::size_t>(col)] = row;
        ++row;
    }
    std::vector<std::vector<Rational>> kernel;
    for (long col = 0; col < C; ++col) {
        if (pivot_of_col[static_cast<std::size_t>(col)] >= 0) continue;
        std::vector<Rational> v(static_cast<std::size_t>(C));
        v[static_cast<std::size_t>(col)] = 1;
        for (long c2 = 0; c2 < C; ++c2) {
            long pr = pivot_of_col[static_cast<std::size_t>(c2)];
            if (pr >= 0) v[static_cast<std::size_t>(c2)] = -w[static_cast<std::size_t>(pr)][static_cast<std::size_t>(col)];
        }
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// Exact LDL^T of a real symmetric matrix, refusing indefinite input.
// PSD with kernel is allowed: zero pivots force a fully zero residual row.
struct LdltResult {
    bool psd = false;            // positive semidefinite
    long bad_index = -1;         // first index violating PSD, if any
    std::vector<Rational> d;     // pivots
    QMat l;                      // unit lower triangular
};

inline LdltResult ldlt_real(const QMat& g) {
    if (g.rows != g.cols) throw std::invalid_argument("ldlt of non-square matrix");
    const long n = g.rows;
    LdltResult r;
    r.d.assign(static_cast<std::size_t>(n), Rational(0));
    r.l = QMat::identity(n);
    // work on a rational copy
    std::vector<std::vector<Rational>> w(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            if (g.at(i, j).im != 0) throw std::invalid_argument("ldlt_real requires a real matrix");
            w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.at(i, j).re;
        }
    for (long k = 0; k < n; ++k) {
        Rational piv = w[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        if (piv < 0) { r.psd = false; r.bad_index = k; return r; }
        r.d[static_cast<std::size_t>(k)] = piv;
        if (piv == 0) {
            // PSD forces the whole residual row/column to vanish
            for (long j = k + 1; j < n; ++j)
                if (w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] != 0) {
                    r.psd = false;
                    r.bad_index = k;
                    return r;
                }
            continue;
        }
        for (long i = k + 1; i < n; ++i) {
            Rational f = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] / piv;
            r.l.at(i, k) = Scalar(f);
            if (f == 0) continue;
            for (long j = k; j < n; ++j)
                w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= f * w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        }
    }
    r.psd = true;
    return r;
}

// Solve U x = b with U upper triangular, unit or general diagonal (exact).
inline std::vector<Rational> solve_upper(const QMat& u, const std::vector<Rational>& b) {
    const long n = u.rows;
    std::vector<Rational> x(static_cast<std::size_t>(n));
    for (long i = n - 1; i >= 0; --i) {
        Rational s = b[static_cast<std::size_t>(i)];
        for (long j = i + 1; j < n; ++j) s -= u.at(i, j).re * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / u.at(i, i).re;
    }
    return x;
}

}  // namespace cftk
