#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cftk {

using Rational = mpq_class;
using Integer = mpz_class;

// mpq_class does not canonicalize two-argument constructions; all ratio
// building goes through here.
inline Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational ratio(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parse "p/q" or "p". Throws on malformed input or zero denominator.
inline Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::string t = (s[0] == '+') ? s.substr(1) : s;
    mpq_class q;
    if (t.empty() || q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// true when q lies in (1/2)Z
inline bool is_half_integer(const Rational& q) {
    return q.get_den() == 1 || q.get_den() == 2;
}

inline long to_long(const Rational& q) {
    if (!is_integer(q)) throw std::invalid_argument("not an integer: " + to_string(q));
    if (!q.get_num().fits_slong_p()) throw std::overflow_error("rational exceeds long");
    return q.get_num().get_si();
}

// 2q as a long; valid only for half-integers of moderate size
inline long twice_to_long(const Rational& q) {
    Rational t = q * 2;
    return to_long(t);
}

// Binomial coefficient with arbitrary integer upper index:
// binom(n,k) = n(n-1)...(n-k+1)/k!, so binom(-m,k) = (-1)^k binom(m+k-1,k).
inline Integer binomial(long n, long k) {
    if (k < 0) return 0;
    if (n >= 0) {
        if (k > n) return 0;
        mpz_class r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return r;
    }
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(-n + k - 1), static_cast<unsigned long>(k));
    return (k % 2 == 0) ? r : Integer(-r);
}

inline Integer factorial(long k) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

// Gaussian rational a + bi. The scalar field for all exact mode arithmetic.
struct Scalar {
    Rational re, im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}
    Scalar(const Rational& r) : re(r), im(0) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    // i^k for any integer k
    static Scalar i_pow(long k) {
        long m = ((k % 4) + 4) % 4;
        switch (m) {
            case 0: return Scalar(1);
            case 1: return Scalar::i();
            case 2: return Scalar(-1);
            default: return Scalar(Rational(0), Rational(-1));
        }
    }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    Scalar conj() const { return Scalar(re, -im); }
    Rational norm2() const { return re * re + im * im; }

    Scalar operator-() const { return Scalar(-re, -im); }

    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r); im = std::move(i);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        Rational n = o.norm2();
        if (n == 0) throw std::domain_error("division by zero scalar");
        Rational r = (re * o.re + im * o.im) / n;
        Rational i = (im * o.re - re * o.im) / n;
        re = std::move(r); im = std::move(i);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // total order (lexicographic); used for map keys, not meaningful arithmetically
    friend bool operator<(const Scalar& a, const Scalar& b) {
        int c = cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return cmp(a.im, b.im) < 0;
    }

    std::string str() const {
        if (im == 0) return re.get_str();
        std::string s = re.get_str();
        s += (im > 0 ? "+" : "");
        s += im.get_str();
        s += "i";
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }
};

inline Scalar scalar_from_string(const std::string& s) {
    // accepts "p/q", "p/q+r/si", "p/q-r/si", "i", "-i"
    if (s == "i") return Scalar::i();
    if (s == "-i") return -Scalar::i();
    auto pos = s.find('i');
    if (pos == std::string::npos) return Scalar(rational_from_string(s));
    // split at the sign separating real and imaginary parts (not the leading sign)
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/' && k < pos) {
            std::string imtxt = s.substr(k, pos - k);
            if (imtxt == "+" ) imtxt = "1";
            if (imtxt == "-") imtxt = "-1";
            return Scalar(rational_from_string(s.substr(0, k)), rational_from_string(imtxt));
        }
    }
    std::string imtxt = s.substr(0, pos);
    if (imtxt.empty() || imtxt == "+") imtxt = "1";
    if (imtxt == "-") imtxt = "-1";
    return Scalar(Rational(0), rational_from_string(imtxt));
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace cftk
