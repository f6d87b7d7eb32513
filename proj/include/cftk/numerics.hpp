#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cftk {

using Cd = std::complex<double>;

// In-place radix-2 Cooley-Tukey; n must be a power of two.
inline void fft_pow2(std::vector<Cd>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * M_PI / double(len) * (inverse ? 1.0 : -1.0);
        Cd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Cd u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

// Fourier coefficients f_hat(n), |n| <= samples/2 - 1, from equispaced circle
// samples f(e^{2 pi i j / M}).
inline std::vector<Cd> circle_fourier(const std::vector<Cd>& samples) {
    std::vector<Cd> a = samples;
    fft_pow2(a, false);
    for (auto& x : a) x /= double(samples.size());
    return a;  // index k holds f_hat(k) for k < M/2; f_hat(k - M) for k >= M/2
}

inline Cd fourier_coeff(const std::vector<Cd>& table, long n) {
    long m = static_cast<long>(table.size());
    long idx = ((n % m) + m) % m;
    return table[static_cast<std::size_t>(idx)];
}

// Evaluate sum_n f_hat(n) z^n on the unit circle from the coefficient table.
inline Cd fourier_eval(const std::vector<Cd>& table, double theta) {
    long m = static_cast<long>(table.size());
    Cd s(0, 0);
    for (long n = -m / 2 + 1; n < m / 2; ++n) {
        Cd ph(std::cos(double(n) * theta), std::sin(double(n) * theta));
        s += fourier_coeff(table, n) * ph;
    }
    return s;
}

// Dormand-Prince 5(4) adaptive step integrator for small complex systems.
struct Rk45Options {
    double abs_tol = 1e-10;
    double initial_step = 1e-2;
    double min_step = 1e-12;
    long max_steps = 2000000;
};

// Integrates y' = f(t, y) from t0 to t1. `guard` may veto a proposed state
// (used to detect trajectories escaping the disk).
template <typename State, typename Rhs, typename Norm>
State rk45_integrate(Rhs f, State y, double t0, double t1, Norm norm, const Rk45Options& opt,
                     const std::function<bool(const State&)>& guard = nullptr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) return y;
    double dir = (t1 > t0) ? 1.0 : -1.0;
    double t = t0;
    double h = opt.initial_step * dir;
    long steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > opt.max_steps) throw std::runtime_error("rk45: step budget exceeded");
        if (dir * (t + h - t1) > 0) h = t1 - t;
        State k1 = f(t, y);
        State k2 = f(t + c2 * h, y + h * a21 * k1);
        State k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        State k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        State k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        State k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        State y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        State k7 = f(t + h, y5);
        State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double e = norm(err);
        if (e <= opt.abs_tol || std::abs(h) <= opt.min_step) {
            if (guard && !guard(y5)) throw std::runtime_error("rk45: trajectory rejected by guard");
            t += h;
            y = y5;
            double grow = (e > 0) ? 0.9 * std::pow(opt.abs_tol / e, 0.2) : 2.0;
            h *= std::min(4.0, std::max(0.2, grow));
        } else {
            h *= std::max(0.2, 0.9 * std::pow(opt.abs_tol / e, 0.25));
        }
    }
    return y;
}

}  // namespace cftk
