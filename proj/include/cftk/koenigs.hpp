#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cftk/numerics.hpp"
#include "cftk/scalar.hpp"

namespace cftk {

struct SingularGenerator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Koenigs map sigma with its derivative; sigma(0) = 0 and sigma'(0) = 1 are
// asserted numerically at construction.
struct KoenigsMap {
    std::function<Cd(Cd)> sigma;
    std::function<Cd(Cd)> dsigma;
    std::string desc;

    void validate() const {
        if (std::abs(sigma(Cd(0, 0))) > 1e-12) throw std::invalid_argument("sigma(0) != 0 for " + desc);
        if (std::abs(dsigma(Cd(0, 0)) - Cd(1, 0)) > 1e-10)
            throw std::invalid_argument("sigma'(0) != 1 for " + desc);
    }
};

inline KoenigsMap koenigs_identity() {
    KoenigsMap k;
    k.sigma = [](Cd z) { return z; };
    k.dsigma = [](Cd) { return Cd(1, 0); };
    k.desc = "identity";
    k.validate();
    return k;
}

// sigma(z) = z / (1 - a z); the associated generator is rho(z) = 1 - a z
inline KoenigsMap koenigs_mobius(Cd a) {
    KoenigsMap k;
    k.sigma = [a](Cd z) { return z / (Cd(1, 0) - a * z); };
    k.dsigma = [a](Cd z) {
        Cd d = Cd(1, 0) - a * z;
        return Cd(1, 0) / (d * d);
    };
    k.desc = "mobius:a=" + std::to_string(a.real()) + "+" + std::to_string(a.imag()) + "i";
    k.validate();
    return k;
}

// sigma(z) = z + c2 z^2 + c3 z^3 + ... (c1 = 1 enforced by validate)
inline KoenigsMap koenigs_series(std::vector<Cd> coeffs) {
    KoenigsMap k;
    auto cs = std::make_shared<std::vector<Cd>>(std::move(coeffs));
    k.sigma = [cs](Cd z) {
        Cd s(0, 0), p = z;
        for (const Cd& c : *cs) {
            s += c * p;
            p *= z;
        }
        return s;
    };
    k.dsigma = [cs](Cd z) {
        Cd s(0, 0), p(1, 0);
        double n = 1;
        for (const Cd& c : *cs) {
            s += n * c * p;
            p *= z;
            n += 1;
        }
        return s;
    };
    k.desc = "series[" + std::to_string(cs->size()) + "]";
    k.validate();
    return k;
}

// Generator samples on the circle plus Fourier data.
struct GeneratorSamples {
    std::vector<Cd> rho;          // rho at e^{2 pi i j / M}
    std::vector<Cd> fourier;      // DFT table; fourier_coeff(table, n) = rho_hat(n)
    bool band_warning = false;    // non-negligible energy in the top quarter band
};

// rho(z) = sigma(z) / (z sigma'(z)) sampled at 2^k circle points.
inline GeneratorSamples rho_from_koenigs(const KoenigsMap& k, std::size_t samples = 512) {
    GeneratorSamples g;
    g.rho.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        double th = 2.0 * M_PI * double(j) / double(samples);
        Cd z(std::cos(th), std::sin(th));
        Cd d = k.dsigma(z);
        if (std::abs(d) < 1e-12)
            throw SingularGenerator("sigma' vanishes at sample " + std::to_string(j));
        g.rho[j] = k.sigma(z) / (z * d);
    }
    g.fourier = circle_fourier(g.rho);
    double total = 0, top = 0;
    long m = static_cast<long>(samples);
    for (long n = -m / 2 + 1; n < m / 2; ++n) {
        double e = std::norm(fourier_coeff(g.fourier, n));
        total += e;
        if (std::abs(n) > m / 4) top += e;
    }
    g.band_warning = total > 0 && top / total > 1e-20;
    return g;
}

struct SemigroupSpec {
    KoenigsMap koenigs;
    GeneratorSamples generator;

    Cd rho_at(Cd z) const {
        if (std::abs(z) < 1e-14) return Cd(1, 0);  // sigma(z)/z -> sigma'(0) = 1
        return koenigs.sigma(z) / (z * koenigs.dsigma(z));
    }
};

inline SemigroupSpec make_semigroup(const KoenigsMap& k, std::size_t samples = 512) {
    return SemigroupSpec{k, rho_from_koenigs(k, samples)};
}

// phi_t(z) by integrating phi' = -sigma(phi)/sigma'(phi) with RK45.
inline Cd evolve_phi_point(const SemigroupSpec& s, double t, Cd z0, double tol = 1e-10) {
    if (t < 0) throw std::invalid_argument("negative time");
    if (t == 0) return z0;
    auto rhs = [&](double, Cd z) { return -s.koenigs.sigma(z) / s.koenigs.dsigma(z); };
    Rk45Options opt;
    opt.abs_tol = tol;
    std::function<bool(const Cd&)> guard = [tol](const Cd& z) { return std::abs(z) <= 1.0 + 100 * tol; };
    try {
        return rk45_integrate(rhs, z0, 0.0, t, [](Cd e) { return std::abs(e); }, opt, guard);
    } catch (const std::runtime_error& e) {
        throw IntegrationError(e.what());
    }
}

inline std::vector<Cd> evolve_phi(const SemigroupSpec& s, double t, const std::vector<Cd>& z_samples,
                                  double tol = 1e-10) {
    std::vector<Cd> out;
    out.reserve(z_samples.size());
    for (Cd z : z_samples) {
        if (std::abs(z) >= 1.0) throw std::invalid_argument("sample outside the open disk");
        out.push_back(evolve_phi_point(s, t, z, tol));
    }
    return out;
}

// max |sigma(phi_t(z)) - e^{-t} sigma(z)| over samples
inline double koenigs_functional_check(const SemigroupSpec& s, double t,
                                       const std::vector<Cd>& z_samples, double tol = 1e-10) {
    auto phi = evolve_phi(s, t, z_samples, tol);
    double worst = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double r = std::abs(s.koenigs.sigma(phi[i]) - std::exp(-t) * s.koenigs.sigma(z_samples[i]));
        worst = std::max(worst, r);
    }
    return worst;
}

namespace detail {
// (theta, d theta / d theta_0) jet carried through the variational flow ODE
struct ThetaJet {
    double th = 0, dth = 0;
};
inline ThetaJet operator+(ThetaJet a, ThetaJet b) { return {a.th + b.th, a.dth + b.dth}; }
inline ThetaJet operator*(double s, ThetaJet x) { return {s * x.th, s * x.dth}; }
inline ThetaJet operator*(ThetaJet x, double s) { return s * x; }
}  // namespace detail

// Real/imaginary split rho = f + i g on the circle, and the flow gamma_s of
// the vector field g(e^{i theta}) d/d theta.
struct RhoSplit {
    std::vector<double> f, g;       // samples on the 2^k grid
    std::vector<Cd> f_fourier, g_fourier;

    // gamma_s(theta): integrate theta' = g(e^{i theta})
    double gamma(double s, double theta, double tol = 1e-10) const {
        if (s == 0) return theta;
        auto rhs = [this](double, double th) { return g_eval(th); };
        Rk45Options opt;
        opt.abs_tol = tol;
        return rk45_integrate(rhs, theta, 0.0, s, [](double e) { return std::abs(e); }, opt);
    }

    // derivative d gamma_s / d theta via the variational equation
    std::pair<double, double> gamma_with_derivative(double s, double theta, double tol = 1e-10) const {
        if (s == 0) return {theta, 1.0};
        using detail::ThetaJet;
        auto rhs = [this](double, ThetaJet x) { return ThetaJet{g_eval(x.th), dg_eval(x.th) * x.dth}; };
        Rk45Options opt;
        opt.abs_tol = tol;
        ThetaJet r = rk45_integrate(rhs, ThetaJet{theta, 1.0}, 0.0, s,
                                    [](ThetaJet e) { return std::abs(e.th) + std::abs(e.dth); }, opt);
        return {r.th, r.dth};
    }

    double g_eval(double theta) const { return fourier_eval(g_fourier, theta).real(); }
    double dg_eval(double theta) const {
        // term-wise derivative of the trigonometric interpolant
        long m = static_cast<long>(g_fourier.size());
        Cd s(0, 0);
        for (long n = -m / 2 + 1; n < m / 2; ++n) {
            Cd ph(std::cos(double(n) * theta), std::sin(double(n) * theta));
            s += fourier_coeff(g_fourier, n) * ph * Cd(0, double(n));
        }
        return s.real();
    }
    double f_eval(double theta) const { return fourier_eval(f_fourier, theta).real(); }
};

inline RhoSplit split_rho(const std::vector<Cd>& rho_samples) {
    RhoSplit r;
    const std::size_t m = rho_samples.size();
    r.f.resize(m);
    r.g.resize(m);
    std::vector<Cd> fc(m), gc(m);
    for (std::size_t j = 0; j < m; ++j) {
        r.f[j] = rho_samples[j].real();
        r.g[j] = rho_samples[j].imag();
        fc[j] = Cd(r.f[j], 0);
        gc[j] = Cd(r.g[j], 0);
    }
    r.f_fourier = circle_fourier(fc);
    r.g_fourier = circle_fourier(gc);
    return r;
}

// Parse semigroup descriptors: "identity" | "mobius:a=<rational>" | "series:c2,c3,..."
inline KoenigsMap koenigs_from_descriptor(const std::string& d) {
    if (d == "identity" || d == "id") return koenigs_identity();
    if (d.rfind("mobius:a=", 0) == 0) {
        Rational a = rational_from_string(d.substr(9));
        return koenigs_mobius(Cd(to_double(a), 0.0));
    }
    if (d.rfind("series:", 0) == 0) {
        std::vector<Cd> cs{Cd(1, 0)};
        std::string rest = d.substr(7);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            cs.push_back(Cd(to_double(rational_from_string(tok)), 0.0));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return koenigs_series(cs);
    }
    throw std::invalid_argument("unknown koenigs descriptor: " + d);
}

}  // namespace cftk
