#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "cftk/koenigs.hpp"

namespace cftk {

// Disk automorphism z -> e^{i beta} (z - a) / (1 - conj(a) z); |a| < 1.
struct Mobius {
    Cd a{0.0, 0.0};
    double beta = 0.0;

    Cd operator()(Cd z) const {
        return std::polar(1.0, beta) * (z - a) / (Cd(1, 0) - std::conj(a) * z);
    }
    Cd inverse(Cd w) const {
        Cd u = w * std::polar(1.0, -beta);
        return (u + a) / (Cd(1, 0) + std::conj(a) * u);
    }
    bool valid() const { return std::abs(a) < 1.0; }
};

// Circle diffeomorphism given by a strictly increasing sample table
// theta_j -> gamma(theta_j), winding one.
struct CircleDiffeo {
    std::vector<double> values;  // gamma(2 pi j / M), strictly increasing mod 2pi, winding 1

    bool valid() const {
        for (std::size_t j = 1; j < values.size(); ++j)
            if (values[j] <= values[j - 1]) return false;
        if (!values.empty() && values.back() - values.front() >= 2.0 * M_PI) return false;
        return true;
    }
    static CircleDiffeo identity(std::size_t m) {
        CircleDiffeo d;
        for (std::size_t j = 0; j < m; ++j) d.values.push_back(2.0 * M_PI * double(j) / double(m));
        return d;
    }
};

struct AnnulusSpec {
    Mobius psi;
    SemigroupSpec rho;
    double t = 0;
    CircleDiffeo gamma;
};

enum class Membership { Inside, Outside, Indeterminate };

// int(X) = psi(open disk \ phi_t(closed disk)), approximated by two polygons.
struct AnnulusRegion {
    std::vector<Cd> outer;  // psi(unit circle)
    std::vector<Cd> inner;  // psi(phi_t(unit circle))
    bool empty = false;
    bool thin_warning = false;
    double margin = 0;      // classification margin (2 * resolution)

    Membership membership(Cd z) const {
        if (empty) return Membership::Outside;
        if (dist_to_polygon(outer, z) < margin || dist_to_polygon(inner, z) < margin)
            return Membership::Indeterminate;
        bool in_outer = winding_contains(outer, z);
        bool in_inner = winding_contains(inner, z);
        return (in_outer && !in_inner) ? Membership::Inside : Membership::Outside;
    }

    static bool winding_contains(const std::vector<Cd>& poly, Cd z) {
        double angle = 0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Cd u = poly[i] - z;
            Cd v = poly[(i + 1) % poly.size()] - z;
            angle += std::arg(v / u);
        }
        return std::abs(angle) > M_PI;  // winding number 0 vs +-1
    }

    static double dist_to_polygon(const std::vector<Cd>& poly, Cd z) {
        double best = 1e300;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Cd a = poly[i], b = poly[(i + 1) % poly.size()];
            Cd ab = b - a;
            double len2 = std::norm(ab);
            double s = len2 > 0 ? std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, std::abs(z - (a + s * ab)));
        }
        return best;
    }
};

inline AnnulusRegion annulus_interior(const AnnulusSpec& spec, double resolution = 1e-2,
                                      std::size_t vertices = 256) {
    AnnulusRegion r;
    r.margin = 2.0 * resolution;
    if (spec.t <= 0) {
        r.empty = true;
        return r;
    }
    r.outer.resize(vertices);
    r.inner.resize(vertices);
    for (std::size_t j = 0; j < vertices; ++j) {
        double th = 2.0 * M_PI * double(j) / double(vertices);
        Cd z = std::polar(1.0, th);
        r.outer[j] = spec.psi(z);
        // trace phi_t just inside the boundary; the circle image itself is the limit
        Cd zin = std::polar(1.0 - 1e-9, th);
        r.inner[j] = spec.psi(evolve_phi_point(spec.rho, spec.t, zin));
    }
    double thickness = 1e300;
    for (std::size_t j = 0; j < vertices; j += vertices / 16)
        thickness = std::min(thickness, AnnulusRegion::dist_to_polygon(r.outer, r.inner[j]));
    if (thickness < resolution) {
        r.empty = true;
        r.thin_warning = true;
    }
    return r;
}

inline std::string region_to_svg(const AnnulusRegion& r) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n";
    auto path = [&](const std::vector<Cd>& poly, const char* color) {
        if (poly.empty()) return;
        os << "<path d=\"M";
        for (std::size_t i = 0; i < poly.size(); ++i) {
            os << (i ? " L" : "") << poly[i].real() << " " << -poly[i].imag();
        }
        os << " Z\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"0.01\"/>\n";
    };
    path(r.outer, "black");
    path(r.inner, "steelblue");
    os << "</svg>\n";
    return os.str();
}

}  // namespace cftk
