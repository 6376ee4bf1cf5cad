#include "wclt/testfunction.hpp"

#include <cmath>

namespace wclt {

using cd = std::complex<double>;

Profile gaussian_bump() {
    Profile p;
    p.name = "gaussian_bump";
    p.support_radius = 1.0;
    p.g = [](double u) -> cd {
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
    };
    p.dg = [](double u) -> cd {
        if (std::abs(u) >= 1.0) return 0.0;
        const double d = 1.0 - u * u;
        return std::exp(-1.0 / d) * (-2.0 * u / (d * d));
    };
    return p;
}

Profile cosine_bump() {
    Profile p;
    p.name = "cosine_bump";
    p.support_radius = 1.0;
    p.g = [](double u) -> cd {
        if (std::abs(u) >= 1.0) return 0.0;
        return 0.5 * (1.0 + std::cos(M_PI * u));
    };
    p.dg = [](double u) -> cd {
        if (std::abs(u) >= 1.0) return 0.0;
        return -0.5 * M_PI * std::sin(M_PI * u);
    };
    return p;
}

Profile exp_phase(double t) {
    Profile p;
    p.name = "exp_phase(" + std::to_string(t) + ")";
    p.g = [t](double u) -> cd { return std::exp(cd(0.0, t * u)); };
    p.dg = [t](double u) -> cd { return cd(0.0, t) * std::exp(cd(0.0, t * u)); };
    return p;
}

Profile poly_identity() {
    Profile p;
    p.name = "identity";
    p.g = [](double u) -> cd { return u; };
    p.dg = [](double) -> cd { return 1.0; };
    return p;
}

Profile constant_one() {
    Profile p;
    p.name = "one";
    p.g = [](double) -> cd { return 1.0; };
    p.dg = [](double) -> cd { return 0.0; };
    return p;
}

TestFunction::Scaled TestFunction::rescaled(double n) const {
    const double scale = std::pow(n, gamma);
    Scaled s;
    auto g = profile.g;
    auto dg = profile.dg;
    const double c = center;
    s.f = [g, scale, c](double x) { return g(scale * (x - c)); };
    s.df = [dg, scale, c](double x) { return scale * dg(scale * (x - c)); };
    if (std::isfinite(profile.support_radius)) {
        s.lo = std::max(-2.0, c - profile.support_radius / scale);
        s.hi = std::min(2.0, c + profile.support_radius / scale);
    }
    return s;
}

bool derivative_consistent(const Profile& p, double tol) {
    const double h = 1e-7;
    for (double u = -0.95; u <= 0.95; u += 0.05) {
        cd fd = (p.g(u + h) - p.g(u - h)) / (2.0 * h);
        if (std::abs(fd - p.dg(u)) > tol * (1.0 + std::abs(p.dg(u)))) return false;
    }
    return true;
}

}  // namespace wclt
