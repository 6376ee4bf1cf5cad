#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>

namespace wclt {

// Unscaled profile g together with its derivative; compact support [-R, R]
// or entire (R = inf, e.g. e^{itx}).
struct Profile {
    std::string name;
    std::function<std::complex<double>(double)> g;
    std::function<std::complex<double>(double)> dg;
    double support_radius = std::numeric_limits<double>::infinity();
};

Profile gaussian_bump();            // exp(-1/(1-u^2)) on (-1,1)
Profile cosine_bump();              // (1+cos(pi u))/2 on [-1,1]
Profile exp_phase(double t);        // e^{i t u}, entire
Profile poly_identity();            // u, entire
Profile constant_one();             // 1, entire

// Test function f(x) = g(N^gamma (x - E)).
struct TestFunction {
    Profile profile;
    double gamma = 0.0;
    double center = 0.0;

    // concrete rescaled function at matrix size n (scale = n^gamma)
    struct Scaled {
        std::function<std::complex<double>(double)> f;
        std::function<std::complex<double>(double)> df;
        double lo = -2.0, hi = 2.0;  // support clipped to [-2,2]
    };
    Scaled rescaled(double n) const;
};

// finite-difference consistency of (g, dg); used by validation paths
bool derivative_consistent(const Profile& p, double tol = 1e-6);

}  // namespace wclt
