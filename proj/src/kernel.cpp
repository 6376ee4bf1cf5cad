#include "wclt/kernel.hpp"

#include <cmath>

#include "wclt/errors.hpp"
#include "wclt/quadrature.hpp"

namespace wclt {

double kernel_u(double x, double y) {
    const double sx = std::sqrt(std::max(0.0, 4.0 - x * x));
    const double sy = std::sqrt(std::max(0.0, 4.0 - y * y));
    const double num = (sx + sy) * (sx + sy) * (x * y + 4.0 - sx * sy);
    const double den = (sx - sy) * (sx - sy) * (x * y + 4.0 + sx * sy);
    return std::log(num / den) / (2.0 * M_PI * M_PI);
}

double kernel_u_theta(double theta, double phi) {
    const double sp = std::sin(0.5 * (theta + phi));
    const double sm = std::sin(0.5 * (theta - phi));
    return std::log(std::abs(sp / sm)) / (M_PI * M_PI);
}

double kernel_u_wform(double x, double y, double abs_tol) {
    const double sx = std::sqrt(std::max(0.0, 4.0 - x * x));
    const double sy = std::sqrt(std::max(0.0, 4.0 - y * y));
    auto f = [&](double w) {
        const double d = w * w * (x - y) * (x - y) - w * x * y * (1.0 - w) * (1.0 - w) +
                         (1.0 - w * w) * (1.0 - w * w);
        return (1.0 - w * w) / d;
    };
    const double i = integrate_adaptive_real(f, 0.0, 1.0, abs_tol);
    // the w-form carries twice the calibrated normalization
    return sx * sy / (M_PI * M_PI) * i / 2.0;
}

std::complex<double> integral_rep_m_gue(const std::vector<std::complex<double>>& zs1,
                                        const std::vector<std::complex<double>>& zs2,
                                        double abs_tol) {
    using cd = std::complex<double>;
    if (zs1.empty() || zs2.empty() || zs1.size() > 3 || zs2.size() > 3)
        throw ValidationError("integral_rep_m_gue: multiset sizes must be in [1,3]");
    auto deriv_factor = [](const std::vector<cd>& zs, double x) {
        // sum_i (x-z_i)^{-2} prod_{j != i} (x-z_j)^{-1}
        cd s = 0.0;
        for (size_t i = 0; i < zs.size(); ++i) {
            cd t = 1.0 / ((x - zs[i]) * (x - zs[i]));
            for (size_t j = 0; j < zs.size(); ++j)
                if (j != i) t /= (x - zs[j]);
            s += t;
        }
        return s;
    };
    // angle variables absorb the edge square roots; the diagonal log
    // singularity is handled by splitting the inner integral at phi = theta
    auto inner = [&](double theta) {
        const double x = 2.0 * std::cos(theta);
        auto g = [&](double phi) {
            const double y = 2.0 * std::cos(phi);
            return deriv_factor(zs2, y) * kernel_u_theta(theta, phi) *
                   (2.0 * std::sin(phi));
        };
        cd left = 0.0, right = 0.0;
        const double tol = abs_tol / (4.0 * M_PI);
        if (theta > 1e-12) left = integrate_adaptive(g, 0.0, theta, tol);
        if (theta < M_PI - 1e-12) right = integrate_adaptive(g, theta, M_PI, tol);
        return deriv_factor(zs1, x) * (left + right) * (2.0 * std::sin(theta));
    };
    cd total = integrate_adaptive(inner, 0.0, M_PI, abs_tol / 4.0, 4000);
    return 0.5 * total;
}

}  // namespace wclt
