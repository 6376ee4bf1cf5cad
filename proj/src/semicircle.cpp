#include "wclt/semicircle.hpp"

#include <algorithm>
#include <cmath>

#include "wclt/errors.hpp"

namespace wclt {

double semicircle_density(double x) {
    if (std::abs(x) >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * M_PI);
}

cplx stieltjes(cplx z) {
    if (z.imag() == 0.0) throw ValidationError("stieltjes: spectral parameter must have Im z != 0");
    const cplx s = std::sqrt(z * z - 4.0);
    // evaluate the larger root additively (no cancellation), get the other
    // from the product m1 m2 = 1, then keep the root with Im m Im z > 0
    const cplx big = (z.real() * s.real() + z.imag() * s.imag()) >= 0.0 ? (-z - s) / 2.0
                                                                        : (-z + s) / 2.0;
    const cplx small = 1.0 / big;
    return (small.imag() * z.imag() > 0.0) ? small : big;
}

SpectralPoint SpectralPoint::at(cplx z) {
    SpectralPoint p;
    p.z = z;
    p.m = stieltjes(z);
    p.m_prime = p.m * p.m / (1.0 - p.m * p.m);
    return p;
}

std::vector<cplx> stieltjes_derivatives(cplx z, int order) {
    if (order > 12) throw ValidationError("stieltjes_derivatives: order > 12 unsupported");
    std::vector<cplx> d(static_cast<size_t>(order) + 1);
    d[0] = stieltjes(z);
    // Differentiating m^2 + z m + 1 = 0 n times:
    //   m^(n) (2m + z) = -n m^(n-1) - sum_{j=1}^{n-1} C(n,j) m^(j) m^(n-j)
    const cplx denom = 2.0 * d[0] + z;  // = (m^2-1)/m, nonzero off the real axis
    std::vector<std::vector<double>> binom(order + 1, std::vector<double>(order + 1, 0.0));
    for (int n = 0; n <= order; ++n) {
        binom[n][0] = 1.0;
        for (int j = 1; j <= n; ++j)
            binom[n][j] = binom[n - 1][j - 1] + (j <= n - 1 ? binom[n - 1][j] : 0.0);
    }
    for (int n = 1; n <= order; ++n) {
        cplx s = static_cast<double>(n) * d[n - 1];
        for (int j = 1; j <= n - 1; ++j) s += binom[n][j] * d[j] * d[n - j];
        d[n] = -s / denom;
    }
    return d;
}

cplx stability_factor(const SpectralPoint& p, const SpectralPoint& q, double threshold) {
    if (p.z == q.z) return p.m_prime;
    const cplx denom = 1.0 - p.m * q.m;
    if (std::abs(denom) <= threshold)
        throw NearSingularStability("stability_factor: |1 - m_i m_j| below threshold; widen eta");
    return p.m * q.m / denom;
}

cplx divided_difference(std::span<const cplx> zs) {
    if (zs.empty()) throw ValidationError("divided_difference: empty multi-set");
    std::vector<cplx> v(zs.begin(), zs.end());
    // confluent entries need m^(n)/n!; cache per distinct point
    struct DerivCache {
        std::vector<std::pair<cplx, std::vector<cplx>>> entries;
        cplx get(cplx z, int n) {
            for (auto& [zz, d] : entries)
                if (zz == z && static_cast<int>(d.size()) > n) return d[n];
            auto d = stieltjes_derivatives(z, std::max(n, 1));
            // convert to f^(j)/j!
            double fact = 1.0;
            for (size_t j = 2; j < d.size(); ++j) {
                fact *= static_cast<double>(j);
                d[j] /= fact;
            }
            entries.emplace_back(z, d);
            return d[n];
        }
    } cache;
    return confluent_divided_difference(std::move(v), [&](cplx z, int n) { return cache.get(z, n); });
}

cplx divided_difference(const std::vector<cplx>& zs) {
    return divided_difference(std::span<const cplx>(zs.data(), zs.size()));
}

}  // namespace wclt
