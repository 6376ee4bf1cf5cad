#include <doctest.h>

#include <cmath>

#include "wclt/errors.hpp"
#include "wclt/quadrature.hpp"
#include "wclt/rng.hpp"
#include "wclt/semicircle.hpp"

using namespace wclt;

namespace {
cplx random_bulk_z(CounterRng& rng, bool allow_negative_im = true) {
    double re = 3.6 * rng.uniform() - 1.8;
    double im = 0.1 + 1.9 * rng.uniform();
    if (allow_negative_im && rng.uniform() < 0.5) im = -im;
    return {re, im};
}
}  // namespace

TEST_CASE("stieltjes transform basics") {
    // quadratic oracle at z = 2i: both roots of m^2 + zm + 1, keep Im m Im z > 0
    const cplx z(0.0, 2.0);
    const cplx disc = std::sqrt(z * z - 4.0);
    cplx r1 = (-z + disc) / 2.0, r2 = (-z - disc) / 2.0;
    const cplx expected = (r1.imag() * z.imag() > 0) ? r1 : r2;
    CHECK(std::abs(stieltjes(z) - expected) < 1e-12);
    CHECK(std::abs(stieltjes(z) - cplx(0.0, std::sqrt(2.0) - 1.0)) < 1e-12);

    // large |z| asymptote m ~ -1/z
    const cplx zl(0.0, 1e6);
    CHECK(std::abs(stieltjes(zl) - (-1.0 / zl)) / std::abs(1.0 / zl) < 1e-11);

    // invariants at a generic point
    SpectralPoint p = SpectralPoint::at(cplx(0.5, 0.01));
    CHECK(std::abs(p.m * p.m + p.z * p.m + 1.0) < 1e-12);
    CHECK(p.m.imag() > 0.0);
    CHECK(std::abs(p.m_prime - p.m * p.m / (1.0 - p.m * p.m)) < 1e-12);

    CHECK_THROWS_AS(stieltjes(cplx(0.3, 0.0)), ValidationError);
}

TEST_CASE("Dyson residual and |m| < 1 on random points") {
    CounterRng rng(11, 0);
    for (int i = 0; i < 1000; ++i) {
        cplx z = random_bulk_z(rng);
        cplx m = stieltjes(z);
        CHECK(std::abs(m * m + z * m + 1.0) < 1e-12);
        CHECK(m.imag() * z.imag() > 0.0);
        CHECK(std::abs(m) < 1.0);
    }
}

TEST_CASE("semicircle density") {
    CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(semicircle_density(2.0) == 0.0);
    CHECK(semicircle_density(-2.5) == 0.0);
    double mass = integrate_adaptive_real([](double x) { return semicircle_density(x); }, -2.0,
                                          2.0, 1e-11, 100000);
    CHECK(std::abs(mass - 1.0) < 1e-10);
}

TEST_CASE("stability factor") {
    SpectralPoint p = SpectralPoint::at(cplx(0.0, 2.0));
    CHECK(std::abs(stability_factor(p, p) - p.m_prime) < 1e-14);

    SpectralPoint pi = SpectralPoint::at(cplx(0.0, 1.0));
    SpectralPoint pmi = SpectralPoint::at(cplx(0.0, -1.0));
    cplx q = stability_factor(pi, pmi);
    const double a2 = std::norm(pi.m);
    CHECK(std::abs(q - a2 / (1.0 - a2)) < 1e-12);
    CHECK(std::abs(q.imag()) < 1e-14);
    CHECK(std::abs(q - divided_difference(std::vector<cplx>{pi.z, pmi.z})) < 1e-12);

    CounterRng rng(13, 0);
    for (int i = 0; i < 100; ++i) {
        SpectralPoint a = SpectralPoint::at(random_bulk_z(rng));
        SpectralPoint b = SpectralPoint::at(random_bulk_z(rng));
        cplx lhs = stability_factor(a, b);
        cplx rhs = divided_difference(std::vector<cplx>{a.z, b.z});
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("iterated divided differences") {
    const cplx z(0.4, 1.2);
    CHECK(std::abs(divided_difference(std::vector<cplx>{z}) - stieltjes(z)) < 1e-14);
    auto d = stieltjes_derivatives(z, 1);
    CHECK(std::abs(divided_difference(std::vector<cplx>{z, z}) - d[1]) < 1e-14);

    // permutation invariance over all orderings of {i, 2i, 3i}
    std::vector<cplx> zs{{0.0, 1.0}, {0.0, 2.0}, {0.0, 3.0}};
    const cplx ref = divided_difference(zs);
    std::sort(zs.begin(), zs.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
    do {
        CHECK(std::abs(divided_difference(zs) - ref) < 1e-12);
    } while (std::next_permutation(zs.begin(), zs.end(), [](cplx a, cplx b) {
        return a.imag() < b.imag();
    }));

    // partial-fraction oracle m[z_1..z_k] = sum_j m(z_j) prod_{i != j} (z_j - z_i)^{-1}
    cplx pf = 0.0;
    for (int j = 0; j < 3; ++j) {
        cplx t = stieltjes(zs[j]);
        for (int i = 0; i < 3; ++i)
            if (i != j) t /= (zs[j] - zs[i]);
        pf += t;
    }
    CHECK(std::abs(ref - pf) < 1e-12);

    // quadrature oracle: with the Dyson-branch convention (Im m Im z > 0,
    // m ~ -1/z) the transform is m(z) = int rho(x)/(x-z) dx, so
    // m[z_1,...,z_k] = int rho(x) prod_j (x-z_j)^{-1} dx directly
    cplx quad = integrate_adaptive(
        [&](double x) {
            return semicircle_density(x) /
                   ((x - zs[0]) * (x - zs[1]) * (x - zs[2]));
        },
        -2.0, 2.0, 1e-12, 100000);
    CHECK(std::abs(ref - quad) < 1e-10);
}

TEST_CASE("confluent limit and mixed multiplicities") {
    const cplx z(-0.3, 0.8);
    auto d = stieltjes_derivatives(z, 1);
    const double eps = 1e-6;
    cplx dd = divided_difference(std::vector<cplx>{z, z + eps});
    CHECK(std::abs(dd - d[1]) < 1e-5);

    // mixed multi-set {z, z, w}: compare against the analytic reduction
    // m[z,z,w] = (m[z,w] - m[z,z]) / (w - z)
    const cplx w(0.9, -1.1);
    cplx lhs = divided_difference(std::vector<cplx>{z, z, w});
    cplx rhs = (divided_difference(std::vector<cplx>{z, w}) -
                divided_difference(std::vector<cplx>{z, z})) /
               (w - z);
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("higher derivatives against central differences") {
    const cplx z(0.2, 1.3);
    auto d = stieltjes_derivatives(z, 4);
    const double h = 1e-5;
    auto dm = [&](cplx zz) { return stieltjes_derivatives(zz, 1)[1]; };
    cplx d2 = (dm(z + h) - dm(z - h)) / (2.0 * h);
    CHECK(std::abs(d2 - d[2]) < 1e-6 * std::max(1.0, std::abs(d[2])));
    cplx d3 = (dm(z + h) - 2.0 * dm(z) + dm(z - h)) / (h * h);
    CHECK(std::abs(d3 - d[3]) < 1e-4 * std::max(1.0, std::abs(d[3])));
    CHECK_THROWS_AS(stieltjes_derivatives(z, 13), ValidationError);
}

TEST_CASE("a-priori bound on divided differences") {
    CounterRng rng(17, 0);
    for (int trial = 0; trial < 50; ++trial) {
        int k = 2 + static_cast<int>(rng.uniform_u64() % 4);
        std::vector<cplx> zs;
        double eta = 1e9;
        for (int i = 0; i < k; ++i) {
            zs.push_back(random_bulk_z(rng));
            eta = std::min(eta, std::abs(zs.back().imag()));
        }
        double bound = 10.0 * std::pow(eta, -(k - 1));
        CHECK(std::abs(divided_difference(zs)) <= bound);
    }
}
