#include "wclt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "wclt/errors.hpp"

namespace wclt {

namespace {

GaussRule build_gauss(int n) {
    // Newton iteration on Legendre polynomials.
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

std::mutex g_rule_mutex;
std::map<int, GaussRule> g_rules;

}  // namespace

const GaussRule& gauss_legendre(int n) {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, build_gauss(n)).first;
    return it->second;
}

namespace {

using cd = std::complex<double>;

cd gauss_on(const std::function<cd(double)>& f, double a, double b, const GaussRule& r) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cd s = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

}  // namespace

cd integrate_adaptive(const std::function<cd(double)>& f, double a, double b, double abs_tol,
                      int max_intervals) {
    const GaussRule& g7 = gauss_legendre(7);
    const GaussRule& g15 = gauss_legendre(15);
    struct Seg {
        double a, b;
        cd coarse, fine;
        double err;
    };
    auto make = [&](double x0, double x1) {
        Seg s{x0, x1, gauss_on(f, x0, x1, g7), gauss_on(f, x0, x1, g15), 0.0};
        s.err = std::abs(s.fine - s.coarse);
        return s;
    };
    auto cmp = [](const Seg& l, const Seg& r) { return l.err < r.err; };
    std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> q(cmp);
    q.push(make(a, b));
    cd total = q.top().fine;
    double err = q.top().err;
    int used = 1;
    while (err > abs_tol) {
        if (used >= max_intervals)
            throw QuadratureFailure("integrate_adaptive: interval budget exhausted");
        Seg s = q.top();
        q.pop();
        double mid = 0.5 * (s.a + s.b);
        Seg l = make(s.a, mid), r = make(mid, s.b);
        total += l.fine + r.fine - s.fine;
        err += l.err + r.err - s.err;
        q.push(l);
        q.push(r);
        ++used;
    }
    return total;
}

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int max_intervals) {
    return integrate_adaptive([&](double x) { return cd(f(x), 0.0); }, a, b, abs_tol,
                              max_intervals)
        .real();
}

cd integrate_semicircle(const std::function<cd(double)>& f, double abs_tol, int n_start,
                        int n_max) {
    auto rule = [&](int n) {
        cd s = 0.0;
        for (int i = 1; i <= n; ++i) {
            double th = i * M_PI / (n + 1.0);
            double si = std::sin(th);
            s += si * si * f(2.0 * std::cos(th));
        }
        return s * (2.0 / (n + 1.0));
    };
    cd prev = rule(n_start);
    for (int n = 2 * n_start; n <= n_max; n *= 2) {
        cd cur = rule(n);
        if (std::abs(cur - prev) < abs_tol) return cur;
        prev = cur;
    }
    throw QuadratureFailure("integrate_semicircle: tolerance not reached within node budget");
}

}  // namespace wclt
