#include "wclt/closed_form.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "wclt/errors.hpp"
#include "wclt/kernel.hpp"
#include "wclt/noncrossing.hpp"
#include "wclt/quadrature.hpp"
#include "wclt/semicircle.hpp"

namespace wclt {

using cd = std::complex<double>;

namespace {

// product of a function list and its Leibniz derivative
cd prod_eval(const std::vector<ScaledFn>& fs, double x) {
    cd p = 1.0;
    for (const auto& f : fs) p *= f.f(x);
    return p;
}

cd prod_deriv(const std::vector<ScaledFn>& fs, double x) {
    cd s = 0.0;
    for (size_t i = 0; i < fs.size(); ++i) {
        cd t = fs[i].df(x);
        for (size_t j = 0; j < fs.size(); ++j)
            if (j != i) t *= fs[j].f(x);
        s += t;
    }
    return s;
}

// common support of a function list, clipped to [-2,2]
std::pair<double, double> common_support(const std::vector<ScaledFn>& fs) {
    double lo = -2.0, hi = 2.0;
    for (const auto& f : fs) {
        lo = std::max(lo, f.lo);
        hi = std::min(hi, f.hi);
    }
    return {lo, hi};
}

}  // namespace

cplx sc_moment(const std::vector<ScaledFn>& fs, double abs_tol) {
    if (fs.empty()) throw ValidationError("sc_moment: empty function list");
    auto [lo, hi] = common_support(fs);
    if (lo >= hi) return 0.0;
    if (lo <= -2.0 + 1e-12 && hi >= 2.0 - 1e-12) {
        return integrate_semicircle([&](double x) { return prod_eval(fs, x); }, abs_tol);
    }
    return integrate_adaptive(
        [&](double x) { return prod_eval(fs, x) * semicircle_density(x); }, lo, hi, abs_tol);
}

cplx sc_cross(const std::vector<ScaledFn>& fs1, const std::vector<ScaledFn>& fs2,
              double abs_tol) {
    if (fs1.empty() || fs2.empty()) throw ValidationError("sc_cross: empty function list");
    auto [lo1, hi1] = common_support(fs1);
    auto [lo2, hi2] = common_support(fs2);
    if (lo1 >= hi1 || lo2 >= hi2) return 0.0;
    // angle variables: x = 2cos(theta) maps [lo,hi] to [acos(hi/2), acos(lo/2)]
    const double t1a = std::acos(std::min(1.0, std::max(-1.0, hi1 / 2.0)));
    const double t1b = std::acos(std::min(1.0, std::max(-1.0, lo1 / 2.0)));
    const double t2a = std::acos(std::min(1.0, std::max(-1.0, hi2 / 2.0)));
    const double t2b = std::acos(std::min(1.0, std::max(-1.0, lo2 / 2.0)));
    auto inner = [&](double theta) {
        auto g = [&](double phi) {
            const double y = 2.0 * std::cos(phi);
            return prod_deriv(fs2, y) * kernel_u_theta(theta, phi) * (2.0 * std::sin(phi));
        };
        cd acc = 0.0;
        const double tol = abs_tol / (4.0 * M_PI);
        if (theta > t2a && theta < t2b) {
            acc += integrate_adaptive(g, t2a, theta, tol, 40000);
            acc += integrate_adaptive(g, theta, t2b, tol, 40000);
        } else {
            acc += integrate_adaptive(g, t2a, t2b, tol, 40000);
        }
        const double x = 2.0 * std::cos(theta);
        return prod_deriv(fs1, x) * acc * (2.0 * std::sin(theta));
    };
    cd total = integrate_adaptive(inner, t1a, t1b, abs_tol / 2.0, 4000);
    return 0.5 * total;
}

namespace {

struct ScTables {
    std::vector<ScaledFn> fs;  // global index 0..k+l-1
    double quad_tol;
    std::map<std::vector<int>, cplx> m1_cache;
    std::map<std::pair<std::vector<int>, std::vector<int>>, cplx> m2_cache;

    cplx m1(const std::vector<int>& labels) {
        std::vector<int> key = labels;
        std::sort(key.begin(), key.end());
        auto it = m1_cache.find(key);
        if (it != m1_cache.end()) return it->second;
        std::vector<ScaledFn> sel;
        for (int i : key) sel.push_back(fs[i]);
        cplx v = sc_moment(sel, quad_tol * 1e-2);
        m1_cache.emplace(std::move(key), v);
        return v;
    }
    cplx m2(const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> ka = a, kb = b;
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        if (kb < ka) std::swap(ka, kb);
        auto key = std::make_pair(ka, kb);
        auto it = m2_cache.find(key);
        if (it != m2_cache.end()) return it->second;
        std::vector<ScaledFn> sa, sb;
        for (int i : key.first) sa.push_back(fs[i]);
        for (int i : key.second) sb.push_back(fs[i]);
        cplx v = sc_cross(sa, sb, quad_tol);
        m2_cache.emplace(std::move(key), v);
        return v;
    }
};

std::string cycles_to_string(const std::vector<std::vector<int>>& cycles) {
    std::ostringstream os;
    for (const auto& c : cycles) {
        os << "(";
        for (size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i] + 1;
        os << ")";
    }
    return os.str();
}

}  // namespace

CovarianceAssembly assemble_covariance(const std::vector<TestFunction>& alpha_fs,
                                       const std::vector<MatPtr>& alpha_mats,
                                       const std::vector<TestFunction>& beta_fs,
                                       const std::vector<MatPtr>& beta_mats,
                                       double n_scale, double quad_tol) {
    const int k = static_cast<int>(alpha_fs.size());
    const int l = static_cast<int>(beta_fs.size());
    if (k == 0 || l == 0 || k != static_cast<int>(alpha_mats.size()) ||
        l != static_cast<int>(beta_mats.size()))
        throw ValidationError("assemble_covariance: inconsistent argument lengths");
    if (k + l > 7) throw SizeLimit("assemble_covariance: k+l <= 7");

    auto tables = std::make_shared<ScTables>();
    tables->quad_tol = quad_tol;
    for (const auto& f : alpha_fs) tables->fs.push_back(f.rescaled(n_scale));
    for (const auto& f : beta_fs) tables->fs.push_back(f.rescaled(n_scale));

    std::vector<MatPtr> mats(alpha_mats);
    mats.insert(mats.end(), beta_mats.begin(), beta_mats.end());

    CumulantTable cum([tables](const std::vector<int>& s) { return tables->m1(s); },
                      [tables](const std::vector<int>& a, const std::vector<int>& b) {
                          return tables->m2(a, b);
                      });

    auto trace_of_cycle = [&](const std::vector<int>& cycle) {
        MatPtr p = mats[cycle[0]];
        for (size_t i = 1; i < cycle.size(); ++i) p = mat_product(p, mats[cycle[i]]);
        return p->avg();
    };

    CovarianceAssembly out;
    // annular sum
    for (const auto& pi : enumerate_annular(k, l)) {
        cplx mat_factor = 1.0;
        auto kcyc = annular_kreweras(pi);
        for (const auto& b : kcyc) mat_factor *= trace_of_cycle(b);
        cplx fn_factor = 1.0;
        for (const auto& c : pi.cycles) fn_factor *= cum.first_order(c);
        AssemblyTerm t;
        t.combinatorial = "pi=" + cycles_to_string(pi.cycles) + " K=" + cycles_to_string(kcyc);
        t.matrix_factor = mat_factor;
        t.function_factor = fn_factor;
        t.value = mat_factor * fn_factor;
        out.annular_sum += t.value;
        out.terms.push_back(std::move(t));
    }
    // marked partition pairs
    const auto& P1 = enumerate_ncp(k);
    const auto& P2 = enumerate_ncp(l);
    for (const auto& p1 : P1) {
        NCPartition k1 = kreweras(p1);
        cplx mf1 = 1.0;
        for (const auto& b : k1.blocks) mf1 *= trace_of_cycle(b);
        for (const auto& p2 : P2) {
            NCPartition k2 = kreweras(p2);
            cplx mf2 = 1.0;
            for (const auto& b : k2.blocks) {
                std::vector<int> shifted;
                for (int i : b) shifted.push_back(i + k);
                mf2 *= trace_of_cycle(shifted);
            }
            for (size_t u1 = 0; u1 < p1.blocks.size(); ++u1) {
                for (size_t u2 = 0; u2 < p2.blocks.size(); ++u2) {
                    std::vector<int> s2;
                    for (int i : p2.blocks[u2]) s2.push_back(i + k);
                    cplx fn = cum.second_order(p1.blocks[u1], s2);
                    for (size_t j = 0; j < p1.blocks.size(); ++j)
                        if (j != u1) fn *= cum.first_order(p1.blocks[j]);
                    for (size_t j = 0; j < p2.blocks.size(); ++j)
                        if (j != u2) {
                            std::vector<int> sh;
                            for (int i : p2.blocks[j]) sh.push_back(i + k);
                            fn *= cum.first_order(sh);
                        }
                    AssemblyTerm t;
                    t.combinatorial = "marked U1={" + cycles_to_string({p1.blocks[u1]}) +
                                      "} U2={" + cycles_to_string({s2}) + "}";
                    t.matrix_factor = mf1 * mf2;
                    t.function_factor = fn;
                    t.value = t.matrix_factor * t.function_factor;
                    out.marked_sum += t.value;
                    out.terms.push_back(std::move(t));
                }
            }
        }
    }
    out.total = out.annular_sum + out.marked_sum;
    return out;
}

BulkAsymptotics bulk_asymptotics(const std::vector<TestFunction>& fs1,
                                 const std::vector<TestFunction>& fs2, double abs_tol) {
    if (fs1.empty() || fs2.empty()) throw ValidationError("bulk_asymptotics: empty list");
    auto prod_g = [](const std::vector<TestFunction>& fs, double u) {
        cd p = 1.0;
        for (const auto& f : fs) p *= f.profile.g(u);
        return p;
    };
    double r = 0.0;
    for (const auto& f : fs1) r = std::max(r, std::isfinite(f.profile.support_radius)
                                                  ? f.profile.support_radius
                                                  : 0.0);
    for (const auto& f : fs2) r = std::max(r, std::isfinite(f.profile.support_radius)
                                                  ? f.profile.support_radius
                                                  : 0.0);
    if (r == 0.0)
        throw ValidationError("bulk_asymptotics: needs compactly supported profiles");
    const double L = r + 0.5;

    BulkAsymptotics out;
    out.l2_term = integrate_adaptive(
        [&](double u) { return prod_g(fs1, u) * prod_g(fs2, u); }, -L, L, abs_tol);

    // H^{1/2} double integral in the difference-quotient form, smooth across
    // the diagonal; tails outside the box evaluated in closed form.
    auto q = [&](const std::vector<TestFunction>& fs, double x, double y) {
        if (std::abs(x - y) < 1e-7) {
            cd d = 0.0;
            for (size_t i = 0; i < fs.size(); ++i) {
                cd t = fs[i].profile.dg(0.5 * (x + y));
                for (size_t j = 0; j < fs.size(); ++j)
                    if (j != i) t *= fs[j].profile.g(0.5 * (x + y));
                d += t;
            }
            return d;
        }
        return (prod_g(fs, x) - prod_g(fs, y)) / (x - y);
    };
    auto inner = [&](double x) {
        return integrate_adaptive([&](double y) { return q(fs1, x, y) * q(fs2, x, y); }, -L, L,
                                  abs_tol / (4.0 * L), 40000);
    };
    cd box = integrate_adaptive(inner, -L, L, abs_tol, 4000);
    // |x| > L (where prod g vanishes): int_{|x|>L} dx (g1(y) g2(y))/(x-y)^2, twice by symmetry
    cd tails = 2.0 * integrate_adaptive(
                         [&](double y) {
                             return prod_g(fs1, y) * prod_g(fs2, y) *
                                    (1.0 / (L - y) + 1.0 / (L + y));
                         },
                         -L, L, abs_tol);
    out.h_half_term = (box + tails) / (4.0 * M_PI * M_PI);
    return out;
}

}  // namespace wclt
