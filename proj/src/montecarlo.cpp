#include "wclt/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "wclt/errors.hpp"
#include "wclt/rng.hpp"

#ifdef WCLT_HAVE_LAPACKE
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>
#endif

namespace wclt {

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

int default_thread_count() {
    if (const char* env = std::getenv("WIGNER_CLT_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

Mode chain_mode(const Chain& chain, std::vector<MatPtr>& pool, const std::string& name) {
    Mode m;
    m.name = name;
    for (const auto& l : chain) {
        Mode::Slot s;
        const cplx z = l.pt.z;
        s.fn = [z](double lam) { return 1.0 / (lam - z); };
        if (l.mat->is_identity()) {
            s.mat = -1;
        } else {
            int idx = -1;
            for (size_t i = 0; i < pool.size(); ++i)
                if (pool[i]->id() == l.mat->id()) idx = static_cast<int>(i);
            if (idx < 0) {
                pool.push_back(l.mat);
                idx = static_cast<int>(pool.size()) - 1;
            }
            s.mat = idx;
        }
        m.slots.push_back(std::move(s));
    }
    return m;
}

void hermitian_eig(MatrixXc& a, Eigen::VectorXd& w) {
    const int n = static_cast<int>(a.rows());
    w.resize(n);
    MatrixXc orig;
    const bool check = n <= 4096;
    if (check) orig = a;
#ifdef WCLT_HAVE_LAPACKE
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0) throw EigendecompositionFailure("zheevd failed, info=" + std::to_string(info));
#else
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(a);
    if (es.info() != Eigen::Success)
        throw EigendecompositionFailure("Eigen SelfAdjointEigenSolver failed");
    w = es.eigenvalues();
    a = es.eigenvectors();
#endif
    if (check) {
        // probe residual ||(U L U* - W) v|| <= 1e-10 ||W|| ||v||
        const double norm_w =
            std::max({1e-300, std::abs(w(0)), std::abs(w(n - 1))});
        CounterRng rng(0x9e3779b97f4a7c15ull, 0);
        for (int probe = 0; probe < 2; ++probe) {
            VectorXc v(n);
            for (int i = 0; i < n; ++i) v(i) = cplx(rng.normal(), rng.normal());
            v /= v.norm();
            VectorXc rec = a * (w.cast<cplx>().asDiagonal() * (a.adjoint() * v));
            double resid = (rec - orig * v).norm();
            if (resid > 1e-10 * norm_w)
                throw EigendecompositionFailure("eigendecomposition residual too large: " +
                                                std::to_string(resid));
        }
    }
}

Sampler::Sampler(EnsembleConfig cfg, std::vector<MatPtr> pool)
    : cfg_(cfg), pool_(std::move(pool)) {
    if (cfg_.n < 2) throw ValidationError("Sampler: dimension too small");
    for (const auto& m : pool_)
        if (m->n() != cfg_.n) throw ValidationError("Sampler: matrix dimension mismatch");
}

MatrixXc Sampler::sample_wigner(std::uint64_t index) const {
    const int n = cfg_.n;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    MatrixXc w(n, n);
    for (int i = 0; i < n; ++i) {
        // diagonal: real standard normal
        auto d = entry_uniforms(cfg_.seed, index, static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(i));
        w(i, i) = std::sqrt(-2.0 * std::log(d.u1)) * std::cos(2.0 * M_PI * d.u2) * inv_sqrt_n;
        for (int j = i + 1; j < n; ++j) {
            auto e = entry_uniforms(cfg_.seed, index, static_cast<std::uint32_t>(i),
                                    static_cast<std::uint32_t>(j));
            cplx chi;
            if (cfg_.law == EnsembleConfig::Law::gue) {
                const double r = std::sqrt(-2.0 * std::log(e.u1));
                chi = r * cplx(std::cos(2.0 * M_PI * e.u2), std::sin(2.0 * M_PI * e.u2)) /
                      std::sqrt(2.0);
            } else {
                const double a = 2.0 * M_PI * e.u1;
                chi = cplx(std::cos(a), std::sin(a));
            }
            w(i, j) = chi * inv_sqrt_n;
            w(j, i) = std::conj(chi) * inv_sqrt_n;
        }
    }
    return w;
}

namespace {

// evaluation plan: identity slots folded into the following slot's diagonal
struct Plan {
    struct Stage {
        std::vector<std::function<cplx(double)>> fns;
        int mat = -1;
    };
    std::vector<Stage> stages;  // empty mat only possible if all-identity (single stage)
};

Plan make_plan(const Mode& m) {
    Plan p;
    bool all_id = true;
    for (const auto& s : m.slots)
        if (s.mat >= 0) all_id = false;
    if (all_id) {
        Plan::Stage st;
        for (const auto& s : m.slots) st.fns.push_back(s.fn);
        p.stages.push_back(std::move(st));
        return p;
    }
    // rotate so the last slot has a matrix, then sweep merging identity slots forward
    int last = -1;
    const int k = static_cast<int>(m.slots.size());
    for (int i = k - 1; i >= 0; --i)
        if (m.slots[i].mat >= 0) {
            last = i;
            break;
        }
    std::vector<Mode::Slot> rot;
    for (int i = 0; i < k; ++i) rot.push_back(m.slots[(last + 1 + i) % k]);
    std::vector<std::function<cplx(double)>> pending;
    for (const auto& s : rot) {
        pending.push_back(s.fn);
        if (s.mat >= 0) {
            Plan::Stage st;
            st.fns = std::move(pending);
            pending.clear();
            st.mat = s.mat;
            p.stages.push_back(std::move(st));
        }
    }
    return p;
}

VectorXc stage_diag(const Plan::Stage& st, const Eigen::VectorXd& lam) {
    const int n = static_cast<int>(lam.size());
    VectorXc d = VectorXc::Ones(n);
    for (const auto& f : st.fns)
        for (int i = 0; i < n; ++i) d(i) *= f(lam(i));
    return d;
}

cplx eval_plan(const Plan& p, const Eigen::VectorXd& lam, const std::vector<MatrixXc>& tilde) {
    const int n = static_cast<int>(lam.size());
    const int np = static_cast<int>(p.stages.size());
    if (np == 1 && p.stages[0].mat < 0) {
        VectorXc d = stage_diag(p.stages[0], lam);
        return d.sum() / static_cast<double>(n);
    }
    if (np == 1) {
        VectorXc d = stage_diag(p.stages[0], lam);
        return d.cwiseProduct(tilde[p.stages[0].mat].diagonal()).sum() / static_cast<double>(n);
    }
    if (np == 2) {
        VectorXc d1 = stage_diag(p.stages[0], lam);
        VectorXc d2 = stage_diag(p.stages[1], lam);
        const MatrixXc& b1 = tilde[p.stages[0].mat];
        const MatrixXc& b2 = tilde[p.stages[1].mat];
        // sum_{ij} d1_i (B1)_{ij} d2_j (B2)_{ji}
        return ((d1.asDiagonal() * b1 * d2.asDiagonal()).array() * b2.transpose().array())
                   .sum() /
               static_cast<double>(n);
    }
    VectorXc d = stage_diag(p.stages[0], lam);
    MatrixXc t = d.asDiagonal() * tilde[p.stages[0].mat];
    for (int j = 1; j + 1 < np; ++j) {
        VectorXc dj = stage_diag(p.stages[j], lam);
        t = t * (dj.asDiagonal() * tilde[p.stages[j].mat]);
    }
    VectorXc dl = stage_diag(p.stages[np - 1], lam);
    const MatrixXc& bl = tilde[p.stages[np - 1].mat];
    return ((t * dl.asDiagonal()).array() * bl.transpose().array()).sum() /
           static_cast<double>(n);
}

}  // namespace

cplx evaluate_mode(const Mode& mode, const MatrixXc& w, const std::vector<MatPtr>& pool) {
    MatrixXc u = w;
    Eigen::VectorXd lam;
    hermitian_eig(u, lam);
    std::vector<MatrixXc> tilde(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        if (pool[i]->is_diag())
            tilde[i] = u.adjoint() * (pool[i]->diag_values().asDiagonal() * u);
        else
            tilde[i] = u.adjoint() * (pool[i]->dense_values() * u);
    }
    return eval_plan(make_plan(mode), lam, tilde);
}

MatrixXc Sampler::run(const std::vector<Mode>& modes, int threads) const {
    const int n = cfg_.n;
    const int m = static_cast<int>(modes.size());
    const int s_total = cfg_.samples;
    if (threads <= 0) threads = default_thread_count();
    threads = std::min<int>(threads, s_total);

    std::vector<Plan> plans;
    plans.reserve(modes.size());
    std::vector<bool> mat_used(pool_.size(), false);
    for (const auto& mode : modes) {
        plans.push_back(make_plan(mode));
        for (const auto& st : plans.back().stages)
            if (st.mat >= 0) mat_used[st.mat] = true;
    }

    if (threads > 1 && openblas_set_num_threads) openblas_set_num_threads(1);

    MatrixXc results(s_total, m);
    std::vector<std::string> errors(threads);
    auto worker = [&](int tid) {
        try {
            std::vector<MatrixXc> tilde(pool_.size());
            for (int s = tid; s < s_total; s += threads) {
                MatrixXc u = sample_wigner(static_cast<std::uint64_t>(s));
                Eigen::VectorXd lam;
                hermitian_eig(u, lam);
                for (size_t i = 0; i < pool_.size(); ++i)
                    if (mat_used[i]) {
                        if (pool_[i]->is_diag())
                            tilde[i].noalias() =
                                u.adjoint() * (pool_[i]->diag_values().asDiagonal() * u);
                        else
                            tilde[i].noalias() = u.adjoint() * (pool_[i]->dense_values() * u);
                    }
                for (int j = 0; j < m; ++j) results(s, j) = eval_plan(plans[j], lam, tilde);
            }
        } catch (const std::exception& e) {
            errors[tid] = e.what();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> ts;
        for (int t = 0; t < threads; ++t) ts.emplace_back(worker, t);
        for (auto& t : ts) t.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw EigendecompositionFailure("sampler worker: " + e);
    return results;
}

BatchStats batch_mean(std::span<const cplx> vals, int batches) {
    const int s = static_cast<int>(vals.size());
    batches = std::max(2, std::min(batches, s));
    cplx mean = 0.0;
    for (auto v : vals) mean += v;
    mean /= static_cast<double>(s);
    std::vector<cplx> bm(batches, 0.0);
    std::vector<int> bc(batches, 0);
    for (int i = 0; i < s; ++i) {
        int b = static_cast<int>((static_cast<long long>(i) * batches) / s);
        bm[b] += vals[i];
        ++bc[b];
    }
    double vr = 0.0, vi = 0.0;
    for (int b = 0; b < batches; ++b) {
        bm[b] /= static_cast<double>(bc[b]);
        vr += (bm[b].real() - mean.real()) * (bm[b].real() - mean.real());
        vi += (bm[b].imag() - mean.imag()) * (bm[b].imag() - mean.imag());
    }
    BatchStats out;
    out.mean = mean;
    out.se_re = std::sqrt(vr / (batches * (batches - 1.0)));
    out.se_im = std::sqrt(vi / (batches * (batches - 1.0)));
    return out;
}

PairCovariance pair_covariance(std::span<const cplx> a, std::span<const cplx> b, double n,
                               int batches) {
    const int s = static_cast<int>(a.size());
    if (s != static_cast<int>(b.size()) || s < 4)
        throw ValidationError("pair_covariance: need matching sample arrays");
    cplx ma = 0.0, mb = 0.0;
    for (int i = 0; i < s; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= s;
    mb /= s;
    std::vector<cplx> prod_bl(s), prod_sq(s);
    for (int i = 0; i < s; ++i) {
        const cplx xa = n * (a[i] - ma);
        const cplx xb = n * (b[i] - mb);
        prod_bl[i] = xa * xb;
        prod_sq[i] = xa * std::conj(xb);
    }
    BatchStats bl = batch_mean(prod_bl, batches);
    BatchStats sq = batch_mean(prod_sq, batches);
    PairCovariance out;
    out.bilinear = bl.mean;
    out.se_bilinear = bl.se();
    out.sesquilinear = sq.mean;
    out.se_sesquilinear = sq.se();
    return out;
}

WickRatio wick_fourth_ratio(std::span<const cplx> vals, int batches) {
    const int s = static_cast<int>(vals.size());
    cplx mean = 0.0;
    for (auto v : vals) mean += v;
    mean /= static_cast<double>(s);
    batches = std::max(2, std::min(batches, s));
    // per-batch ratio, then batch spread
    std::vector<double> ratios;
    for (int b = 0; b < batches; ++b) {
        const int lo = static_cast<int>((static_cast<long long>(b) * s) / batches);
        const int hi = static_cast<int>((static_cast<long long>(b + 1) * s) / batches);
        double m4 = 0.0, m2 = 0.0;
        cplx p2 = 0.0;
        for (int i = lo; i < hi; ++i) {
            const cplx x = vals[i] - mean;
            const double a2 = std::norm(x);
            m4 += a2 * a2;
            m2 += a2;
            p2 += x * x;
        }
        const double cnt = hi - lo;
        m4 /= cnt;
        m2 /= cnt;
        p2 /= cnt;
        ratios.push_back(m4 / (2.0 * m2 * m2 + std::norm(p2)));
    }
    double mu = 0.0;
    for (double r : ratios) mu += r;
    mu /= ratios.size();
    double var = 0.0;
    for (double r : ratios) var += (r - mu) * (r - mu);
    WickRatio out;
    out.value = mu;
    out.se = std::sqrt(var / (ratios.size() * (ratios.size() - 1.0)));
    return out;
}

}  // namespace wclt
