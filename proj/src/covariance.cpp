#include "wclt/chain_core.hpp"
#include "wclt/errors.hpp"

namespace wclt {

// Two-chain covariance kernel m[alpha|beta], reduced on the first argument.
// The k = 1 base closes through the source terms; the sources couple the two
// chains by a cyclic tour of beta appended to alpha (GUE part) and by
// Hadamard products of M matrices over wrapped sub-tours (kappa_4 part).
std::pair<cplx, cplx> Workspace::covariance_parts(const Chain& alpha, const Chain& beta) {
    const int k = static_cast<int>(alpha.size());
    const int l = static_cast<int>(beta.size());
    if (k == 0 || l == 0) return {0.0, 0.0};
    Key key = key_pair(alpha, beta);
    auto hit = memo_cov_.find(key);
    if (hit != memo_cov_.end()) return hit->second;

    const int n = chain_dim(alpha);
    const SpectralPoint& p1 = alpha.front().pt;
    const SpectralPoint& pk = alpha.back().pt;
    const cplx m1 = p1.m;
    const cplx q1k = q_factor(p1, pk);
    const MatPtr& A1 = alpha.front().mat;
    const MatPtr& Ak = alpha.back().mat;
    const cplx avgAk = Ak->avg();
    const MatPtr id = ident(n);

    cplx gue = 0.0, kap = 0.0;
    auto add = [&](const std::pair<cplx, cplx>& p, cplx w) {
        gue += w * p.first;
        kap += w * p.second;
    };

    if (k >= 2) {
        // m[T_2,...,T_{k-1},G_k A_k A_1 | beta] + q_{1,k} m[...,G_k A_1 | beta] <A_k>
        Chain merged(alpha.begin() + 1, alpha.end() - 1);
        merged.push_back(ChainLink{pk, product(Ak, A1)});
        add(covariance_parts(merged, beta), 1.0);
        merged.back().mat = A1;
        add(covariance_parts(merged, beta), q1k * avgAk);
    }
    // sum_{j=1}^{k-1} m[T_1,...,T_{j-1},G_j | beta] (m[T_j,...,T_k] + q_{1,k} m[T_j,...,T_{k-1},G_k]<A_k>)
    for (int j = 1; j <= k - 1; ++j) {
        Chain pre(alpha.begin(), alpha.begin() + j - 1);
        pre.push_back(ChainLink{alpha[j - 1].pt, id});
        Chain suf(alpha.begin() + j - 1, alpha.end());
        Chain suf_id(alpha.begin() + j - 1, alpha.end() - 1);
        suf_id.push_back(ChainLink{pk, id});
        add(covariance_parts(pre, beta), scalar_m(suf) + q1k * scalar_m(suf_id) * avgAk);
    }
    // sum_{j=2}^{k} m[T_1,...,T_{j-1},G_j] (m[T_j,...,T_k | beta] + q_{1,k} m[T_j,...,T_{k-1},G_k | beta]<A_k>)
    for (int j = 2; j <= k; ++j) {
        Chain pre(alpha.begin(), alpha.begin() + j - 1);
        pre.push_back(ChainLink{alpha[j - 1].pt, id});
        Chain suf(alpha.begin() + j - 1, alpha.end());
        Chain suf_id(alpha.begin() + j - 1, alpha.end() - 1);
        suf_id.push_back(ChainLink{pk, id});
        const cplx w = scalar_m(pre);
        add(covariance_parts(suf, beta), w);
        add(covariance_parts(suf_id, beta), w * q1k * avgAk);
    }
    gue *= m1;
    kap *= m1;

    // GUE source: cyclic tours of beta appended to alpha, terminated by a bare resolvent.
    cplx sgue = 0.0;
    Chain alpha_id(alpha.begin(), alpha.end() - 1);
    alpha_id.push_back(ChainLink{pk, id});
    for (int j = 1; j <= l; ++j) {
        Chain tour(beta.begin() + j - 1, beta.end());
        tour.insert(tour.end(), beta.begin(), beta.begin() + j - 1);
        tour.push_back(ChainLink{beta[j - 1].pt, id});
        Chain full(alpha);
        full.insert(full.end(), tour.begin(), tour.end());
        sgue += scalar_m(full);
        Chain full_id(alpha_id);
        full_id.insert(full_id.end(), tour.begin(), tour.end());
        sgue += q1k * scalar_m(full_id) * avgAk;
    }
    gue += m1 * sgue;

    // kappa_4 source: Hadamard traces over wrapped sub-tours of beta.
    cplx skap = 0.0, skap_twin = 0.0;
    for (int r = 1; r <= k; ++r) {
        Chain c_r(alpha.begin(), alpha.begin() + r);
        MatPtr Mr = matrix_m(c_r);
        Chain c_rk(alpha.begin() + r - 1, alpha.end());
        MatPtr Mrk = matrix_m(c_rk);
        MatPtr MrkAk = product(Mrk, Ak);
        for (int s = 1; s <= l; ++s) {
            for (int t = 1; t <= s; ++t) {
                // M_(s,...,k+l,k+1,...,t) and M_[t,s]
                Chain wrap(beta.begin() + s - 1, beta.end());
                wrap.insert(wrap.end(), beta.begin(), beta.begin() + t);
                MatPtr Mwrap = matrix_m(wrap);
                Chain c_ts(beta.begin() + t - 1, beta.begin() + s);
                MatPtr Mts = matrix_m(c_ts);
                const cplx left = hadamard_avg(*Mr, *Mwrap);
                skap += left * hadamard_avg(*MrkAk, *Mts);
                skap_twin += left * hadamard_avg(*Mrk, *Mts);
            }
            for (int t = s; t <= l; ++t) {
                // M_[s,t] and M_(t,...,k+l,k+1,...,s)
                Chain c_st(beta.begin() + s - 1, beta.begin() + t);
                MatPtr Mst = matrix_m(c_st);
                Chain wrap(beta.begin() + t - 1, beta.end());
                wrap.insert(wrap.end(), beta.begin(), beta.begin() + s);
                MatPtr Mwrap = matrix_m(wrap);
                const cplx left = hadamard_avg(*Mr, *Mst);
                skap += left * hadamard_avg(*MrkAk, *Mwrap);
                skap_twin += left * hadamard_avg(*Mrk, *Mwrap);
            }
        }
    }
    kap += m1 * (skap + q1k * skap_twin * avgAk);

    auto out = std::make_pair(gue, kap);
    memo_cov_.emplace(std::move(key), out);
    return out;
}

CovarianceValue Workspace::covariance_m(const Chain& alpha, const Chain& beta, double kappa4) {
    if (!alpha.empty() && !beta.empty() && chain_dim(alpha) != chain_dim(beta))
        throw ValidationError("covariance_m: chains must share the matrix dimension");
    auto [gue, kap] = covariance_parts(alpha, beta);
    return CovarianceValue{gue + kappa4 * kap, gue, kap};
}

ExpectationExpansion predict_expectation(Workspace& ws, const Chain& chain, double kappa4) {
    ExpectationExpansion e;
    e.leading = ws.scalar_m(chain);
    e.correction = ws.correction_e(chain);
    e.kappa4 = kappa4;
    return e;
}

CovarianceValue scalar_cov_m(const std::vector<cplx>& zs1, const std::vector<cplx>& zs2,
                             double kappa4) {
    // identity matrices make the value dimension independent; use n = 2
    Workspace ws;
    auto id = DetMat::identity(2);
    Chain a, b;
    for (cplx z : zs1) a.push_back(link(z, id));
    for (cplx z : zs2) b.push_back(link(z, id));
    return ws.covariance_m(a, b, kappa4);
}

}  // namespace wclt
