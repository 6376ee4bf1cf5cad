#include "wclt/chain_core.hpp"
#include "wclt/errors.hpp"

namespace wclt {

// Linear recursion for the 1/N expectation term E[T_1,...,T_k], with the
// Hadamard source over 1 <= r <= s <= t <= k and its q_{1,k}<A_k> twin.
// E[empty] = 0; the k = 1 value closes the recursion through the source term
// alone and evaluates to <A_1> m_1' m_1^3.
cplx Workspace::correction_e(const Chain& chain) {
    const int k = static_cast<int>(chain.size());
    if (k == 0) return 0.0;
    Key key = key_full(chain);
    auto hit = memo_e_.find(key);
    if (hit != memo_e_.end()) return hit->second;

    const int n = chain_dim(chain);
    const SpectralPoint& p1 = chain.front().pt;
    const SpectralPoint& pk = chain.back().pt;
    const cplx m1 = p1.m;
    const cplx q1k = q_factor(p1, pk);
    const MatPtr& A1 = chain.front().mat;
    const MatPtr& Ak = chain.back().mat;
    const cplx avgAk = Ak->avg();
    const MatPtr id = ident(n);

    cplx acc = 0.0;

    // E[T_2,...,T_{k-1},T_k A_1] and its q-twin E[T_2,...,T_{k-1},G_k A_1]<A_k>
    if (k >= 2) {
        Chain merged(chain.begin() + 1, chain.end() - 1);
        merged.push_back(ChainLink{pk, product(Ak, A1)});
        acc += correction_e(merged);
        merged.back().mat = A1;
        acc += q1k * correction_e(merged) * avgAk;
    }

    // sum_{j=1}^{k-1} E[T_1,...,T_{j-1},G_j] (m[T_j,...,T_k] + q_{1,k} m[T_j,...,T_{k-1},G_k]<A_k>)
    for (int j = 1; j <= k - 1; ++j) {
        Chain pre(chain.begin(), chain.begin() + j - 1);
        pre.push_back(ChainLink{chain[j - 1].pt, id});
        Chain suf(chain.begin() + j - 1, chain.end());
        Chain suf_id(chain.begin() + j - 1, chain.end() - 1);
        suf_id.push_back(ChainLink{pk, id});
        acc += correction_e(pre) * (scalar_m(suf) + q1k * scalar_m(suf_id) * avgAk);
    }

    // sum_{j=2}^{k} m[T_1,...,T_{j-1},G_j] (E[T_j,...,T_k] + q_{1,k} E[T_j,...,T_{k-1},G_k]<A_k>)
    for (int j = 2; j <= k; ++j) {
        Chain pre(chain.begin(), chain.begin() + j - 1);
        pre.push_back(ChainLink{chain[j - 1].pt, id});
        Chain suf(chain.begin() + j - 1, chain.end());
        Chain suf_id(chain.begin() + j - 1, chain.end() - 1);
        suf_id.push_back(ChainLink{pk, id});
        acc += scalar_m(pre) * (correction_e(suf) + q1k * correction_e(suf_id) * avgAk);
    }

    // Hadamard source: sum_{1<=r<=s<=t<=k} <M_[r] . M_[s,t]> <M_[r,s] . (M_[t,k] A_k)>
    // plus the q_{1,k} <A_k> twin without the trailing A_k.
    cplx src = 0.0, src_twin = 0.0;
    for (int r = 1; r <= k; ++r) {
        Chain c_r(chain.begin(), chain.begin() + r);
        MatPtr Mr = matrix_m(c_r);
        for (int s = r; s <= k; ++s) {
            Chain c_rs(chain.begin() + r - 1, chain.begin() + s);
            MatPtr Mrs = matrix_m(c_rs);
            for (int t = s; t <= k; ++t) {
                Chain c_st(chain.begin() + s - 1, chain.begin() + t);
                Chain c_tk(chain.begin() + t - 1, chain.end());
                MatPtr Mst = matrix_m(c_st);
                MatPtr Mtk = matrix_m(c_tk);
                const cplx left = hadamard_avg(*Mr, *Mst);
                src += left * hadamard_avg(*Mrs, *product(Mtk, Ak));
                src_twin += left * hadamard_avg(*Mrs, *Mtk);
            }
        }
    }
    acc += src + q1k * src_twin * avgAk;

    cplx v = m1 * acc;
    memo_e_.emplace(std::move(key), v);
    return v;
}

}  // namespace wclt
