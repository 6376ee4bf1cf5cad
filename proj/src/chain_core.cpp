#include "wclt/chain_core.hpp"

#include <bit>

#include "wclt/errors.hpp"

namespace wclt {

void Workspace::append_link(Key& key, const ChainLink& l, bool with_matrix) {
    key.push_back(std::bit_cast<std::uint64_t>(l.pt.z.real()));
    key.push_back(std::bit_cast<std::uint64_t>(l.pt.z.imag()));
    if (with_matrix) key.push_back(l.mat->id());
}

Workspace::Key Workspace::key_matrix(const Chain& c) {
    Key key;
    key.reserve(3 * c.size());
    for (size_t i = 0; i < c.size(); ++i) append_link(key, c[i], i + 1 < c.size());
    return key;
}

Workspace::Key Workspace::key_full(const Chain& c) {
    Key key;
    key.reserve(3 * c.size());
    for (const auto& l : c) append_link(key, l, true);
    return key;
}

Workspace::Key Workspace::key_pair(const Chain& a, const Chain& b) {
    Key key = key_full(a);
    key.push_back(0xffffffffffffffffull);  // separator
    Key kb = key_full(b);
    key.insert(key.end(), kb.begin(), kb.end());
    return key;
}

MatPtr Workspace::ident(int n) {
    auto it = memo_id_.find(n);
    if (it == memo_id_.end()) it = memo_id_.emplace(n, DetMat::identity(n)).first;
    return it->second;
}

MatPtr Workspace::product(const MatPtr& a, const MatPtr& b) {
    const std::uint64_t key = (a->id() << 32) ^ b->id();
    auto it = memo_prod_.find(key);
    if (it == memo_prod_.end()) it = memo_prod_.emplace(key, mat_product(a, b)).first;
    return it->second;
}

cplx Workspace::q_factor(const SpectralPoint& a, const SpectralPoint& b) const {
    return stability_factor(a, b, stability_threshold_);
}

MatPtr Workspace::matrix_m(const Chain& chain) {
    const int k = static_cast<int>(chain.size());
    if (k == 0) throw ValidationError("matrix_m: empty chain");
    const int n = chain_dim(chain);

    Key key = key_matrix(chain);
    auto hit = memo_m_.find(key);
    if (hit != memo_m_.end()) return hit->second;

    MatPtr result;
    bool all_id = true;
    for (int i = 0; i + 1 < k; ++i)
        if (!chain[i].mat->is_identity()) {
            all_id = false;
            break;
        }
    if (k == 1) {
        result = DetMat::diagonal(VectorXc::Constant(n, chain[0].pt.m));
    } else if (all_id) {
        // M = m[z_1,...,z_k] Id when every interior matrix is the identity
        std::vector<cplx> zs(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) zs[i] = chain[i].pt.z;
        result = DetMat::diagonal(VectorXc::Constant(n, divided_difference(zs)));
    } else {
        const cplx m1 = chain[0].pt.m;
        const cplx q1k = q_factor(chain[0].pt, chain.back().pt);
        const MatPtr& A1 = chain[0].mat;
        Chain tail(chain.begin() + 1, chain.end());
        MatPtr M2k = matrix_m(tail);
        // accumulate densely (or diagonally when possible)
        const bool diag_path = A1->is_diag() && M2k->is_diag();
        MatrixXc acc_dense;
        VectorXc acc_diag;
        cplx acc_scalar = 0.0;  // coefficient of Id
        auto add_mat = [&](const MatPtr& mat, cplx w) {
            if (diag_path && mat->is_diag()) {
                if (acc_diag.size() == 0) acc_diag = VectorXc::Zero(n);
                acc_diag += w * mat->diag_values();
            } else {
                if (acc_dense.rows() == 0) acc_dense = MatrixXc::Zero(n, n);
                if (mat->is_diag())
                    acc_dense.diagonal() += w * mat->diag_values();
                else
                    acc_dense += w * mat->dense_values();
            }
        };
        add_mat(product(A1, M2k), 1.0);
        acc_scalar += q1k * avg_product(*A1, *M2k);
        // <M_[1,j]> terms
        for (int j = 2; j <= k - 1; ++j) {
            Chain pre(chain.begin(), chain.begin() + j);
            Chain suf(chain.begin() + j - 1, chain.end());
            cplx mpre = matrix_m(pre)->avg();
            MatPtr Msuf = matrix_m(suf);
            add_mat(Msuf, mpre);
            acc_scalar += mpre * q1k * Msuf->avg();
        }
        if (diag_path && acc_dense.rows() == 0) {
            if (acc_diag.size() == 0) acc_diag = VectorXc::Zero(n);
            acc_diag.array() += acc_scalar;
            result = DetMat::diagonal(m1 * acc_diag);
        } else {
            if (acc_dense.rows() == 0) acc_dense = MatrixXc::Zero(n, n);
            if (acc_diag.size() != 0) acc_dense.diagonal() += acc_diag;
            acc_dense.diagonal().array() += acc_scalar;
            result = DetMat::dense(m1 * acc_dense);
        }
    }
    memo_m_.emplace(std::move(key), result);
    return result;
}

cplx Workspace::scalar_m(const Chain& chain) {
    if (chain.empty()) return 0.0;
    Key key = key_full(chain);
    auto hit = memo_scalar_.find(key);
    if (hit != memo_scalar_.end()) return hit->second;
    cplx v = avg_product(*matrix_m(chain), *chain.back().mat);
    memo_scalar_.emplace(std::move(key), v);
    return v;
}

}  // namespace wclt
