#pragma once

#include <unordered_map>

#include "wclt/chain.hpp"

namespace wclt {

// total = gue_part + kappa4 * kappa_part
struct CovarianceValue {
    cplx total{};
    cplx gue_part{};
    cplx kappa_part{};
};

// leading + kappa4 * correction / N
struct ExpectationExpansion {
    cplx leading{};
    cplx correction{};
    double kappa4 = 0.0;

    cplx predicted(double n) const { return leading + kappa4 * correction / n; }
    // the neglected term is O(N^eps / (N sqrt(N eta) eta^{k - a/2}))
    static constexpr const char* error_order = "O(1/(N sqrt(N eta) eta^{k-a/2}))";
};

// Evaluation context for the deterministic recursions. Memoizes the matrix
// set function M over sub-chains, merged matrix products, the scalar chain
// values, the 1/N expectation correction, and the two-chain covariance
// kernel. One workspace per logical evaluation; not thread-safe internally,
// distinct workspaces may run concurrently.
class Workspace {
  public:
    explicit Workspace(double stability_threshold = 1e-14)
        : stability_threshold_(stability_threshold) {}

    // Deterministic approximation M of G_1 A_1 ... A_{k-1} G_k (the last
    // matrix of the chain is not part of the product it approximates).
    MatPtr matrix_m(const Chain& chain);

    // m[T_1,...,T_k] = <M A_k>.
    cplx scalar_m(const Chain& chain);

    // E[T_1,...,T_k]: the kappa_4-coefficient of the 1/N expectation term.
    cplx correction_e(const Chain& chain);

    // m[alpha|beta] split into its GUE and kappa_4 parts.
    CovarianceValue covariance_m(const Chain& alpha, const Chain& beta, double kappa4);

    double stability_threshold() const { return stability_threshold_; }

  private:
    using Key = std::vector<std::uint64_t>;
    struct KeyHash {
        size_t operator()(const Key& k) const {
            size_t h = 0xcbf29ce484222325ull;
            for (auto v : k) {
                h ^= v;
                h *= 0x100000001b3ull;
            }
            return h;
        }
    };

    static void append_link(Key& key, const ChainLink& l, bool with_matrix);
    static Key key_matrix(const Chain& c);  // last matrix excluded
    static Key key_full(const Chain& c);
    static Key key_pair(const Chain& a, const Chain& b);

    MatPtr product(const MatPtr& a, const MatPtr& b);
    MatPtr ident(int n);
    cplx q_factor(const SpectralPoint& a, const SpectralPoint& b) const;

    std::pair<cplx, cplx> covariance_parts(const Chain& alpha, const Chain& beta);

    double stability_threshold_;
    std::unordered_map<Key, MatPtr, KeyHash> memo_m_;
    std::unordered_map<Key, cplx, KeyHash> memo_scalar_;
    std::unordered_map<Key, cplx, KeyHash> memo_e_;
    std::unordered_map<Key, std::pair<cplx, cplx>, KeyHash> memo_cov_;
    std::unordered_map<std::uint64_t, MatPtr> memo_prod_;
    std::unordered_map<int, MatPtr> memo_id_;
};

// m + kappa4 E / N packaged for a chain.
ExpectationExpansion predict_expectation(Workspace& ws, const Chain& chain, double kappa4);

// The scalar special case m[S1|S2] (all matrices identity); confluent
// multisets are handled by the recursion directly.
CovarianceValue scalar_cov_m(const std::vector<cplx>& zs1, const std::vector<cplx>& zs2,
                             double kappa4);

}  // namespace wclt
