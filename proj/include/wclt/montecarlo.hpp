#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wclt/chain.hpp"
#include "wclt/matrix.hpp"

namespace wclt {

struct EnsembleConfig {
    int n = 256;
    enum class Law { gue, uniform_phase } law = Law::gue;
    std::uint64_t seed = 1;
    int samples = 400;

    double kappa4() const { return law == Law::uniform_phase ? -1.0 : 0.0; }
};

// A per-sample statistic <f_1(W) A_1 ... f_k(W) A_k> evaluated from one
// eigendecomposition; chains are the special case f_j = (lambda - z_j)^{-1}.
struct Mode {
    struct Slot {
        std::function<cplx(double)> fn;  // spectral function of an eigenvalue
        int mat = -1;                    // index into the matrix pool; -1 = identity
    };
    std::vector<Slot> slots;
    std::string name;
};

// Registers the chain's matrices in `pool` (deduplicated by instance id).
Mode chain_mode(const Chain& chain, std::vector<MatPtr>& pool, const std::string& name);

// Hermitian eigendecomposition; a is replaced by the eigenvectors.
// Throws EigendecompositionFailure if the solver fails or the residual
// probe exceeds 1e-10 * ||W||.
void hermitian_eig(MatrixXc& a, Eigen::VectorXd& w);

class Sampler {
  public:
    Sampler(EnsembleConfig cfg, std::vector<MatPtr> pool);

    // results(s, m) = value of mode m at sample s. Deterministic in
    // (seed, config); parallel over samples (threads = 0 -> WIGNER_CLT_THREADS
    // or hardware size).
    MatrixXc run(const std::vector<Mode>& modes, int threads = 0) const;

    MatrixXc sample_wigner(std::uint64_t index) const;
    const EnsembleConfig& config() const { return cfg_; }

  private:
    EnsembleConfig cfg_;
    std::vector<MatPtr> pool_;
};

// One-off evaluation of a mode on a fixed Hermitian matrix (test doubles,
// trajectory checks).
cplx evaluate_mode(const Mode& mode, const MatrixXc& w, const std::vector<MatPtr>& pool);

// ---- statistics -----------------------------------------------------------

struct BatchStats {
    cplx mean{};
    double se_re = 0.0, se_im = 0.0;

    double se() const { return std::sqrt(se_re * se_re + se_im * se_im); }
};

// mean with standard errors from >= 20 batches
BatchStats batch_mean(std::span<const cplx> vals, int batches = 20);

struct PairCovariance {
    cplx bilinear{};      // n^2 E[x_a x_b]
    double se_bilinear = 0.0;
    cplx sesquilinear{};  // n^2 E[x_a conj(x_b)]
    double se_sesquilinear = 0.0;
};

// x = n (v - mean v) per sample; covariances with batched standard errors.
PairCovariance pair_covariance(std::span<const cplx> a, std::span<const cplx> b, double n,
                               int batches = 20);

struct WickRatio {
    double value = 0.0;
    double se = 0.0;
};

// E|x|^4 / (2 (E|x|^2)^2 + |E x^2|^2): 1 for a complex Gaussian.
WickRatio wick_fourth_ratio(std::span<const cplx> vals, int batches = 20);

int default_thread_count();

}  // namespace wclt
