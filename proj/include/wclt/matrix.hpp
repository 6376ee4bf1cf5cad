#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>

namespace wclt {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// Deterministic test matrix. Dense in general; diagonal matrices (including
// the identity) keep a compact representation so that chains of diagonal
// matrices never pay for dense products. Instances are immutable and shared.
class DetMat {
  public:
    enum class Kind { identity, traceless, general };

    static std::shared_ptr<const DetMat> identity(int n);
    static std::shared_ptr<const DetMat> diagonal(VectorXc d, Kind kind = Kind::general);
    static std::shared_ptr<const DetMat> dense(MatrixXc a, Kind kind = Kind::general);

    // diagonal +-1 pattern (traceless for even n)
    static std::shared_ptr<const DetMat> traceless_diag_sign(int n, std::uint64_t seed);
    // Hermitian pattern supported off the diagonal only (traceless by construction)
    static std::shared_ptr<const DetMat> traceless_offdiag(int n, std::uint64_t seed);

    int n() const { return n_; }
    Kind kind() const { return kind_; }
    bool is_diag() const { return is_diag_; }
    bool is_identity() const { return kind_ == Kind::identity; }
    cplx avg() const { return avg_; }  // <A> = Tr(A)/n
    std::uint64_t id() const { return id_; }

    const VectorXc& diag_values() const { return diag_; }  // valid when is_diag()
    const MatrixXc& dense_values() const;                  // materializes if diagonal
    VectorXc diagonal_part() const;                        // diag entries as a vector
    double op_norm_upper() const;                          // cheap upper bound on ||A||

    std::shared_ptr<const DetMat> adjoint() const;
    std::shared_ptr<const DetMat> traceless_part() const;  // A - <A> Id

    DetMat() = default;  // use the factories; instances are shared as const

  private:
    int n_ = 0;
    Kind kind_ = Kind::general;
    bool is_diag_ = false;
    VectorXc diag_;
    MatrixXc dense_;
    mutable MatrixXc dense_cache_;  // for diagonal mats asked for dense form
    cplx avg_{};
    std::uint64_t id_ = 0;
};

using MatPtr = std::shared_ptr<const DetMat>;

// A * B with diagonal shortcuts.
MatPtr mat_product(const MatPtr& a, const MatPtr& b);
// <A B>
cplx avg_product(const DetMat& a, const DetMat& b);
// <A (hadamard) B> = (1/n) sum_i A_ii B_ii
cplx hadamard_avg(const DetMat& a, const DetMat& b);

// CSV loader: rows of complex entries "a+bi" (or plain reals), square matrix.
MatPtr load_matrix_csv(const std::string& path, bool center_traceless);

}  // namespace wclt
