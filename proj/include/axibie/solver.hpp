#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "axibie/assembly.hpp"

namespace axibie {

/// Per-node Fourier coefficients f_n = (1/sqrt(2 pi)) int e^{-i n theta} f d theta
/// for n = -N_F..N_F; column n + N_F of `coeffs`.
struct FourierModes {
  int n_f = 0;
  Eigen::MatrixXcd coeffs;  // nodes x (2 N_F + 1)

  FourierModes() = default;
  FourierModes(int nodes, int n_f_) : n_f(n_f_), coeffs(Eigen::MatrixXcd::Zero(nodes, 2 * n_f_ + 1)) {}
  [[nodiscard]] int nodes() const noexcept { return static_cast<int>(coeffs.rows()); }
  [[nodiscard]] auto mode(int n) { return coeffs.col(n + n_f); }
  [[nodiscard]] auto mode(int n) const { return coeffs.col(n + n_f); }
};

/// Field samples f(node, theta_m), theta_m = 2 pi m / M_theta: nodes x M_theta.
using GridField = Eigen::MatrixXd;

/// Throws ConfigError when M_theta < 2 N_F + 1.
FourierModes fourier_analyze(const GridField& grid, int n_f);
/// Real grid values; modes n and -n are combined with conjugate symmetry.
/// Throws ConfigError when M_theta < 2 N_F + 1.
GridField fourier_synthesize(const FourierModes& modes, int m_theta);

/// Smallest FFT-friendly size >= 4 (N_F + 1).
int default_m_theta(int n_f);

struct TruncationResult {
  int n_f = 0;
  double tail = 0.0;       // relative discrete L2 tail beyond n_f; when not converged, the top mode's share
  bool converged = true;   // false: spectrum has not decayed by the grid limit
};

/// Smallest N_F whose discrete L2 tail over the sampling grid is <= eps * ||f||.
TruncationResult select_truncation(const GridField& grid, double eps);

struct FactorOptions {
  bool explicit_inverse = false;
  double rcond_threshold = 1e-14;
  /// Free each A_n once its factorization is done.
  bool release_matrices = true;
};

/// Pivoted LU (or explicit inverse) of I + A_n.
class FactorizedSystem {
 public:
  FactorizedSystem(int n, const ModalMatrix& a, const FactorOptions& options);

  [[nodiscard]] int mode() const noexcept { return n_; }
  [[nodiscard]] double rcond() const noexcept { return rcond_; }
  [[nodiscard]] int size() const noexcept { return size_; }
  /// x = (I + A_n)^{-1} b, column by column.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  int n_;
  int size_;
  double rcond_ = 0.0;
  bool explicit_inverse_;
  Eigen::PartialPivLU<ModalMatrix> lu_;
  ModalMatrix inverse_;
};

/// Throws NumericalError naming the mode when rcond < threshold.
std::vector<FactorizedSystem> factorize(std::vector<ModalSystem>& systems, const FactorOptions& options = {});

/// sigma_n = (I + A_{|n|})^{-1} f_n for |n| <= rhs.n_f. Throws ConfigError
/// when the right-hand side has more modes than there are factorizations.
FourierModes solve_all(const std::vector<FactorizedSystem>& factors, const FourierModes& rhs);

struct SingularValueExtremes {
  int n = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  [[nodiscard]] double cond() const { return sigma_max / sigma_min; }
};

/// Extreme singular values of I + A_n (full SVD).
SingularValueExtremes singular_value_extremes(const ModalSystem& system);

}  // namespace axibie
