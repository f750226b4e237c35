#pragma once

#include <Eigen/Dense>

#include <vector>

#include "axibie/geometry.hpp"
#include "axibie/modal_kernels.hpp"

namespace axibie {

using ModalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A_n for one azimuthal mode n >= 0 (A_{-n} = A_n), panel-major indexing.
struct ModalSystem {
  int n = 0;
  ModalMatrix matrix;
};

enum class BlockRegime { Self, Adjacent, Far };

/// How modal kernel values are obtained.
///   Recursion: closed forms through the Legendre-Q recursions.
///   Fft:       trapezoidal FFT of the azimuthal kernel (far blocks only).
///   Oracle:    one adaptive integral per mode (near blocks only; reference
///              timings).
enum class KernelPath { Recursion, Fft, Oracle };

struct AssemblyOptions {
  KernelPath far_path = KernelPath::Recursion;
  KernelPath near_path = KernelPath::Recursion;
  int fft_oversample = 4;
  double oracle_tol = 1e-10;
};

struct AssemblyTimings {
  double setup = 0.0;  // auxiliary-node geometry and interpolation matrices
  double mat = 0.0;    // kernel evaluation and matrix fill
};

BlockRegime block_regime(const Discretization& disc, int p, int q);

/// Auxiliary quadrature for the near-field blocks of every target node: the
/// singular rule on its own panel (split further on panels touching the axis)
/// and the nearby rule on each adjacent panel,
/// mapped to arc length, with source geometry evaluated on the curve and the
/// Lagrange matrices that pull the density back to the Gauss nodes.
class NearField {
 public:
  struct Term {
    int panel = 0;
    int first = 0;  // first auxiliary node
    int count = 0;
    const Eigen::MatrixXd* interp = nullptr;  // count x N_G
  };

  explicit NearField(const Discretization& disc);

  [[nodiscard]] std::span<const Term> terms(int target) const;
  [[nodiscard]] const CurvePoint& point(int aux) const { return points_[aux]; }
  /// sqrt(2 pi) * rule weight * r' * jacobian at the auxiliary node.
  [[nodiscard]] double weight(int aux) const { return weights_[aux]; }
  [[nodiscard]] double param(int aux) const { return params_[aux]; }
  [[nodiscard]] int aux_count() const noexcept { return static_cast<int>(points_.size()); }

 private:
  std::vector<std::vector<Term>> terms_;
  std::vector<CurvePoint> points_;
  std::vector<double> weights_;
  std::vector<double> params_;
  std::vector<Eigen::MatrixXd> self_interp_;
  std::vector<Eigen::MatrixXd> after_interp_;
  std::vector<Eigen::MatrixXd> before_interp_;
  std::vector<Eigen::MatrixXd> pole_interp_;
};

/// Far block (p, q) for n = 0..n_max:
/// entry (i, j) = sqrt(2 pi) w_j k_n(t_i, t_j) r'_j |dtau/ds|_j.
/// Throws DomainError if the panels are equal or adjacent.
std::vector<Eigen::MatrixXd> assemble_far_block(const Discretization& disc, const ModalKernel& kernel, int p,
                                                int q, int n_max, const AssemblyOptions& options = {});

/// Self or adjacent block (p, q) for n = 0..n_max through the auxiliary
/// rules. Throws DomainError for a far pair.
std::vector<Eigen::MatrixXd> assemble_near_block(const Discretization& disc, const NearField& near,
                                                 const ModalKernel& kernel, int p, int q, int n_max,
                                                 const AssemblyOptions& options = {});

/// A_0..A_{n_f}. Far blocks share one kernel sweep over all modes per node
/// pair; near blocks use the auxiliary rules.
std::vector<ModalSystem> build_modal_systems(const Discretization& disc, const ModalKernel& kernel, int n_f,
                                             const AssemblyOptions& options = {},
                                             AssemblyTimings* timings = nullptr);

}  // namespace axibie
