#pragma once

#include <optional>
#include <span>
#include <vector>

#include "axibie/assembly.hpp"
#include "axibie/geometry.hpp"
#include "axibie/postprocess.hpp"
#include "axibie/solver.hpp"

namespace axibie {

struct ProblemOptions {
  ProblemType type = ProblemType::Interior;
  int n_panels = 10;
  int n_f = 49;
  AssemblyOptions assembly;
  RecursionPolicy policy = RecursionPolicy::Auto;
  FactorOptions factor;
  /// Exterior reference point; defaults to default_reference_point(curve).
  std::optional<Vec2> x0;
  /// Exterior only: include the 1/(4 pi |x - x0|) term.
  bool completion = true;
  /// Azimuthal grid for boundary data; 0 selects default_m_theta(n_f).
  int m_theta = 0;
};

/// Wall-clock seconds per phase.
struct PhaseTimings {
  double setup = 0.0;  // discretization, auxiliary nodes
  double mat = 0.0;    // modal matrices
  double inv = 0.0;    // factorizations
  double fft = 0.0;    // analysis of the data and synthesis of the density
  double apply = 0.0;  // per-mode solves
};

/// Interior: -sigma/2 + D sigma = f. Exterior: -sigma/2 + (-D + S_x0) sigma = f, the
/// exterior limit of u = (-D + S_x0) sigma.
/// Both are scaled by -2 to the form (I + A_n) sigma_n = -2 f_n.
class Problem {
 public:
  Problem(CurvePtr curve, ProblemOptions options);

  [[nodiscard]] const ProblemOptions& options() const noexcept { return options_; }
  [[nodiscard]] const Discretization& discretization() const noexcept { return disc_; }
  [[nodiscard]] const GeneratingCurve& curve() const noexcept { return disc_.curve(); }
  [[nodiscard]] Vec2 reference_point() const noexcept { return x0_; }
  [[nodiscard]] int m_theta() const noexcept { return m_theta_; }
  [[nodiscard]] const ModalKernel& kernel() const noexcept { return *kernel_; }
  [[nodiscard]] const PhaseTimings& timings() const noexcept { return timings_; }

  /// Builds A_0..A_{N_F}; no-op when already assembled.
  void assemble();
  [[nodiscard]] const std::vector<ModalSystem>& systems() const noexcept { return systems_; }
  /// Factorizes every mode, assembling first if needed.
  void factorize();
  [[nodiscard]] bool factorized() const noexcept { return !factors_.empty(); }
  [[nodiscard]] const std::vector<FactorizedSystem>& factors() const noexcept { return factors_; }

  /// Density on the nodes x M_theta grid for Dirichlet data on the same grid.
  [[nodiscard]] GridField solve(const GridField& data);
  [[nodiscard]] FourierModes solve_modes(const FourierModes& data_modes);

  /// Potential at off-surface points. The density is resampled to an
  /// azimuthal grid fine enough for the tensor quadrature.
  [[nodiscard]] std::vector<double> potential(const GridField& sigma, std::span<const Vec3> targets) const;

  /// Per-mode singular-value extremes of I + A_n. Requires matrices kept
  /// after factorization or not yet factorized.
  [[nodiscard]] std::vector<SingularValueExtremes> conditioning();

 private:
  ProblemOptions options_;
  Discretization disc_;
  Vec2 x0_{0.0, 0.0};
  int m_theta_ = 0;
  KernelPtr kernel_;
  std::vector<ModalSystem> systems_;
  std::vector<FactorizedSystem> factors_;
  PhaseTimings timings_;
};

struct ManufacturedOptions {
  int charges = 3;
  unsigned seed = 1;
  int targets = 50;
};

struct ManufacturedResult {
  double error = 0.0;
  double min_clearance = 0.0;  // smallest target clearance, in panel lengths
  std::vector<PointCharge> charges;
  std::vector<Vec3> targets;
  std::vector<double> u_num;
  std::vector<double> u_exact;
  GridField sigma;
};

/// Solves with point-charge Dirichlet data and compares against the exact
/// potential at the evaluation targets.
ManufacturedResult run_manufactured(Problem& problem, const ManufacturedOptions& options = {});

/// Azimuthal grid used for off-surface evaluation of a density with N_F modes.
int evaluation_m_theta(int n_f, int m_theta);

}  // namespace axibie
