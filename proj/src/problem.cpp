#include "axibie/problem.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

#include "axibie/error.hpp"

namespace axibie {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Discretization make_discretization(CurvePtr curve, const ProblemOptions& o) {
  if (!curve) throw ConfigError("problem: no curve");
  if (o.n_f < 0) throw ConfigError("problem: n_f must be nonnegative");
  return Discretization(std::move(curve), o.n_panels);
}

}  // namespace

int evaluation_m_theta(int n_f, int m_theta) { return fft_friendly_size(std::max({m_theta, 2 * n_f + 1, 512})); }

Problem::Problem(CurvePtr curve, ProblemOptions options)
    : options_(std::move(options)), disc_(make_discretization(std::move(curve), options_)) {
  const auto t0 = Clock::now();
  m_theta_ = options_.m_theta > 0 ? options_.m_theta : default_m_theta(options_.n_f);
  if (m_theta_ < 2 * options_.n_f + 1)
    throw ConfigError("problem: m_theta = " + std::to_string(m_theta_) + " cannot resolve n_f = " +
                      std::to_string(options_.n_f));
  if (options_.type == ProblemType::Interior) {
    kernel_ = std::make_shared<ScaledKernel>(std::make_shared<LaplaceDoubleLayer>(options_.policy), -2.0);
  } else {
    x0_ = options_.x0 ? *options_.x0 : default_reference_point(disc_.curve());
    if (x0_[0] < 0.0 || !disc_.curve().contains(std::max(x0_[0], 1e-6 * disc_.curve().bounding_radius()), x0_[1]))
      throw ConfigError("problem: reference point x0 must lie inside the generating curve");
    kernel_ = std::make_shared<ScaledKernel>(
        std::make_shared<LaplaceExteriorKernel>(x0_, options_.completion, options_.policy), -2.0);
  }
  timings_.setup = seconds_since(t0);
}

void Problem::assemble() {
  if (!systems_.empty() || !factors_.empty()) return;
  AssemblyTimings t;
  systems_ = build_modal_systems(disc_, *kernel_, options_.n_f, options_.assembly, &t);
  timings_.setup += t.setup;
  timings_.mat = t.mat;
}

void Problem::factorize() {
  if (!factors_.empty()) return;
  assemble();
  const auto t0 = Clock::now();
  factors_ = axibie::factorize(systems_, options_.factor);
  if (options_.factor.release_matrices) systems_.clear();
  timings_.inv = seconds_since(t0);
}

FourierModes Problem::solve_modes(const FourierModes& data_modes) {
  factorize();
  auto t0 = Clock::now();
  FourierModes rhs = data_modes;
  rhs.coeffs *= -2.0;
  FourierModes sigma = solve_all(factors_, rhs);
  timings_.apply = seconds_since(t0);
  return sigma;
}

GridField Problem::solve(const GridField& data) {
  if (data.rows() != disc_.size())
    throw ConfigError("problem: boundary data has " + std::to_string(data.rows()) + " rows, expected " +
                      std::to_string(disc_.size()));
  factorize();
  auto t0 = Clock::now();
  const FourierModes f = fourier_analyze(data, options_.n_f);
  double t_fft = seconds_since(t0);
  const FourierModes s = solve_modes(f);
  t0 = Clock::now();
  GridField sigma = fourier_synthesize(s, static_cast<int>(data.cols()));
  timings_.fft = t_fft + seconds_since(t0);
  return sigma;
}

std::vector<double> Problem::potential(const GridField& sigma, std::span<const Vec3> targets) const {
  const GridField fine =
      fourier_synthesize(fourier_analyze(sigma, options_.n_f), evaluation_m_theta(options_.n_f, m_theta_));
  std::vector<double> u(targets.size());
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < targets.size(); ++k) {
    try {
      u[k] = eval_double_layer_potential(fine, disc_, options_.type, targets[k], x0_);
    } catch (const std::exception& e) {
#pragma omp critical(axibie_potential_failure)
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw NumericalError(failure);
  return u;
}

std::vector<SingularValueExtremes> Problem::conditioning() {
  if (systems_.empty()) {
    if (!factors_.empty())
      throw ConfigError("problem: matrices were released after factorization; set release_matrices = false");
    assemble();
  }
  std::vector<SingularValueExtremes> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(singular_value_extremes(s));
  return out;
}

ManufacturedResult run_manufactured(Problem& problem, const ManufacturedOptions& options) {
  const auto& curve = problem.curve();
  const auto type = problem.options().type;
  ManufacturedResult res;
  res.charges = random_charges(curve, type, options.charges, options.seed);
  res.targets = evaluation_targets(curve, type, options.targets);
  const GridField f = boundary_data(problem.discretization(), res.charges, problem.m_theta());
  res.sigma = problem.solve(f);
  res.u_num = problem.potential(res.sigma, res.targets);
  res.u_exact.reserve(res.targets.size());
  res.min_clearance = std::numeric_limits<double>::infinity();
  for (const auto& x : res.targets) {
    res.u_exact.push_back(point_charge_potential(res.charges, x));
    res.min_clearance = std::min(res.min_clearance, clearance_in_panels(problem.discretization(), x));
  }
  res.error = relative_linf_error(res.u_num, res.u_exact);
  return res;
}

}  // namespace axibie
