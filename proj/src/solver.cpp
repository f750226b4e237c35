#include "axibie/solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "axibie/error.hpp"
#include "fft.hpp"

namespace axibie {

namespace {
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);
}

int default_m_theta(int n_f) { return fft_friendly_size(4 * (n_f + 1)); }

FourierModes fourier_analyze(const GridField& grid, int n_f) {
  const int m = static_cast<int>(grid.cols());
  if (n_f < 0) throw ConfigError("fourier_analyze: N_F must be nonnegative");
  if (m < 2 * n_f + 1)
    throw ConfigError("fourier_analyze: azimuthal grid of " + std::to_string(m) + " points cannot resolve N_F = " +
                      std::to_string(n_f));
  FourierModes out(static_cast<int>(grid.rows()), n_f);
  std::vector<double> row(m);
  std::vector<std::complex<double>> X(m / 2 + 1);
  const double scale = kSqrt2Pi / m;
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (int k = 0; k < m; ++k) row[k] = grid(i, k);
    fft::forward_real(row, X);
    for (int n = 0; n <= n_f; ++n) {
      out.coeffs(i, n_f + n) = scale * X[n];
      out.coeffs(i, n_f - n) = scale * std::conj(X[n]);
    }
  }
  return out;
}

GridField fourier_synthesize(const FourierModes& modes, int m_theta) {
  const int n_f = modes.n_f;
  if (m_theta < 2 * n_f + 1)
    throw ConfigError("fourier_synthesize: azimuthal grid of " + std::to_string(m_theta) +
                      " points cannot carry N_F = " + std::to_string(n_f));
  GridField out(modes.nodes(), m_theta);
  std::vector<std::complex<double>> X(m_theta / 2 + 1);
  std::vector<double> row(m_theta);
  const double scale = 1.0 / kSqrt2Pi;
  for (int i = 0; i < modes.nodes(); ++i) {
    std::fill(X.begin(), X.end(), std::complex<double>(0.0, 0.0));
    X[0] = scale * modes.coeffs(i, n_f).real();
    for (int n = 1; n <= n_f; ++n)
      X[n] = scale * 0.5 * (modes.coeffs(i, n_f + n) + std::conj(modes.coeffs(i, n_f - n)));
    fft::inverse_real(X, row);
    for (int k = 0; k < m_theta; ++k) out(i, k) = row[k];
  }
  return out;
}

TruncationResult select_truncation(const GridField& grid, double eps) {
  if (!(eps > 0.0)) throw ConfigError("select_truncation: eps must be positive");
  const int m = static_cast<int>(grid.cols());
  const int n_max = (m - 1) / 2;
  const FourierModes f = fourier_analyze(grid, n_max);
  std::vector<double> energy(n_max + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    energy[n] = f.mode(n).squaredNorm();
    if (n > 0) energy[n] += f.mode(-n).squaredNorm();
  }
  // tail[N] = energy beyond N, summed from the top so small tails keep their digits.
  std::vector<double> tail(n_max + 2, 0.0);
  for (int n = n_max; n >= 0; --n) tail[n] = tail[n + 1] + energy[n];
  const double total = tail[0];
  TruncationResult out;
  if (total == 0.0) return out;
  // The last resolved mode has nothing beyond it on the grid, so it never counts as converged.
  for (int n = 0; n < n_max; ++n) {
    const double rel = std::sqrt(tail[n + 1] / total);
    if (rel <= eps) {
      out.n_f = n;
      out.tail = rel;
      return out;
    }
  }
  out.n_f = n_max;
  out.tail = std::sqrt(tail[n_max] / total);
  out.converged = false;
  return out;
}

FactorizedSystem::FactorizedSystem(int n, const ModalMatrix& a, const FactorOptions& options)
    : n_(n), size_(static_cast<int>(a.rows())), explicit_inverse_(options.explicit_inverse) {
  lu_.compute(a + ModalMatrix::Identity(a.rows(), a.cols()));
  rcond_ = lu_.rcond();
  if (!(rcond_ >= options.rcond_threshold))
    throw NumericalError("modal system n = " + std::to_string(n) + " is numerically singular (rcond " +
                         std::to_string(rcond_) + ")");
  if (explicit_inverse_) inverse_ = lu_.inverse();
}

Eigen::VectorXd FactorizedSystem::solve(const Eigen::VectorXd& b) const {
  if (b.size() != size_) throw ConfigError("solve: right-hand side has the wrong length");
  if (explicit_inverse_) return inverse_ * b;
  return lu_.solve(b);
}

Eigen::MatrixXd FactorizedSystem::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd x(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) x.col(c) = solve(Eigen::VectorXd(b.col(c)));
  return x;
}

std::vector<FactorizedSystem> factorize(std::vector<ModalSystem>& systems, const FactorOptions& options) {
  std::vector<FactorizedSystem> out;
  out.reserve(systems.size());
  for (auto& s : systems) {
    out.emplace_back(s.n, s.matrix, options);
    if (options.release_matrices) ModalMatrix().swap(s.matrix);
  }
  return out;
}

FourierModes solve_all(const std::vector<FactorizedSystem>& factors, const FourierModes& rhs) {
  if (rhs.n_f + 1 > static_cast<int>(factors.size()))
    throw ConfigError("solve_all: right-hand side has modes up to " + std::to_string(rhs.n_f) + " but only " +
                      std::to_string(factors.size()) + " systems are factorized");
  FourierModes out(rhs.nodes(), rhs.n_f);
  for (int n = 0; n <= rhs.n_f; ++n) {
    const auto& f = factors[n];
    if (f.mode() != n) throw ConfigError("solve_all: factorizations out of mode order");
    const int cols = n == 0 ? 2 : 4;
    Eigen::MatrixXd b(rhs.nodes(), cols);
    b.col(0) = rhs.mode(n).real();
    b.col(1) = rhs.mode(n).imag();
    if (n > 0) {
      b.col(2) = rhs.mode(-n).real();
      b.col(3) = rhs.mode(-n).imag();
    }
    const Eigen::MatrixXd x = f.solve(b);
    out.mode(n).real() = x.col(0);
    out.mode(n).imag() = x.col(1);
    if (n > 0) {
      out.mode(-n).real() = x.col(2);
      out.mode(-n).imag() = x.col(3);
    }
  }
  return out;
}

SingularValueExtremes singular_value_extremes(const ModalSystem& system) {
  const Eigen::MatrixXd a = system.matrix + ModalMatrix::Identity(system.matrix.rows(), system.matrix.cols());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  return {system.n, s(0), s(s.size() - 1)};
}

}  // namespace axibie
