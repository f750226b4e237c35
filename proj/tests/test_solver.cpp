#include <doctest.h>

#include <axibie/assembly.hpp>
#include <axibie/error.hpp>
#include <axibie/solver.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace axibie;

namespace {

constexpr double pi = std::numbers::pi;

GridField grid_of(int nodes, int m, const std::function<double(int, double)>& f) {
  GridField g(nodes, m);
  for (int i = 0; i < nodes; ++i)
    for (int k = 0; k < m; ++k) g(i, k) = f(i, 2 * pi * k / m);
  return g;
}

FourierModes random_modes(int nodes, int n_f, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> u;
  FourierModes f(nodes, n_f);
  for (int i = 0; i < nodes; ++i) {
    f.coeffs(i, n_f) = u(rng);
    for (int n = 1; n <= n_f; ++n) {
      const std::complex<double> c(u(rng), u(rng));
      f.coeffs(i, n_f + n) = c;
      f.coeffs(i, n_f - n) = std::conj(c);
    }
  }
  return f;
}

struct SphereSystems {
  Discretization disc;
  std::vector<ModalSystem> systems;
};

// -2 D on the unit sphere: the interior form (I + A_n) sigma_n = -2 f_n.
SphereSystems sphere_systems(int np, int n_f) {
  auto disc = build_discretization(curves::sphere(), np);
  ScaledKernel k(std::make_shared<LaplaceDoubleLayer>(), -2.0);
  auto sys = build_modal_systems(disc, k, n_f);
  return {std::move(disc), std::move(sys)};
}

FactorOptions keep() {
  FactorOptions o;
  o.release_matrices = false;
  return o;
}

}  // namespace

TEST_CASE("Fourier analysis conventions") {
  auto one = fourier_analyze(grid_of(3, 16, [](int, double) { return 1.0; }), 5);
  for (int i = 0; i < 3; ++i)
    for (int n = -5; n <= 5; ++n) {
      const double expect = n == 0 ? std::sqrt(2 * pi) : 0.0;
      CHECK(std::abs(one.mode(n)[i] - expect) <= 1e-14);
    }

  auto c = fourier_analyze(grid_of(2, 16, [](int, double t) { return std::cos(t); }), 5);
  for (int n = -5; n <= 5; ++n) {
    const double expect = std::abs(n) == 1 ? std::sqrt(pi / 2) : 0.0;
    CHECK(std::abs(c.mode(n)[0] - expect) <= 1e-14);
  }
  auto s = fourier_analyze(grid_of(1, 16, [](int, double t) { return std::sin(2 * t); }), 5);
  CHECK(std::abs(s.mode(2)[0] - std::complex<double>(0, -std::sqrt(pi / 2))) <= 1e-14);
  CHECK(std::abs(s.mode(-2)[0] - std::complex<double>(0, std::sqrt(pi / 2))) <= 1e-14);

  CHECK_THROWS_AS(fourier_analyze(GridField::Zero(2, 10), 5), ConfigError);
  CHECK_THROWS_AS(fourier_synthesize(FourierModes(2, 5), 10), ConfigError);
}

TEST_CASE("synthesis inverts analysis for band-limited fields") {
  for (int m : {11, 16, 45, 64}) {
    const int n_f = (m - 1) / 2;
    auto modes = random_modes(4, n_f, static_cast<unsigned>(m));
    auto grid = fourier_synthesize(modes, m);
    auto back = fourier_analyze(grid, n_f);
    CHECK((back.coeffs - modes.coeffs).cwiseAbs().maxCoeff() <= 1e-12 * modes.coeffs.cwiseAbs().maxCoeff());
    auto again = fourier_synthesize(back, m);
    CHECK((again - grid).cwiseAbs().maxCoeff() <= 1e-12 * grid.cwiseAbs().maxCoeff());
  }
  auto g = fourier_synthesize(random_modes(1, 3, 9), 8);
  auto one = fourier_synthesize(fourier_analyze(grid_of(1, 12, [](int, double) { return 2.0; }), 2), 12);
  CHECK((one.array() - 2.0).abs().maxCoeff() <= 1e-14);
  CHECK(g.allFinite());

  CHECK(default_m_theta(0) == 4);
  CHECK(default_m_theta(49) == 200);
  CHECK(default_m_theta(12) == 54);
}

TEST_CASE("truncation selection") {
  auto g3 = grid_of(5, 64, [](int i, double t) { return (1.0 + i) * std::cos(3 * t); });
  for (double eps : {1e-1, 1e-6, 1e-12}) CHECK(select_truncation(g3, eps).n_f == 3);
  CHECK(select_truncation(grid_of(3, 32, [](int, double) { return 4.0; }), 1e-12).n_f == 0);
  CHECK(select_truncation(GridField::Zero(2, 8), 1e-3).n_f == 0);
  CHECK_THROWS_AS(select_truncation(g3, 0.0), ConfigError);

  // Periodic bump exp((cos t - 1) / w^2) of width w needs more modes as w
  // shrinks or eps does.
  auto bump = [](double w) {
    return grid_of(1, 1024, [w](int, double t) { return std::exp((std::cos(t) - 1) / (w * w)); });
  };
  int last = -1;
  for (double w : {0.8, 0.4, 0.2, 0.1}) {
    const auto r = select_truncation(bump(w), 1e-8);
    CHECK(r.converged);
    CHECK(r.tail <= 1e-8);
    CHECK(r.n_f > last);
    // sqrt(2 log(1/eps)) / w, within a factor of two.
    const double predicted = std::sqrt(2 * std::log(1e8)) / w;
    CHECK(r.n_f > 0.5 * predicted);
    CHECK(r.n_f < 2.0 * predicted);
    last = r.n_f;
  }
  CHECK(select_truncation(bump(0.2), 1e-4).n_f < select_truncation(bump(0.2), 1e-12).n_f);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> u;
  GridField noise(2, 32);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 32; ++k) noise(i, k) = u(rng);
  const auto r = select_truncation(noise, 1e-12);
  CHECK(!r.converged);
  CHECK(r.n_f == 15);
}

TEST_CASE("identity systems") {
  std::vector<ModalSystem> sys(4);
  for (int n = 0; n < 4; ++n) sys[n] = {n, ModalMatrix::Zero(6, 6)};
  auto f = factorize(sys);
  CHECK(sys[0].matrix.size() == 0);
  auto rhs = random_modes(6, 3, 1);
  auto x = solve_all(f, rhs);
  CHECK(x.coeffs == rhs.coeffs);
  for (const auto& s : f) CHECK(s.rcond() == doctest::Approx(1.0));
}

TEST_CASE("sphere interior systems") {
  auto [disc, sys] = sphere_systems(5, 12);
  auto factors = factorize(sys, keep());
  REQUIRE(factors.size() == 13);
  std::vector<SingularValueExtremes> cond;
  for (const auto& s : sys) cond.push_back(singular_value_extremes(s));
  for (int n = 0; n <= 12; ++n) {
    CHECK(std::isfinite(factors[n].rcond()));
    CHECK(factors[n].rcond() > 1e-3);
    CHECK(std::isfinite(cond[n].cond()));
    CHECK(cond[n].cond() < 10.0);
  }
  CHECK(cond[12].cond() < cond[1].cond());
  for (int n = 3; n <= 12; ++n) CHECK(cond[n].cond() <= cond[n - 1].cond() * (1 + 1e-10));

  SUBCASE("per-mode residuals") {
    const int N = disc.size();
    auto rhs = random_modes(N, 12, 3);
    auto x = solve_all(factors, rhs);
    for (int n = -12; n <= 12; ++n) {
      const auto& A = sys[std::abs(n)].matrix;
      Eigen::VectorXcd r = x.mode(n) + (A.cast<std::complex<double>>() * x.mode(n)).eval() - rhs.mode(n);
      CHECK(r.norm() <= 1e-12 * rhs.mode(n).norm());
    }
  }

  SUBCASE("factor solve reproduces random vectors") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> u;
    for (int n : {0, 5, 12}) {
      Eigen::VectorXd v(disc.size());
      for (auto& e : v) e = u(rng);
      Eigen::VectorXd b = v + sys[n].matrix * v;
      CHECK((factors[n].solve(b) - v).norm() <= 1e-10 * v.norm());
    }
  }

  SUBCASE("modes never couple") {
    const int N = disc.size();
    for (int n : {0, 4, -7}) {
      FourierModes rhs(N, 12);
      rhs.mode(n) = random_modes(N, 0, 5).mode(0);
      auto x = solve_all(factors, rhs);
      for (int m = -12; m <= 12; ++m)
        if (m != n) CHECK(x.mode(m).cwiseAbs().maxCoeff() == 0.0);
      CHECK(x.mode(n).norm() > 0.0);
    }
    auto zero = solve_all(factors, FourierModes(N, 12));
    CHECK(zero.coeffs.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("reused factors equal fresh factorizations bit for bit") {
    const int N = disc.size();
    std::vector<FourierModes> rhs;
    for (unsigned k = 0; k < 4; ++k) rhs.push_back(random_modes(N, 12, 20 + k));
    std::vector<FourierModes> reused;
    for (const auto& r : rhs) reused.push_back(solve_all(factors, r));
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      auto copy = sys;
      auto fresh = factorize(copy);
      CHECK(solve_all(fresh, rhs[k]).coeffs == reused[k].coeffs);
    }
    Eigen::MatrixXd B(N, 3);
    B.setRandom();
    Eigen::MatrixXd X = factors[2].solve(B);
    for (int c = 0; c < 3; ++c) CHECK(X.col(c) == factors[2].solve(Eigen::VectorXd(B.col(c))));
  }

  SUBCASE("explicit inverse") {
    FactorOptions inv = keep();
    inv.explicit_inverse = true;
    auto fi = factorize(sys, inv);
    auto rhs = random_modes(disc.size(), 12, 6);
    auto a = solve_all(factors, rhs), b = solve_all(fi, rhs);
    CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() <= 1e-12 * a.coeffs.cwiseAbs().maxCoeff());
  }

  SUBCASE("mode mismatch") {
    CHECK_THROWS_AS(solve_all(factors, FourierModes(disc.size(), 13)), ConfigError);
    CHECK_THROWS_AS((void)factors[0].solve(Eigen::VectorXd(Eigen::VectorXd::Zero(3))), ConfigError);
  }
}

TEST_CASE("singular systems are reported with their mode") {
  std::vector<ModalSystem> sys(3);
  for (int n = 0; n < 3; ++n) sys[n] = {n, ModalMatrix::Zero(4, 4)};
  sys[2].matrix = -ModalMatrix::Identity(4, 4);
  try {
    (void)factorize(sys);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("n = 2") != std::string::npos);
  }
}

TEST_CASE("exterior system without the reference term is rank deficient at n = 0") {
  auto disc = build_discretization(curves::sphere(), 10);
  const Vec2 x0{0.0, 0.0};
  ScaledKernel with(std::make_shared<LaplaceExteriorKernel>(x0, true), -2.0);
  ScaledKernel without(std::make_shared<LaplaceExteriorKernel>(x0, false), -2.0);
  auto a = build_modal_systems(disc, with, 2);
  auto b = build_modal_systems(disc, without, 2);
  CHECK(singular_value_extremes(a[0]).cond() < 100.0);
  CHECK(singular_value_extremes(b[0]).cond() > 1e12);
  CHECK(singular_value_extremes(b[1]).cond() < 100.0);
}
