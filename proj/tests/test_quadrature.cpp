#include <doctest.h>

#include <axibie/error.hpp>
#include <axibie/quadrature.hpp>

#include "support/exact_integrals.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace axibie;

namespace {

std::vector<double> random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(degree + 1);
  for (auto& v : c) v = u(rng);
  return c;
}

double horner(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double apply(const QuadratureRule& rule, const std::function<double(double)>& f) {
  auto x = rule.effective_nodes();
  auto w = rule.effective_weights();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f(x[k]);
  return s;
}

}  // namespace

TEST_CASE("embedded tables") {
  CHECK(table_checksum() == 0x40a7ca126a12f036ull);

  const auto& g = gauss_rule();
  REQUIRE(g.nodes.size() == 10);
  CHECK(g.nodes[0] == -9.739065285171716e-01);
  CHECK(g.weights[0] == 6.667134430868814e-02);
  double wsum = 0.0;
  for (int i = 0; i < 10; ++i) {
    wsum += g.weights[i];
    CHECK(g.nodes[i] == -g.nodes[9 - i]);
  }
  CHECK(std::abs(wsum - 2.0) <= 1e-14);

  const auto& s1 = singular_rule(1);
  REQUIRE(s1.nodes.size() == 20);
  CHECK(s1.nodes[0] == -9.981629455677877e-01);
  CHECK(s1.weights[0] == 4.550772157144354e-03);

  const auto& n0 = nearby_rule(0.5);
  REQUIRE(n0.nodes.size() == 24);
  CHECK(n0.index == 0);
  CHECK(n0.nodes[0] == 3.916216329415252e-02);

  bool negative = false;
  for (double w : nearby_rule(5e-10).weights) negative |= (w == -7.773900735768282e-05);
  CHECK(negative);
}

TEST_CASE("singular rules mirror through the origin") {
  for (int i = 1; i <= 5; ++i) {
    const auto& a = singular_rule(i);
    const auto& b = singular_rule(11 - i);
    for (int k = 0; k < 20; ++k) {
      CHECK(b.nodes[k] == -a.nodes[19 - k]);
      CHECK(b.weights[k] == a.weights[19 - k]);
    }
  }
  CHECK_THROWS_AS(singular_rule(0), DomainError);
  CHECK_THROWS_AS(singular_rule(11), DomainError);
}

TEST_CASE("Gauss rule exactness") {
  const auto& g = gauss_rule();
  for (int k = 0; k <= 19; ++k) {
    std::vector<double> c(k + 1, 0.0);
    c[k] = 1.0;
    const double ref = exact::poly(c);
    CHECK(std::abs(apply(g, [&](double x) { return std::pow(x, k); }) - ref) <= 1e-14);
  }
  const double e = std::numbers::e;
  CHECK(std::abs(apply(g, [](double x) { return std::exp(x); }) - (e - 1 / e)) <= 1e-14);
}

TEST_CASE("singular rules integrate polynomial plus log|x_i - x| terms") {
  std::mt19937_64 rng(7);
  const auto& g = gauss_rule();
  for (int degree : {15, 19}) {
    for (int i = 1; i <= 10; ++i) {
      const double xi = g.nodes[i - 1];
      for (int trial = 0; trial < 4; ++trial) {
        auto p = random_poly(rng, degree), q = random_poly(rng, degree);
        auto f = [&](double x) { return horner(p, x) + horner(q, x) * std::log(std::abs(xi - x)); };
        const double value = apply(singular_rule(i), f);
        const double ref = exact::poly_log_abs(p, q, xi);
        CAPTURE(i);
        CAPTURE(degree);
        CHECK(rel(value, ref) <= 1e-11);
        const double breaks[] = {xi};
        const double adaptive = adaptive_integrate(f, -1.0, 1.0, 1e-12, breaks);
        CHECK(rel(value, adaptive) <= (degree == 15 ? 1e-12 : 1e-11));
      }
    }
  }
}

TEST_CASE("nearby rules integrate polynomial plus log(x + xbar) terms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d = 0; d <= 13; ++d) {
    for (int trial = 0; trial < 4; ++trial) {
      // Sample log-uniformly inside the bracket; d = 0 covers [0.1, 10].
      const double lo = d == 0 ? -1.0 : -(d + 1.0), hi = d == 0 ? 1.0 : -static_cast<double>(d);
      const double xbar = std::pow(10.0, lo + (hi - lo) * u(rng));
      REQUIRE(nearby_decade(xbar) == d);
      auto f = random_poly(rng, 19), gq = random_poly(rng, 19);
      auto fn = [&](double x) { return horner(f, x) + horner(gq, x) * std::log(x + xbar); };
      const double value = apply(nearby_rule(xbar), fn);
      CAPTURE(d);
      CAPTURE(xbar);
      CHECK(rel(value, exact::poly_log_shift(f, gq, xbar)) <= 1e-10);
    }
  }
}

TEST_CASE("nearby rule selection") {
  CHECK(nearby_decade(0.5) == 0);
  CHECK(nearby_decade(0.1) == 1);
  CHECK(nearby_decade(5e-3) == 2);
  CHECK(nearby_decade(1e-2) == 2);
  CHECK(nearby_decade(1e-14) == 13);
  CHECK(nearby_decade(1e-20) == 13);
  CHECK(nearby_decade(0.0) == 13);
  CHECK(nearby_decade(1e6) == 0);
  CHECK_THROWS_AS(nearby_decade(-1e-3), DomainError);
  CHECK_THROWS_AS(nearby_decade(std::nan("")), DomainError);
  // Monotone in xbar across the whole range.
  int last = 13;
  for (double e = -16.0; e <= 2.0; e += 0.01) {
    const int d = nearby_decade(std::pow(10.0, e));
    CHECK(d <= last);
    last = d;
  }
}

TEST_CASE("nearby rule on a shifted logarithm") {
  const double xbar = 1e-5;
  CHECK(nearby_rule(xbar).index == 5);
  auto f = [&](double x) { return 1.0 + std::log(x + xbar); };
  const double value = apply(nearby_rule(xbar), f);
  CHECK(rel(value, adaptive_integrate(f, 0.0, 1.0, 1e-13)) <= 1e-11);
  CHECK(rel(value, exact::poly_log_shift({1.0}, {1.0}, xbar)) <= 1e-11);
}

TEST_CASE("adaptive integration") {
  CHECK(std::abs(adaptive_integrate([](double) { return 1.0; }, 0.0, 1.0, 1e-12) - 1.0) <= 1e-14);
  const double zero[] = {0.0};
  CHECK(std::abs(adaptive_integrate([](double x) { return std::log(std::abs(x)); }, -1.0, 1.0, 1e-12, zero) + 2.0) <=
        1e-12 * 2.0);

  auto f = [](double t) { return std::cos(3 * t) / std::sqrt(2 - std::cos(t)); };
  const int M = 4096;
  double trap = 0.0;
  for (int m = 0; m < M; ++m) trap += f(2 * std::numbers::pi * m / M);
  trap *= 2 * std::numbers::pi / M;
  CHECK(rel(adaptive_integrate(f, 0.0, 2 * std::numbers::pi, 1e-13), trap) <= 1e-12);

  auto r = adaptive_integrate_ex([](double x) { return x * x; }, 0.0, 3.0, 1e-12);
  CHECK(r.value == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(r.error <= 1e-11 * 9.0);

  CHECK_THROWS_AS(adaptive_integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12), NumericalError);
  CHECK_THROWS_AS(adaptive_integrate([](double x) { return std::sin(1.0 / x); }, 0.0, 1.0, 1e-15), NumericalError);
}

TEST_CASE("Lagrange interpolation matrix") {
  const auto& g = gauss_rule();
  auto id = lagrange_matrix(g.nodes, g.nodes);
  CHECK((id - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-14);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> pts(24);
  for (auto& x : pts) x = u(rng);
  auto L = lagrange_matrix(g.nodes, pts);
  Eigen::VectorXd f9(10), fe(10);
  for (int j = 0; j < 10; ++j) {
    f9[j] = std::pow(g.nodes[j], 9);
    fe[j] = std::exp(g.nodes[j]);
  }
  Eigen::VectorXd i9 = L * f9, ie = L * fe;

  // |e^x - p(x)| <= max|f^(10)| / 10! * max|prod (x - x_j)| = e 2^10 10! / 20! on Gauss nodes.
  double bound = std::numbers::e * 1024.0;
  for (int k = 11; k <= 20; ++k) bound /= k;
  for (int l = 0; l < 24; ++l) {
    CHECK(std::abs(i9[l] - std::pow(pts[l], 9)) <= 1e-12);
    CHECK(std::abs(L.row(l).sum() - 1.0) <= 1e-12);
    CHECK(std::abs(ie[l] - std::exp(pts[l])) <= bound);
  }

  std::vector<double> dup = {0.0, 0.5, 0.5};
  CHECK_THROWS_AS(lagrange_matrix(dup, pts), DomainError);
}

TEST_CASE("residual report") {
  auto rows = quadrature_residuals(1);
  CHECK(rows.size() == 1 + 3 + 10 * 3 + 14 * 3);
  for (const auto& r : rows) {
    CAPTURE(r.rule);
    CHECK(std::isfinite(r.relative_error));
    CHECK(r.relative_error <= 1e-10);
  }
  auto again = quadrature_residuals(1);
  REQUIRE(again.size() == rows.size());
  CHECK(again.front().rule_value == rows.front().rule_value);
}
