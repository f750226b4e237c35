#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace axibie {

enum class RuleKind { Gauss10, Singular20, Nearby24 };

/// A tabulated rule with the integrand class it is exact for.
///
///   Gauss10        on [-1, 1]: polynomials of degree <= 19.
///   Singular20(i)  on [-1, 1]: f + g log|x_i - x|, x_i the i-th Gauss node.
///   Nearby24(d)    on [0, 1]:  f + g log(x + xbar), xbar in the d-th decade
///                  bracket (d = 0: xbar >= 1e-1, d = k: [1e-(k+1), 1e-k]).
///
/// `nodes`/`weights` hold the table exactly as published. For Nearby24 the
/// table is expressed in the variable s = sqrt(x); `effective_nodes()` and
/// `effective_weights()` give the rule in x (x = s^2, w' = 2 s w), which is
/// what must be used for integration. For the other kinds they coincide with
/// the table.
struct QuadratureRule {
  RuleKind kind = RuleKind::Gauss10;
  int index = 0;  // Gauss node 1..10 or decade 0..13
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::vector<double> effective_nodes() const;
  [[nodiscard]] std::vector<double> effective_weights() const;
  [[nodiscard]] std::string name() const;
};

const QuadratureRule& gauss_rule();
/// Throws DomainError unless 1 <= i <= 10.
const QuadratureRule& singular_rule(int i);
/// Decade bracket index for xbar (total on [0, inf); edges go to the
/// lower-xbar table). Throws DomainError for negative or NaN xbar.
int nearby_decade(double xbar);
const QuadratureRule& nearby_rule(double xbar);
const QuadratureRule& nearby_rule_by_decade(int decade);

/// 64-bit FNV-1a over the little-endian IEEE-754 bytes of every (node,
/// weight) of the embedded tables in order Gauss, Singular x1..x10,
/// Nearby d=0..13.
std::uint64_t table_checksum();

/// Entry (l, j) = L_j(eval_points[l]) for the Lagrange basis on
/// source_nodes. Throws DomainError on duplicate source nodes.
Eigen::MatrixXd lagrange_matrix(std::span<const double> source_nodes, std::span<const double> eval_points);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // estimate of the integral of |f|
};

/// Adaptive Gauss-Kronrod (15-point) bisection with QUADPACK error scaling.
/// Succeeds when the estimated truncation error is at most
/// max(tol * |value|, abs_tol, 50 eps * l1); the reported error adds the
/// rounding term 50 eps * l1. `breaks` are interior points
/// where f may be singular (integrable) or non-smooth; the interval is split
/// there and no endpoint is ever evaluated. Throws NumericalError when the
/// estimate does not reach the tolerance within the depth limit.
AdaptiveResult adaptive_integrate_ex(const std::function<double(double)>& f, double a, double b, double tol,
                                     std::span<const double> breaks = {}, double abs_tol = 0.0);

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          std::span<const double> breaks = {});

/// Residual rows for the quad-check report: one per rule and test integrand.
struct RuleResidual {
  std::string rule;
  std::string integrand;
  double parameter = 0.0;  // xbar for nearby rules, node for singular rules
  double rule_value = 0.0;
  double reference = 0.0;
  double relative_error = 0.0;
};

/// Exactness residuals of every embedded rule on seeded random polynomial
/// (and polynomial-times-log) integrands of degree `degree`. References are
/// closed forms for the Gauss rule and the adaptive integrator otherwise.
std::vector<RuleResidual> quadrature_residuals(unsigned seed = 1, int degree = 19, int trials = 3);

}  // namespace axibie
