#include "axibie/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cstdio>
#include <optional>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "axibie/error.hpp"
#include "rule_tables.hpp"

namespace axibie {

namespace {

template <std::size_t N>
QuadratureRule make_rule(RuleKind kind, int index, const std::array<tables::NodeWeight, N>& table) {
  QuadratureRule r;
  r.kind = kind;
  r.index = index;
  for (const auto& nw : table) {
    r.nodes.push_back(nw.node);
    r.weights.push_back(nw.weight);
  }
  return r;
}

struct RuleSet {
  QuadratureRule gauss;
  std::vector<QuadratureRule> singular;
  std::vector<QuadratureRule> nearby;

  RuleSet() {
    gauss = make_rule(RuleKind::Gauss10, 0, tables::kGauss10);
    for (int i = 0; i < 10; ++i) singular.push_back(make_rule(RuleKind::Singular20, i + 1, tables::kSingular20[i]));
    for (int d = 0; d < 14; ++d) nearby.push_back(make_rule(RuleKind::Nearby24, d, tables::kNearby24[d]));
  }
};

const RuleSet& rules() {
  static const RuleSet set;
  return set;
}

constexpr std::array<double, 15> kDecadeEdges{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8,
                                              1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14, 1e-15};

}  // namespace

std::vector<double> QuadratureRule::effective_nodes() const {
  if (kind != RuleKind::Nearby24) return nodes;
  std::vector<double> out(nodes.size());
  std::transform(nodes.begin(), nodes.end(), out.begin(), [](double s) { return s * s; });
  return out;
}

std::vector<double> QuadratureRule::effective_weights() const {
  if (kind != RuleKind::Nearby24) return weights;
  std::vector<double> out(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) out[k] = 2.0 * nodes[k] * weights[k];
  return out;
}

std::string QuadratureRule::name() const {
  switch (kind) {
    case RuleKind::Gauss10:
      return "gauss10";
    case RuleKind::Singular20:
      return "singular20_x" + std::to_string(index);
    case RuleKind::Nearby24:
      return "nearby24_d" + std::to_string(index);
  }
  return "unknown";
}

const QuadratureRule& gauss_rule() { return rules().gauss; }

const QuadratureRule& singular_rule(int i) {
  if (i < 1 || i > 10) throw DomainError("singular rule index must be in 1..10");
  return rules().singular[i - 1];
}

int nearby_decade(double xbar) {
  if (!(xbar >= 0.0)) throw DomainError("nearby rule: separation must be nonnegative");
  if (xbar > kDecadeEdges[0]) return 0;
  for (int k = 1; k < 14; ++k)
    if (xbar > kDecadeEdges[k]) return k;
  return 13;
}

const QuadratureRule& nearby_rule(double xbar) { return rules().nearby[nearby_decade(xbar)]; }

const QuadratureRule& nearby_rule_by_decade(int decade) {
  if (decade < 0 || decade > 13) throw DomainError("nearby rule decade must be in 0..13");
  return rules().nearby[decade];
}

std::uint64_t table_checksum() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_table = [&](const auto& table) {
    for (const auto& nw : table) {
      mix(nw.node);
      mix(nw.weight);
    }
  };
  mix_table(tables::kGauss10);
  for (const auto& t : tables::kSingular20) mix_table(t);
  for (const auto& t : tables::kNearby24) mix_table(t);
  return h;
}

Eigen::MatrixXd lagrange_matrix(std::span<const double> source_nodes, std::span<const double> eval_points) {
  const auto n = static_cast<Eigen::Index>(source_nodes.size());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k)
      if (source_nodes[j] == source_nodes[k]) throw DomainError("lagrange_matrix: duplicate source nodes");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(eval_points.size()), n);
  for (Eigen::Index l = 0; l < out.rows(); ++l) {
    const double x = eval_points[l];
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = 1.0;
      for (Eigen::Index k = 0; k < n; ++k)
        if (k != j) v *= (x - source_nodes[k]) / (source_nodes[j] - source_nodes[k]);
      out(l, j) = v;
    }
  }
  return out;
}

namespace {

struct Segment {
  double a, b, value, error, l1;
  int depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b, int depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& x = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  // x[0] = 0; odd entries are Kronrod-only, even entries are Gauss nodes.
  std::array<double, 15> fv;
  fv[0] = f(c);
  for (std::size_t i = 1; i < x.size(); ++i) {
    fv[2 * i - 1] = f(c + h * x[i]);
    fv[2 * i] = f(c - h * x[i]);
  }
  double k = wk[0] * fv[0], g = wg[0] * fv[0], l1 = wk[0] * std::abs(fv[0]);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = fv[2 * i - 1], fm = fv[2 * i];
    k += wk[i] * (fp + fm);
    l1 += wk[i] * (std::abs(fp) + std::abs(fm));
    if (i % 2 == 0) g += wg[i / 2] * (fp + fm);
  }
  const double mean = 0.5 * k;
  double asc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < x.size(); ++i)
    asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  const double ah = std::abs(h);
  l1 *= ah;
  asc *= ah;
  // QUADPACK qk15 scaling; the rounding floor is added once the sum is formed.
  double err = std::abs((k - g) * h);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {a, b, k * h, err, l1, depth};
}

}  // namespace

AdaptiveResult adaptive_integrate_ex(const std::function<double(double)>& f, double a, double b, double tol,
                                     std::span<const double> breaks, double abs_tol) {
  if (!(tol > 0.0) && !(abs_tol > 0.0)) throw DomainError("adaptive_integrate: tolerance must be positive");
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > std::min(a, b) && x < std::max(a, b)) pts.push_back(x);
  pts.push_back(b);
  if (b < a)
    std::sort(pts.begin() + 1, pts.end() - 1, std::greater<>());
  else
    std::sort(pts.begin() + 1, pts.end() - 1);

  std::vector<Segment> heap;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    if (pts[k] != pts[k + 1]) heap.push_back(kronrod15(f, pts[k], pts[k + 1], 0));
  std::make_heap(heap.begin(), heap.end());
  constexpr int kMaxDepth = 60;
  constexpr int kMaxSegments = 20000;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<Segment> retired;
  double value = 0.0, error = 0.0, l1 = 0.0;
  // Sorted by error so the large contributions are added last.
  auto resum = [&] {
    std::vector<Segment> all(heap);
    all.insert(all.end(), retired.begin(), retired.end());
    std::sort(all.begin(), all.end());
    value = error = l1 = 0.0;
    for (const auto& s : all) {
      value += s.value;
      error += s.error;
      l1 += s.l1;
    }
  };
  // Tolerances below the rounding level of the sum are met at that level.
  auto target = [&] { return std::max({tol * std::abs(value), abs_tol, 50.0 * eps * l1}); };
  auto full = [&] { return static_cast<int>(heap.size() + retired.size()) >= kMaxSegments; };
  resum();
  while (error > target() && !heap.empty() && !full()) {
    while (error > target() && !heap.empty() && !full()) {
      std::pop_heap(heap.begin(), heap.end());
      const Segment s = heap.back();
      heap.pop_back();
      const double width = std::abs(s.b - s.a);
      if (s.depth >= kMaxDepth || width <= 256 * eps * std::max(std::abs(s.a), std::abs(s.b))) {
        retired.push_back(s);
        continue;
      }
      const double m = 0.5 * (s.a + s.b);
      for (const Segment& half : {kronrod15(f, s.a, m, s.depth + 1), kronrod15(f, m, s.b, s.depth + 1)}) {
        value += half.value;
        error += half.error;
        l1 += half.l1;
        heap.push_back(half);
        std::push_heap(heap.begin(), heap.end());
      }
      value -= s.value;
      error -= s.error;
      l1 -= s.l1;
    }
    // The running updates drift; refine further if the exact sums say so.
    resum();
  }
  if (!std::isfinite(value) || error > target()) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "adaptive_integrate: no convergence (estimated error %.3g, value %.17g)", error,
                  value);
    throw NumericalError(msg);
  }
  return {value, error + 50.0 * eps * l1, l1};
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          std::span<const double> breaks) {
  return adaptive_integrate_ex(f, a, b, tol, breaks).value;
}

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

template <class Rng>
std::vector<double> random_poly(Rng& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(degree + 1);
  for (auto& v : c) v = u(rng);
  c[0] += 2.0;
  return c;
}

double rule_sum(const QuadratureRule& rule, const std::function<double(double)>& f) {
  const auto x = rule.effective_nodes();
  const auto w = rule.effective_weights();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f(x[k]);
  return s;
}

RuleResidual residual(const QuadratureRule& rule, const std::string& integrand, double parameter,
                      const std::function<double(double)>& f, double a, double b,
                      std::span<const double> breaks, std::optional<double> exact = std::nullopt) {
  RuleResidual r;
  r.rule = rule.name();
  r.integrand = integrand;
  r.parameter = parameter;
  r.rule_value = rule_sum(rule, f);
  r.reference = exact ? *exact : adaptive_integrate(f, a, b, 1e-12, breaks);
  r.relative_error = std::abs(r.rule_value - r.reference) / std::abs(r.reference);
  return r;
}

}  // namespace

std::vector<RuleResidual> quadrature_residuals(unsigned seed, int degree, int trials) {
  std::mt19937_64 rng(seed);
  std::vector<RuleResidual> out;
  const auto& g = gauss_rule();
  out.push_back(residual(g, "exp", 0.0, [](double x) { return std::exp(x); }, -1.0, 1.0, {},
                         2.0 * std::sinh(1.0)));
  for (int t = 0; t < trials; ++t) {
    auto p = random_poly(rng, degree);
    long double exact = 0.0L;
    for (std::size_t j = 0; j < p.size(); j += 2) exact += 2.0L * p[j] / static_cast<long double>(j + 1);
    out.push_back(residual(g, "poly", 0.0, [&](double x) { return horner(p, x); }, -1.0, 1.0, {},
                           static_cast<double>(exact)));
  }
  for (int i = 1; i <= 10; ++i) {
    const auto& rule = singular_rule(i);
    const double xi = g.nodes[i - 1];
    const double brk[] = {xi};
    for (int t = 0; t < trials; ++t) {
      auto p = random_poly(rng, degree);
      auto q = random_poly(rng, degree);
      out.push_back(residual(
          rule, "poly+poly*log|xi-x|", xi,
          [&](double x) { return horner(p, x) + horner(q, x) * std::log(std::abs(xi - x)); }, -1.0, 1.0, brk));
    }
  }
  for (int d = 0; d < 14; ++d) {
    const auto& rule = nearby_rule_by_decade(d);
    const double hi = d == 0 ? 10.0 : kDecadeEdges[d - 1];
    const double lo = kDecadeEdges[d];
    for (double xbar : {lo, std::sqrt(lo * hi), hi}) {
      auto p = random_poly(rng, degree);
      auto q = random_poly(rng, degree);
      out.push_back(residual(
          rule, "poly+poly*log(x+xbar)", xbar,
          [&](double x) { return horner(p, x) + horner(q, x) * std::log(x + xbar); }, 0.0, 1.0, {}));
    }
  }
  return out;
}

}  // namespace axibie
