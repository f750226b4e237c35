#include "axibie/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "axibie/error.hpp"

namespace axibie {

namespace {

constexpr double kPi = std::numbers::pi;

double dist(Vec3 a, Vec3 b) { return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2])); }

bool inside(const GeneratingCurve& curve, Vec3 x) { return curve.contains(std::hypot(x[0], x[1]), x[2]); }

// Cross-section point shrunk toward the centroid.
Vec2 shrunk(const GeneratingCurve& curve, double t, double factor) {
  const Vec2 c = curve.centroid();
  const Vec2 p = curve.position(t);
  return {c[0] + factor * (p[0] - c[0]), c[1] + factor * (p[1] - c[1])};
}

}  // namespace

double point_charge_potential(std::span<const PointCharge> charges, Vec3 x) {
  double u = 0.0;
  for (const auto& c : charges) {
    const double d = dist(x, c.location);
    if (!(d > 0.0)) throw DomainError("point_charge_potential: evaluation point coincides with a charge");
    u += c.strength / (4.0 * kPi * d);
  }
  return u;
}

std::vector<PointCharge> random_charges(const GeneratingCurve& curve, ProblemType type, int count, unsigned seed) {
  if (count < 1) throw ConfigError("random_charges: need at least one charge");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rb = curve.bounding_radius();
  std::vector<PointCharge> out;
  for (int k = 0; k < count; ++k) {
    const double q = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 0.8 * unit(rng));
    Vec3 x{};
    if (type == ProblemType::Interior || curve.topology() == Topology::Open) {
      Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
      const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      const double radius = type == ProblemType::Interior ? 2.0 * rb : 0.5 * rb;
      for (int c = 0; c < 3; ++c) x[c] = radius * d[c] / len;
    } else {
      const Vec2 p = shrunk(curve, unit(rng) * curve.length(), 0.5);
      x = surface_point(p[0], p[1], 2.0 * kPi * unit(rng));
    }
    const bool ok = type == ProblemType::Interior ? !inside(curve, x) : inside(curve, x);
    if (!ok) throw ConfigError("random_charges: charge placement failed for this curve");
    out.push_back({x, q});
  }
  return out;
}

std::vector<Vec3> evaluation_targets(const GeneratingCurve& curve, ProblemType type, int count) {
  if (count < 1) throw ConfigError("evaluation_targets: need at least one target");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double rb = curve.bounding_radius();
  std::vector<Vec3> out;
  for (int k = 0; k < count; ++k) {
    Vec3 x{};
    if (type == ProblemType::Interior && curve.topology() == Topology::Closed) {
      const Vec2 p = shrunk(curve, curve.length() * (k + 0.5) / count, 0.5);
      x = surface_point(p[0], p[1], golden * k);
    } else {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double radius = type == ProblemType::Interior ? 0.5 * rb : 2.0 * rb;
      x = {radius * rho * std::cos(golden * k), radius * rho * std::sin(golden * k), radius * z};
    }
    const bool ok = type == ProblemType::Interior ? inside(curve, x) : !inside(curve, x);
    if (!ok) throw ConfigError("evaluation_targets: target placement failed for this curve");
    out.push_back(x);
  }
  return out;
}

Vec2 default_reference_point(const GeneratingCurve& curve) {
  const Vec2 c = curve.centroid();
  if (curve.topology() == Topology::Open) {
    if (!curve.contains(1e-6 * curve.bounding_radius(), c[1]))
      throw ConfigError("reference point on the axis at the centroid height is not inside the curve");
    return {0.0, c[1]};
  }
  if (!curve.contains(c[0], c[1])) throw ConfigError("cross-section centroid is not inside the curve");
  return c;
}

GridField boundary_data(const Discretization& disc, std::span<const PointCharge> charges, int m_theta) {
  GridField f(disc.size(), m_theta);
  for (int i = 0; i < disc.size(); ++i) {
    const CurvePoint& p = disc.point(i);
    for (int m = 0; m < m_theta; ++m)
      f(i, m) = point_charge_potential(charges, surface_point(p.r, p.z, 2.0 * kPi * m / m_theta));
  }
  return f;
}

double clearance_in_panels(const Discretization& disc, Vec3 x) {
  return disc.curve().distance_to(std::hypot(x[0], x[1]), x[2]) / disc.panel_length();
}

double eval_double_layer_potential(const GridField& sigma, const Discretization& disc, ProblemType type, Vec3 x,
                                   Vec2 x0) {
  if (sigma.rows() != disc.size()) throw ConfigError("eval_double_layer_potential: density size mismatch");
  const int m_theta = static_cast<int>(sigma.cols());
  std::vector<double> c(m_theta), s(m_theta);
  for (int m = 0; m < m_theta; ++m) {
    c[m] = std::cos(2.0 * kPi * m / m_theta);
    s[m] = std::sin(2.0 * kPi * m / m_theta);
  }
  const double dtheta = 2.0 * kPi / m_theta;
  const auto w = disc.weights();
  const double sign = type == ProblemType::Interior ? 1.0 : -1.0;
  double u = 0.0;
  for (int j = 0; j < disc.size(); ++j) {
    const CurvePoint& p = disc.point(j);
    double row = 0.0;
    for (int m = 0; m < m_theta; ++m) {
      const double dx = x[0] - p.r * c[m];
      const double dy = x[1] - p.r * s[m];
      const double dz = x[2] - p.z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      const double ndot = p.nr * (c[m] * dx + s[m] * dy) + p.nz * dz;
      double k = sign * ndot / (4.0 * kPi * d2 * std::sqrt(d2));
      if (type == ProblemType::Exterior) {
        const double ex = x[0] - x0[0] * c[m];
        const double ey = x[1] - x0[0] * s[m];
        const double ez = x[2] - x0[1];
        k += 1.0 / (4.0 * kPi * std::sqrt(ex * ex + ey * ey + ez * ez));
      }
      row += k * sigma(j, m);
    }
    u += w[j] * p.r * p.jacobian * dtheta * row;
  }
  return u;
}

double relative_linf_error(std::span<const double> u_num, std::span<const double> u_exact) {
  if (u_num.size() != u_exact.size()) throw DomainError("relative_linf_error: length mismatch");
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < u_num.size(); ++k) {
    err = std::max(err, std::abs(u_num[k] - u_exact[k]));
    ref = std::max(ref, std::abs(u_exact[k]));
  }
  if (!(ref > 0.0)) throw DomainError("relative_linf_error: exact values are all zero");
  return err / ref;
}

}  // namespace axibie
