#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace axibie {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

/// Point on the generating curve in the (r, z) half-plane with its outward
/// unit normal. `jacobian` is |dtau/ds|, identically 1 for the arc-length
/// parameterizations produced here.
struct CurvePoint {
  double r = 0.0;
  double z = 0.0;
  double nr = 0.0;
  double nz = 0.0;
  double jacobian = 1.0;
};

/// Closed: a loop in r > 0 sweeping a torus-like surface.
/// Open: both endpoints on the axis (r = 0), sweeping a sphere-like surface.
enum class Topology { Closed, Open };

/// Raw parameterization phi in [0, phi_max] -> (r, z). Need not be arc length.
struct ParametricCurve {
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> derivative;
  double phi_max = 0.0;
  Topology topology = Topology::Closed;
  /// Set when |derivative| is a known constant; the arc-length map is then
  /// phi = t / constant_speed exactly.
  double constant_speed = 0.0;
  /// Interior parameters where the curve is only piecewise smooth (spline
  /// knots); the arc-length quadrature never straddles them.
  std::vector<double> knots;
};

/// A smooth generating curve re-parameterized by arc length t in [0, T].
///
/// Immutable after construction. The outward normal is the unit tangent
/// rotated by -pi/2 or +pi/2, whichever points out of the region enclosed by
/// the curve (closed along the axis for open curves).
class GeneratingCurve {
 public:
  /// Builds the arc-length map by adaptive quadrature of |d gamma/d phi| to
  /// relative tolerance `tol`. Validates topology (open endpoints on the axis
  /// to 1e-10, closed curves periodic) and r >= 0.
  explicit GeneratingCurve(ParametricCurve curve, double tol = 1e-12);

  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] Topology topology() const noexcept { return param_.topology; }

  /// Position, outward normal and jacobian at arc length t. Throws
  /// DomainError for t outside [0, T].
  [[nodiscard]] CurvePoint eval(double t) const;
  [[nodiscard]] Vec2 position(double t) const;
  /// Unit tangent d(r, z)/dt.
  [[nodiscard]] Vec2 tangent(double t) const;

  /// Raw parameter phi corresponding to arc length t.
  [[nodiscard]] double parameter_at(double t) const;

  /// True when (r, z) lies strictly inside the region bounded by the curve
  /// (plus the axis segment for open curves). Polyline test; not meant for
  /// points within ~1e-6 of the curve.
  [[nodiscard]] bool contains(double r, double z) const;
  /// max |(r, z)| over the curve.
  [[nodiscard]] double bounding_radius() const noexcept { return bounding_radius_; }
  /// Area centroid of the enclosed (r, z) region.
  [[nodiscard]] Vec2 centroid() const noexcept { return centroid_; }
  /// Distance in the (r, z) half-plane from a point to the curve (polyline).
  [[nodiscard]] double distance_to(double r, double z) const;

 private:
  [[nodiscard]] double arc_length_between(double phi0, double phi1) const;
  [[nodiscard]] double speed(double phi) const;

  ParametricCurve param_;
  double length_ = 0.0;
  double orientation_ = 1.0;  // +1: normal = tangent rotated by -pi/2
  std::vector<double> phi_breaks_;
  std::vector<double> s_breaks_;
  std::vector<Vec2> polyline_;
  double bounding_radius_ = 0.0;
  Vec2 centroid_{0.0, 0.0};
};

using CurvePtr = std::shared_ptr<const GeneratingCurve>;

/// Built-in generating curves.
namespace curves {

/// gamma(t) = (R sin(t/R), R cos(t/R)), t in [0, pi R]; open.
CurvePtr sphere(double radius = 1.0);

/// Closed cross-section (R + a(phi) cos phi, a(phi) sin phi) with
/// a(phi) = a0 (1 + amplitude cos(lobes phi)). amplitude = 0 gives a plain
/// torus.
CurvePtr starfish_torus(double major_radius = 2.0, double minor_radius = 0.5,
                        double amplitude = 0.2, int lobes = 5);

/// Open profile rho(phi) (sin phi, cos phi), phi in [0, pi], with a rounded
/// block rho0 = (cos^4 + sin^4)^(-1/4) modulated by 1 + amplitude cos(waves phi).
CurvePtr wavy_block(double amplitude = 0.05, int waves = 10);

/// Interpolating cubic spline through (r, z) samples, parameterized by chord
/// length then re-parameterized by arc length. If the first and last samples
/// coincide the spline is periodic (closed curve); otherwise both endpoints
/// must be on the axis (|r| <= 1e-10) and the spline is clamped with a
/// tangent perpendicular to the axis.
CurvePtr spline(const std::vector<Vec2>& samples);

/// Reads one "r z" pair per line ('#' comments and blank lines skipped).
/// Throws ConfigError naming the path on any failure.
CurvePtr load_samples(const std::string& path);

/// Built-in lookup by name: "sphere", "torus", "starfish_torus", "wavy_block".
/// Missing parameters take the defaults above.
CurvePtr builtin(const std::string& name, std::span<const double> params);

}  // namespace curves

struct Panel {
  double start = 0.0;
  double end = 0.0;
};

/// N_P equal arc-length panels, each with the 10-point Gauss-Legendre rule.
/// Node ordering is panel-major: index = p * N_G + i.
class Discretization {
 public:
  Discretization(CurvePtr curve, int n_panels, int n_gauss = 10);

  [[nodiscard]] const GeneratingCurve& curve() const noexcept { return *curve_; }
  [[nodiscard]] const CurvePtr& curve_ptr() const noexcept { return curve_; }
  [[nodiscard]] int panel_count() const noexcept { return n_panels_; }
  [[nodiscard]] int nodes_per_panel() const noexcept { return n_gauss_; }
  [[nodiscard]] int size() const noexcept { return n_panels_ * n_gauss_; }
  [[nodiscard]] double panel_length() const noexcept { return h_; }
  [[nodiscard]] Panel panel(int p) const;

  [[nodiscard]] std::span<const double> params() const noexcept { return params_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<const CurvePoint> points() const noexcept { return points_; }
  [[nodiscard]] const CurvePoint& point(int node) const { return points_.at(node); }

  /// Panels sharing an endpoint, including wrap-around for closed curves.
  [[nodiscard]] bool adjacent(int p, int q) const noexcept;
  /// The panel after / before p, or -1 at an open end.
  [[nodiscard]] int next_panel(int p) const noexcept;
  [[nodiscard]] int previous_panel(int p) const noexcept;

 private:
  CurvePtr curve_;
  int n_panels_;
  int n_gauss_;
  double h_;
  std::vector<double> params_;
  std::vector<double> weights_;
  std::vector<CurvePoint> points_;
};

Discretization build_discretization(CurvePtr curve, int n_panels, int n_gauss = 10);

/// Cylindrical (r, z, theta) to Cartesian.
Vec3 surface_point(double r, double z, double theta);

}  // namespace axibie
