#pragma once

#include <span>
#include <vector>

#include "axibie/geometry.hpp"
#include "axibie/solver.hpp"

namespace axibie {

/// Interior: Dirichlet problem inside the surface. Exterior: outside.
enum class ProblemType { Interior, Exterior };

struct PointCharge {
  Vec3 location{0.0, 0.0, 0.0};
  double strength = 1.0;
};

/// sum_k q_k / (4 pi |x - y_k|). Throws DomainError at a charge location.
double point_charge_potential(std::span<const PointCharge> charges, Vec3 x);

/// Seeded charges on the side opposite the problem domain: a sphere of
/// radius 2 R_b for interior problems; for exterior problems a sphere of
/// radius 0.5 R_b (open curves) or the cross-section shrunk by half about its
/// centroid (closed curves). R_b is the bounding radius. Every charge is
/// checked against the curve; strengths are uniform in [-1, 1] away from 0.
std::vector<PointCharge> random_charges(const GeneratingCurve& curve, ProblemType type, int count = 3,
                                        unsigned seed = 1);

/// Deterministic evaluation points inside the problem domain: a Fibonacci
/// sphere of radius 0.5 R_b (interior, open curves), the half-size
/// cross-section swept around the axis (interior, closed curves), or a
/// Fibonacci sphere of radius 2 R_b (exterior).
std::vector<Vec3> evaluation_targets(const GeneratingCurve& curve, ProblemType type, int count = 50);

/// Interior reference point for the exterior formulation: on the axis at the
/// centroid height for open curves, the cross-section centroid for closed
/// ones. Throws ConfigError if it is not inside the curve.
Vec2 default_reference_point(const GeneratingCurve& curve);

/// Samples of the point-charge potential on the node x theta grid.
GridField boundary_data(const Discretization& disc, std::span<const PointCharge> charges, int m_theta);

/// Distance in the (r, z) half-plane from x to the generating curve, in
/// panel lengths.
double clearance_in_panels(const Discretization& disc, Vec3 x);

/// Double-layer potential of a density sampled on the node x theta grid,
/// by panel Gauss quadrature along the curve and the trapezoid rule in theta.
/// Interior:  u(x) = int n' . (x - x') / (4 pi |x - x'|^3) sigma dA'.
/// Exterior:  u(x) = int (-n' . (x - x') / (4 pi |x - x'|^3) + 1 / (4 pi |x - x0(theta')|)) sigma dA',
/// with x0(theta') the reference ring point at the source azimuth.
/// Accuracy needs a clearance of about one panel length or more.
double eval_double_layer_potential(const GridField& sigma, const Discretization& disc, ProblemType type,
                                   Vec3 x, Vec2 x0 = {0.0, 0.0});

/// ||u_num - u_exact||_inf / ||u_exact||_inf. Throws DomainError on length
/// mismatch or zero exact norm.
double relative_linf_error(std::span<const double> u_num, std::span<const double> u_exact);

}  // namespace axibie
