#include "axibie/geometry.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "axibie/error.hpp"
#include "rule_tables.hpp"

namespace axibie {

namespace {

constexpr double kPi = std::numbers::pi;

// Forward-mode dual number; enough to differentiate the built-in profiles.
struct Dual {
  double v;
  double d;
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator+(double a, Dual b) { return {a + b.v, b.d}; }
Dual operator*(double a, Dual b) { return {a * b.v, a * b.d}; }
Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
Dual pow(Dual a, double p) { return {std::pow(a.v, p), p * std::pow(a.v, p - 1.0) * a.d}; }
using std::cos;
using std::pow;
using std::sin;

template <class F>
ParametricCurve from_profile(F profile, double phi_max, Topology topology) {
  ParametricCurve c;
  c.position = [profile](double phi) {
    auto p = profile(phi);
    return Vec2{p[0], p[1]};
  };
  c.derivative = [profile](double phi) {
    auto p = profile(Dual{phi, 1.0});
    return Vec2{p[0].d, p[1].d};
  };
  c.phi_max = phi_max;
  c.topology = topology;
  return c;
}

double gauss10(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (const auto& nw : tables::kGauss10) sum += nw.weight * f(c + h * nw.node);
  return sum * h;
}

double norm(Vec2 v) { return std::hypot(v[0], v[1]); }

}  // namespace

GeneratingCurve::GeneratingCurve(ParametricCurve curve, double tol) : param_(std::move(curve)) {
  if (!param_.position || !param_.derivative || !(param_.phi_max > 0.0))
    throw ConfigError("generating curve: incomplete parameterization");

  std::vector<double> seeds{0.0};
  for (double k : param_.knots)
    if (k > 0.0 && k < param_.phi_max) seeds.push_back(k);
  seeds.push_back(param_.phi_max);
  std::sort(seeds.begin(), seeds.end());

  phi_breaks_ = {0.0};
  s_breaks_ = {0.0};
  if (param_.constant_speed > 0.0) {
    length_ = param_.constant_speed * param_.phi_max;
  } else {
    auto sp = [this](double phi) { return speed(phi); };
    // Rough scale for the absolute tolerance.
    double scale = 0.0;
    for (std::size_t k = 0; k + 1 < seeds.size(); ++k) scale += gauss10(sp, seeds[k], seeds[k + 1]);
    const double abs_tol = tol * std::max(scale, 1e-300);
    struct Seg {
      double a, b, whole;
      int depth;
    };
    for (std::size_t k = 0; k + 1 < seeds.size(); ++k) {
      const int initial = 16;
      for (int j = 0; j < initial; ++j) {
        const double a = seeds[k] + (seeds[k + 1] - seeds[k]) * j / initial;
        const double b = seeds[k] + (seeds[k + 1] - seeds[k]) * (j + 1) / initial;
        std::vector<Seg> stack{{a, b, gauss10(sp, a, b), 0}};
        while (!stack.empty()) {
          Seg s = stack.back();
          stack.pop_back();
          const double m = 0.5 * (s.a + s.b);
          const double left = gauss10(sp, s.a, m);
          const double right = gauss10(sp, m, s.b);
          const double len = (s.b - s.a) / param_.phi_max;
          if (std::abs(left + right - s.whole) <= abs_tol * len * 1e-2 || s.depth > 40) {
            if (s.depth > 40) throw NumericalError("generating curve: arc-length quadrature did not converge");
            phi_breaks_.push_back(m);
            s_breaks_.push_back(s_breaks_.back() + left);
            phi_breaks_.push_back(s.b);
            s_breaks_.push_back(s_breaks_.back() + right);
          } else {
            // Right half pushed first so segments come off in increasing order.
            stack.push_back({m, s.b, right, s.depth + 1});
            stack.push_back({s.a, m, left, s.depth + 1});
          }
        }
      }
    }
    length_ = s_breaks_.back();
  }
  if (!(length_ > 0.0)) throw ConfigError("generating curve: zero length");

  const Vec2 p0 = param_.position(0.0);
  const Vec2 p1 = param_.position(param_.phi_max);
  if (param_.topology == Topology::Closed) {
    const double gap = std::hypot(p0[0] - p1[0], p0[1] - p1[1]);
    if (gap > 1e-12 * std::max(1.0, length_))
      throw ConfigError("closed generating curve does not close (gap " + std::to_string(gap) + ")");
  } else if (std::abs(p0[0]) > 1e-10 || std::abs(p1[0]) > 1e-10) {
    throw ConfigError("open generating curve must start and end on the axis r = 0");
  }

  const int samples = 2048;
  polyline_.reserve(samples + 1);
  for (int k = 0; k <= samples; ++k) {
    Vec2 p = param_.position(param_.phi_max * k / samples);
    if (p[0] < -1e-10) throw ConfigError("generating curve crosses the axis (r < 0)");
    polyline_.push_back(p);
    bounding_radius_ = std::max(bounding_radius_, norm(p));
  }
  if (param_.topology == Topology::Closed) polyline_.back() = polyline_.front();

  // Signed area and centroid; open curves close along the axis, which adds no
  // cross term since r = 0 there.
  double area2 = 0.0, cr = 0.0, cz = 0.0;
  for (std::size_t k = 0; k + 1 < polyline_.size(); ++k) {
    const auto& a = polyline_[k];
    const auto& b = polyline_[k + 1];
    const double cross = a[0] * b[1] - b[0] * a[1];
    area2 += cross;
    cr += (a[0] + b[0]) * cross;
    cz += (a[1] + b[1]) * cross;
  }
  if (std::abs(area2) < 1e-14 * length_ * length_) throw ConfigError("generating curve encloses no area");
  orientation_ = area2 > 0.0 ? 1.0 : -1.0;
  centroid_ = {cr / (3.0 * area2), cz / (3.0 * area2)};
}

double GeneratingCurve::speed(double phi) const { return norm(param_.derivative(phi)); }

double GeneratingCurve::arc_length_between(double phi0, double phi1) const {
  return gauss10([this](double phi) { return speed(phi); }, phi0, phi1);
}

double GeneratingCurve::parameter_at(double t) const {
  if (!(t >= 0.0 && t <= length_)) throw DomainError("arc-length parameter outside [0, T]");
  if (param_.constant_speed > 0.0) return std::min(t / param_.constant_speed, param_.phi_max);
  if (t == length_) return param_.phi_max;

  const auto it = std::upper_bound(s_breaks_.begin(), s_breaks_.end(), t);
  const std::size_t k = std::min<std::size_t>(std::distance(s_breaks_.begin(), it), s_breaks_.size() - 1) - 1;
  const double a = phi_breaks_[k];
  const double b = phi_breaks_[k + 1];
  const double target = t - s_breaks_[k];
  const double seg = s_breaks_[k + 1] - s_breaks_[k];
  double phi = a + (b - a) * target / seg;
  for (int iter = 0; iter < 50; ++iter) {
    const double f = arc_length_between(a, phi) - target;
    const double step = f / speed(phi);
    phi = std::clamp(phi - step, a, b);
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(phi))) break;
  }
  return phi;
}

Vec2 GeneratingCurve::position(double t) const { return param_.position(parameter_at(t)); }

Vec2 GeneratingCurve::tangent(double t) const {
  const Vec2 d = param_.derivative(parameter_at(t));
  const double s = norm(d);
  return {d[0] / s, d[1] / s};
}

CurvePoint GeneratingCurve::eval(double t) const {
  const double phi = parameter_at(t);
  const Vec2 p = param_.position(phi);
  const Vec2 d = param_.derivative(phi);
  const double s = norm(d);
  CurvePoint out;
  out.r = std::max(p[0], 0.0);
  out.z = p[1];
  out.nr = orientation_ * d[1] / s;
  out.nz = -orientation_ * d[0] / s;
  out.jacobian = 1.0;
  return out;
}

bool GeneratingCurve::contains(double r, double z) const {
  bool inside = false;
  const std::size_t n = polyline_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = polyline_[k];
    const auto& b = polyline_[(k + 1) % n];
    if ((a[1] > z) != (b[1] > z)) {
      const double rc = a[0] + (z - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (r < rc) inside = !inside;
    }
  }
  return inside;
}

double GeneratingCurve::distance_to(double r, double z) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < polyline_.size(); ++k) {
    const auto& a = polyline_[k];
    const auto& b = polyline_[k + 1];
    const double dr = b[0] - a[0], dz = b[1] - a[1];
    const double len2 = dr * dr + dz * dz;
    double u = len2 > 0.0 ? ((r - a[0]) * dr + (z - a[1]) * dz) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    best = std::min(best, std::hypot(r - a[0] - u * dr, z - a[1] - u * dz));
  }
  return best;
}

namespace curves {

CurvePtr sphere(double radius) {
  if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
  ParametricCurve c;
  c.position = [radius](double phi) { return Vec2{radius * std::sin(phi), radius * std::cos(phi)}; };
  c.derivative = [radius](double phi) { return Vec2{radius * std::cos(phi), -radius * std::sin(phi)}; };
  c.phi_max = kPi;
  c.topology = Topology::Open;
  c.constant_speed = radius;
  return std::make_shared<const GeneratingCurve>(std::move(c));
}

CurvePtr starfish_torus(double major_radius, double minor_radius, double amplitude, int lobes) {
  if (!(minor_radius > 0.0) || !(major_radius - minor_radius * (1.0 + std::abs(amplitude)) > 0.0))
    throw ConfigError("starfish torus: cross-section must stay in r > 0");
  auto profile = [=](auto phi) {
    auto a = minor_radius * (1.0 + amplitude * cos(static_cast<double>(lobes) * phi));
    return std::array{major_radius + a * cos(phi), a * sin(phi)};
  };
  auto c = from_profile(profile, 2.0 * kPi, Topology::Closed);
  if (amplitude == 0.0) c.constant_speed = minor_radius;
  return std::make_shared<const GeneratingCurve>(std::move(c));
}

CurvePtr wavy_block(double amplitude, int waves) {
  if (std::abs(amplitude) >= 0.5) throw ConfigError("wavy block: amplitude must be below 0.5");
  auto profile = [=](auto phi) {
    auto c4 = pow(cos(phi), 4.0);
    auto s4 = pow(sin(phi), 4.0);
    auto rho = pow(c4 + s4, -0.25) * (1.0 + amplitude * cos(static_cast<double>(waves) * phi));
    return std::array{rho * sin(phi), rho * cos(phi)};
  };
  auto c = from_profile(profile, kPi, Topology::Open);
  // sin(pi) is not exactly zero.
  auto pos = c.position;
  c.position = [pos](double phi) {
    Vec2 p = pos(phi);
    if (phi == 0.0 || phi == kPi) p[0] = 0.0;
    return p;
  };
  return std::make_shared<const GeneratingCurve>(std::move(c));
}

namespace {

// Cubic spline through (u_i, y_i) stored as second derivatives M_i.
struct Spline1 {
  std::vector<double> u, y, m;

  [[nodiscard]] std::size_t interval(double x) const {
    auto it = std::upper_bound(u.begin(), u.end(), x);
    std::size_t i = std::distance(u.begin(), it);
    return std::clamp<std::size_t>(i, 1, u.size() - 1) - 1;
  }
  [[nodiscard]] double value(double x) const {
    const std::size_t i = interval(x);
    const double h = u[i + 1] - u[i];
    const double a = u[i + 1] - x, b = x - u[i];
    return m[i] * a * a * a / (6 * h) + m[i + 1] * b * b * b / (6 * h) + (y[i] / h - m[i] * h / 6) * a +
           (y[i + 1] / h - m[i + 1] * h / 6) * b;
  }
  [[nodiscard]] double slope(double x) const {
    const std::size_t i = interval(x);
    const double h = u[i + 1] - u[i];
    const double a = u[i + 1] - x, b = x - u[i];
    return -m[i] * a * a / (2 * h) + m[i + 1] * b * b / (2 * h) - (y[i] / h - m[i] * h / 6) +
           (y[i + 1] / h - m[i + 1] * h / 6);
  }
};

Spline1 fit_spline(const std::vector<double>& u, const std::vector<double>& y, bool periodic, double d0,
                   double d1) {
  const int n = static_cast<int>(u.size()) - 1;  // intervals
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = u[i + 1] - u[i];
  const int unknowns = periodic ? n : n + 1;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  auto idx = [&](int i) { return periodic ? (i % n + n) % n : i; };
  for (int i = periodic ? 0 : 1; i < n; ++i) {
    const int im = periodic ? (i + n - 1) % n : i - 1;
    const double hl = h[im], hr = h[i];
    trip.emplace_back(i, idx(i - 1), hl);
    trip.emplace_back(i, i, 2 * (hl + hr));
    trip.emplace_back(i, idx(i + 1), hr);
    const double yl = y[periodic ? im : i - 1];
    const double yr = y[periodic ? (i + 1) : i + 1];
    rhs[i] = 6 * ((yr - y[i]) / hr - (y[i] - yl) / hl);
  }
  if (!periodic) {
    trip.emplace_back(0, 0, 2 * h[0]);
    trip.emplace_back(0, 1, h[0]);
    rhs[0] = 6 * ((y[1] - y[0]) / h[0] - d0);
    trip.emplace_back(n, n - 1, h[n - 1]);
    trip.emplace_back(n, n, 2 * h[n - 1]);
    rhs[n] = 6 * (d1 - (y[n] - y[n - 1]) / h[n - 1]);
  }
  Eigen::SparseMatrix<double> a(unknowns, unknowns);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw ConfigError("spline: degenerate sample spacing");
  Eigen::VectorXd m = lu.solve(rhs);
  Spline1 s{u, y, std::vector<double>(n + 1)};
  for (int i = 0; i < unknowns; ++i) s.m[i] = m[i];
  if (periodic) s.m[n] = s.m[0];
  return s;
}

}  // namespace

CurvePtr spline(const std::vector<Vec2>& samples) {
  if (samples.size() < 4) throw ConfigError("spline: need at least 4 samples");
  const Vec2& first = samples.front();
  const Vec2& last = samples.back();
  const bool closed = std::hypot(first[0] - last[0], first[1] - last[1]) <= 1e-12;
  if (!closed && (std::abs(first[0]) > 1e-10 || std::abs(last[0]) > 1e-10))
    throw ConfigError("open curve endpoints must lie on the axis (|r| <= 1e-10)");
  if (closed && samples.size() < 5) throw ConfigError("spline: closed curve needs at least 4 distinct samples");

  std::vector<double> u{0.0}, r{first[0]}, z{first[1]};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double d = std::hypot(samples[i][0] - samples[i - 1][0], samples[i][1] - samples[i - 1][1]);
    if (!(d > 0.0)) throw ConfigError("spline: repeated consecutive samples");
    u.push_back(u.back() + d);
    r.push_back(samples[i][0]);
    z.push_back(samples[i][1]);
  }
  if (closed) {
    r.back() = r.front();
    z.back() = z.front();
  }
  auto sr = std::make_shared<Spline1>(fit_spline(u, r, closed, 1.0, -1.0));
  auto sz = std::make_shared<Spline1>(fit_spline(u, z, closed, 0.0, 0.0));

  ParametricCurve c;
  c.position = [sr, sz](double x) { return Vec2{sr->value(x), sz->value(x)}; };
  c.derivative = [sr, sz](double x) { return Vec2{sr->slope(x), sz->slope(x)}; };
  c.phi_max = u.back();
  c.topology = closed ? Topology::Closed : Topology::Open;
  c.knots.assign(u.begin() + 1, u.end() - 1);
  if (!closed) {
    auto pos = c.position;
    const double end = u.back();
    c.position = [pos, end](double x) {
      Vec2 p = pos(x);
      if (x == 0.0 || x == end) p[0] = 0.0;
      return p;
    };
  }
  return std::make_shared<const GeneratingCurve>(std::move(c));
}

CurvePtr load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file: " + path);
  std::vector<Vec2> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double r, z;
    std::string rest;
    if (!(ls >> r >> z) || (ls >> rest))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    samples.push_back({r, z});
  }
  try {
    return spline(samples);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

CurvePtr builtin(const std::string& name, std::span<const double> params) {
  auto arg = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
  if (name == "sphere") return sphere(arg(0, 1.0));
  if (name == "torus") return starfish_torus(arg(0, 2.0), arg(1, 0.5), 0.0, 0);
  if (name == "starfish_torus")
    return starfish_torus(arg(0, 2.0), arg(1, 0.5), arg(2, 0.2), static_cast<int>(arg(3, 5)));
  if (name == "wavy_block") return wavy_block(arg(0, 0.05), static_cast<int>(arg(1, 10)));
  throw ConfigError("unknown built-in curve: " + name);
}

}  // namespace curves

Discretization::Discretization(CurvePtr curve, int n_panels, int n_gauss)
    : curve_(std::move(curve)), n_panels_(n_panels), n_gauss_(n_gauss) {
  if (!curve_) throw ConfigError("discretization: null curve");
  if (n_gauss != static_cast<int>(tables::kGauss10.size()))
    throw ConfigError("discretization: only N_G = 10 is supported");
  if (n_panels < 1) throw ConfigError("discretization: N_P must be at least 1");
  if (curve_->topology() == Topology::Closed && n_panels < 3)
    throw ConfigError("discretization: closed curves need N_P >= 3");
  h_ = curve_->length() / n_panels;
  params_.reserve(size());
  weights_.reserve(size());
  points_.reserve(size());
  for (int p = 0; p < n_panels; ++p) {
    const Panel pan = panel(p);
    for (const auto& nw : tables::kGauss10) {
      const double t = pan.start + 0.5 * (1.0 + nw.node) * (pan.end - pan.start);
      params_.push_back(t);
      weights_.push_back(0.5 * h_ * nw.weight);
      points_.push_back(curve_->eval(t));
    }
  }
}

Panel Discretization::panel(int p) const {
  if (p < 0 || p >= n_panels_) throw DomainError("panel index out of range");
  const double t0 = curve_->length() * p / n_panels_;
  const double t1 = p + 1 == n_panels_ ? curve_->length() : curve_->length() * (p + 1) / n_panels_;
  return {t0, t1};
}

int Discretization::next_panel(int p) const noexcept {
  if (p + 1 < n_panels_) return p + 1;
  return curve_->topology() == Topology::Closed ? 0 : -1;
}

int Discretization::previous_panel(int p) const noexcept {
  if (p > 0) return p - 1;
  return curve_->topology() == Topology::Closed ? n_panels_ - 1 : -1;
}

bool Discretization::adjacent(int p, int q) const noexcept {
  return p != q && (next_panel(p) == q || previous_panel(p) == q);
}

Discretization build_discretization(CurvePtr curve, int n_panels, int n_gauss) {
  return Discretization(std::move(curve), n_panels, n_gauss);
}

Vec3 surface_point(double r, double z, double theta) {
  return {r * std::cos(theta), r * std::sin(theta), z};
}

}  // namespace axibie
