#include "axibie/assembly.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "axibie/error.hpp"
#include "axibie/quadrature.hpp"

namespace axibie {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void eval_modes(const ModalKernel& kernel, KernelPath path, double r, double z, const CurvePoint& src, int N,
                double* out, const AssemblyOptions& opt) {
  switch (path) {
    case KernelPath::Recursion:
      kernel.modes(r, z, src, N, out);
      return;
    case KernelPath::Fft:
      kernel.fft_modes(r, z, src, N, out, opt.fft_oversample);
      return;
    case KernelPath::Oracle:
      kernel.oracle_modes(r, z, src, N, out, opt.oracle_tol);
      return;
  }
}

void check_finite(const double* v, int count, int target, const CurvePoint& src) {
  for (int k = 0; k < count; ++k)
    if (!std::isfinite(v[k]))
      throw NumericalError("assembly: non-finite kernel value for target node " + std::to_string(target) +
                           " and source (" + std::to_string(src.r) + ", " + std::to_string(src.z) + ")");
}

// Kaux (modes x aux, column-major) times the term's interpolation matrix.
Eigen::MatrixXd near_term_block(const NearField& near, const NearField::Term& term, const ModalKernel& kernel,
                                double r, double z, int target, int n_max, const AssemblyOptions& opt) {
  Eigen::MatrixXd kaux(n_max + 1, term.count);
  for (int l = 0; l < term.count; ++l) {
    const int a = term.first + l;
    const CurvePoint& src = near.point(a);
    double* col = kaux.col(l).data();
    try {
      eval_modes(kernel, opt.near_path == KernelPath::Oracle ? KernelPath::Oracle : KernelPath::Recursion, r, z,
                 src, n_max, col, opt);
    } catch (const DomainError& e) {
      throw NumericalError("assembly: coincident auxiliary node for target node " + std::to_string(target) +
                           " (" + e.what() + ")");
    }
    check_finite(col, n_max + 1, target, src);
    kaux.col(l) *= near.weight(a);
  }
  return kaux * (*term.interp);
}

struct LocalRule {
  std::vector<double> x;  // reference abscissae (self: [-1,1]; nearby: [0,1])
  std::vector<double> w;
};

// Self rule for a target at x_t on a panel [-1, 1] whose end -1 lies on the
// symmetry axis. Continued past the axis the kernel has a second logarithmic
// point at the target's mirror image -2 - x_t, so the panel is split into a
// singular sub-panel around the target, a nearby piece towards the axis and
// pieces that grow geometrically towards the far end.
LocalRule pole_self_rule(double x_t) {
  const auto& gauss = gauss_rule();
  const int j = 4;
  const double tau = 1.0 + x_t;
  const double a = x_t - 0.5 * (1.0 + gauss.nodes[j]) * tau;
  const double b = x_t + 0.5 * (1.0 - gauss.nodes[j]) * tau;
  LocalRule out;
  auto append = [&](const std::vector<double>& x, const std::vector<double>& w, auto map, double scale) {
    for (std::size_t l = 0; l < x.size(); ++l) {
      out.x.push_back(map(x[l]));
      out.w.push_back(w[l] * scale);
    }
  };
  const auto& sr = singular_rule(j + 1);
  append(sr.effective_nodes(), sr.effective_weights(), [&](double y) { return a + 0.5 * (1.0 + y) * tau; },
         0.5 * tau);

  const double left = a + 1.0;
  const auto& rl = nearby_rule((x_t - a) / left);
  append(rl.effective_nodes(), rl.effective_weights(), [&](double u) { return a - u * left; }, left);

  double c = std::min(1.0, b + 2.0 * (b - x_t));
  const auto& rr = nearby_rule((b - x_t) / (c - b));
  append(rr.effective_nodes(), rr.effective_weights(), [&, b, c](double u) { return b + u * (c - b); }, c - b);

  using G20 = boost::math::quadrature::gauss<double, 20>;
  std::vector<double> gx, gw;
  for (std::size_t l = 0; l < G20::abscissa().size(); ++l) {
    gx.push_back(G20::abscissa()[l]);
    gw.push_back(G20::weights()[l]);
    if (G20::abscissa()[l] != 0.0) {
      gx.push_back(-G20::abscissa()[l]);
      gw.push_back(G20::weights()[l]);
    }
  }
  while (c < 1.0) {
    const double d = std::min(1.0, c + (c - x_t));
    append(gx, gw, [&, c, d](double y) { return 0.5 * (c + d) + 0.5 * (d - c) * y; }, 0.5 * (d - c));
    c = d;
  }
  return out;
}

}  // namespace

BlockRegime block_regime(const Discretization& disc, int p, int q) {
  if (p == q) return BlockRegime::Self;
  return disc.adjacent(p, q) ? BlockRegime::Adjacent : BlockRegime::Far;
}

NearField::NearField(const Discretization& disc) {
  const int ng = disc.nodes_per_panel();
  const auto& gauss = gauss_rule();
  const std::vector<double> gnodes = gauss.nodes;
  self_interp_.resize(ng);
  after_interp_.resize(ng);
  before_interp_.resize(ng);

  std::vector<LocalRule> self_rules(ng), after_rules(ng), before_rules(ng);
  for (int i = 0; i < ng; ++i) {
    const auto& sr = singular_rule(i + 1);
    self_rules[i] = {sr.effective_nodes(), sr.effective_weights()};
    self_interp_[i] = lagrange_matrix(gnodes, self_rules[i].x);

    // Target sits at distance (1 - x_i)/2 panel lengths from the start of the
    // next panel and (1 + x_i)/2 from the end of the previous one.
    const double xbar_after = 0.5 * (1.0 - gnodes[i]);
    const double xbar_before = 0.5 * (1.0 + gnodes[i]);
    if (!(xbar_after > 0.0) || !(xbar_before > 0.0)) throw NumericalError("near field: Gauss node on panel edge");
    const auto& ra = nearby_rule(xbar_after);
    const auto& rb = nearby_rule(xbar_before);
    after_rules[i] = {ra.effective_nodes(), ra.effective_weights()};
    before_rules[i] = {rb.effective_nodes(), rb.effective_weights()};
    std::vector<double> xi_after, xi_before;
    for (double u : after_rules[i].x) xi_after.push_back(-1.0 + 2.0 * u);
    for (double u : before_rules[i].x) xi_before.push_back(1.0 - 2.0 * u);
    after_interp_[i] = lagrange_matrix(gnodes, xi_after);
    before_interp_[i] = lagrange_matrix(gnodes, xi_before);
  }

  // Pole-panel self rules for targets in the half of the panel next to the
  // axis; index i for an axis at the panel start, ng + i for one at its end.
  std::vector<LocalRule> pole_rules(2 * ng);
  pole_interp_.resize(2 * ng);
  for (int i = 0; i < ng; ++i) {
    if (gnodes[i] > 0.0) continue;
    pole_rules[i] = pole_self_rule(gnodes[i]);
    LocalRule& m = pole_rules[ng + (ng - 1 - i)];
    for (double x : pole_rules[i].x) m.x.push_back(-x);
    m.w = pole_rules[i].w;
    pole_interp_[i] = lagrange_matrix(gnodes, pole_rules[i].x);
    pole_interp_[ng + (ng - 1 - i)] = lagrange_matrix(gnodes, m.x);
  }

  const double h = disc.panel_length();
  const GeneratingCurve& curve = disc.curve();
  terms_.resize(disc.size());
  auto add_points = [&](double (*map)(double, double, double), double base, const LocalRule& rule, double wscale) {
    const int first = static_cast<int>(points_.size());
    for (std::size_t l = 0; l < rule.x.size(); ++l) {
      const double s = std::clamp(map(base, rule.x[l], h), 0.0, curve.length());
      const CurvePoint cp = curve.eval(s);
      points_.push_back(cp);
      params_.push_back(s);
      weights_.push_back(kSqrt2Pi * rule.w[l] * wscale * cp.r * cp.jacobian);
    }
    return first;
  };
  const double axis_tol = 1e-12 * h;
  for (int p = 0; p < disc.panel_count(); ++p) {
    const Panel pan = disc.panel(p);
    const int next = disc.next_panel(p);
    const int prev = disc.previous_panel(p);
    const bool axis_start = std::abs(curve.eval(pan.start).r) <= axis_tol;
    const bool axis_end = std::abs(curve.eval(pan.end).r) <= axis_tol;
    for (int i = 0; i < ng; ++i) {
      auto& list = terms_[p * ng + i];
      int rule = -1;
      if (axis_start && gnodes[i] <= 0.0) rule = i;
      if (axis_end && gnodes[i] >= 0.0) rule = ng + i;
      const LocalRule& self = rule >= 0 ? pole_rules[rule] : self_rules[i];
      const Eigen::MatrixXd* interp = rule >= 0 ? &pole_interp_[rule] : &self_interp_[i];
      const int f0 = add_points([](double a, double x, double hh) { return a + 0.5 * (1.0 + x) * hh; }, pan.start,
                                self, 0.5 * h);
      list.push_back({p, f0, static_cast<int>(self.x.size()), interp});
      if (next >= 0) {
        const int f1 = add_points([](double a, double x, double hh) { return a + x * hh; }, disc.panel(next).start,
                                  after_rules[i], h);
        list.push_back({next, f1, static_cast<int>(after_rules[i].x.size()), &after_interp_[i]});
      }
      if (prev >= 0) {
        const int f2 = add_points([](double b, double x, double hh) { return b - x * hh; }, disc.panel(prev).end,
                                  before_rules[i], h);
        list.push_back({prev, f2, static_cast<int>(before_rules[i].x.size()), &before_interp_[i]});
      }
    }
  }
}

std::span<const NearField::Term> NearField::terms(int target) const { return terms_.at(target); }

std::vector<Eigen::MatrixXd> assemble_far_block(const Discretization& disc, const ModalKernel& kernel, int p,
                                                int q, int n_max, const AssemblyOptions& options) {
  if (block_regime(disc, p, q) != BlockRegime::Far)
    throw DomainError("assemble_far_block: panels " + std::to_string(p) + " and " + std::to_string(q) +
                      " are not well separated");
  const int ng = disc.nodes_per_panel();
  std::vector<Eigen::MatrixXd> out(n_max + 1, Eigen::MatrixXd(ng, ng));
  std::vector<double> k(n_max + 1);
  for (int i = 0; i < ng; ++i) {
    const CurvePoint& t = disc.point(p * ng + i);
    for (int j = 0; j < ng; ++j) {
      const int src = q * ng + j;
      const CurvePoint& s = disc.point(src);
      eval_modes(kernel, options.far_path == KernelPath::Fft ? KernelPath::Fft : KernelPath::Recursion, t.r, t.z,
                 s, n_max, k.data(), options);
      const double f = kSqrt2Pi * disc.weights()[src] * s.r * s.jacobian;
      for (int n = 0; n <= n_max; ++n) out[n](i, j) = f * k[n];
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> assemble_near_block(const Discretization& disc, const NearField& near,
                                                 const ModalKernel& kernel, int p, int q, int n_max,
                                                 const AssemblyOptions& options) {
  if (block_regime(disc, p, q) == BlockRegime::Far)
    throw DomainError("assemble_near_block: panels " + std::to_string(p) + " and " + std::to_string(q) +
                      " are well separated");
  const int ng = disc.nodes_per_panel();
  std::vector<Eigen::MatrixXd> out(n_max + 1, Eigen::MatrixXd(ng, ng));
  for (int i = 0; i < ng; ++i) {
    const int target = p * ng + i;
    const CurvePoint& t = disc.point(target);
    for (const auto& term : near.terms(target)) {
      if (term.panel != q) continue;
      const Eigen::MatrixXd b = near_term_block(near, term, kernel, t.r, t.z, target, n_max, options);
      for (int n = 0; n <= n_max; ++n) out[n].row(i) = b.row(n);
    }
  }
  return out;
}

std::vector<ModalSystem> build_modal_systems(const Discretization& disc, const ModalKernel& kernel, int n_f,
                                             const AssemblyOptions& options, AssemblyTimings* timings) {
  if (n_f < 0) throw ConfigError("build_modal_systems: N_F must be nonnegative");
  auto t0 = std::chrono::steady_clock::now();
  const NearField near(disc);
  const double t_setup = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const int N = disc.size();
  const int ng = disc.nodes_per_panel();
  const int np = disc.panel_count();
  const int modes = n_f + 1;
  std::vector<ModalSystem> systems(modes);
  for (int n = 0; n < modes; ++n) {
    systems[n].n = n;
    systems[n].matrix.resize(N, N);
  }
  const auto pts = disc.points();
  const auto w = disc.weights();
  std::vector<double> far_factor(N);
  for (int j = 0; j < N; ++j) far_factor[j] = kSqrt2Pi * w[j] * pts[j].r * pts[j].jacobian;
  const KernelPath far_path = options.far_path == KernelPath::Fft ? KernelPath::Fft : KernelPath::Recursion;

  std::string failure;
#pragma omp parallel
  {
    // Row buffer laid out [n][j] so each mode's row is one contiguous copy.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row(modes, N);
    std::vector<double> k(modes);
    std::vector<char> near_panel(np);
#pragma omp for schedule(dynamic, 1)
    for (int i = 0; i < N; ++i) {
      try {
        const CurvePoint& t = pts[i];
        row.setZero();
        std::fill(near_panel.begin(), near_panel.end(), 0);
        const auto terms = near.terms(i);
        for (const auto& term : terms) near_panel[term.panel] = 1;
        for (int q = 0; q < np; ++q) {
          if (near_panel[q]) continue;
          for (int jj = 0; jj < ng; ++jj) {
            const int j = q * ng + jj;
            eval_modes(kernel, far_path, t.r, t.z, pts[j], n_f, k.data(), options);
            check_finite(k.data(), modes, i, pts[j]);
            const double f = far_factor[j];
            for (int n = 0; n < modes; ++n) row(n, j) = f * k[n];
          }
        }
        for (const auto& term : terms)
          row.middleCols(term.panel * ng, ng) += near_term_block(near, term, kernel, t.r, t.z, i, n_f, options);
        for (int n = 0; n < modes; ++n) systems[n].matrix.row(i) = row.row(n);
      } catch (const std::exception& e) {
#pragma omp critical(axibie_assembly_failure)
        if (failure.empty()) failure = e.what();
      }
    }
  }
  if (!failure.empty()) throw NumericalError(failure);
  if (timings) {
    timings->setup = t_setup;
    timings->mat = seconds_since(t0);
  }
  return systems;
}

}  // namespace axibie
