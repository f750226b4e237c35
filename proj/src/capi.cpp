#include "axibie/axibie.h"

#include <omp.h>

#include <algorithm>
#include <cstring>
#include <exception>
#include <string>

#include "axibie/error.hpp"
#include "axibie/problem.hpp"
#include "axibie/quadrature.hpp"

struct axibie_curve {
  axibie::CurvePtr curve;
};

struct axibie_problem {
  axibie::Problem problem;
};

namespace {

thread_local std::string g_last_error;

axibie_status fail(axibie_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

template <class F>
axibie_status guarded(F&& body) {
  try {
    body();
    return AXIBIE_OK;
  } catch (const axibie::ConfigError& e) {
    return fail(AXIBIE_ERR_CONFIG, e.what());
  } catch (const axibie::DomainError& e) {
    return fail(AXIBIE_ERR_DOMAIN, e.what());
  } catch (const axibie::NumericalError& e) {
    return fail(AXIBIE_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(AXIBIE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AXIBIE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AXIBIE_ERR_INTERNAL, "unknown exception");
  }
}

#define AXIBIE_REQUIRE(cond, what) \
  if (!(cond)) return fail(AXIBIE_ERR_ARGUMENT, what)

void copy_name(char (&dst)[32], const std::string& src) {
  const std::size_t n = std::min(src.size(), sizeof(dst) - 1);
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

axibie::ProblemOptions to_cpp(const axibie_problem_options& o) {
  using namespace axibie;
  if (o.type != AXIBIE_INTERIOR && o.type != AXIBIE_EXTERIOR) throw ConfigError("type: unknown problem type");
  if (o.recursion < 0 || o.recursion > 2) throw ConfigError("recursion: unknown policy");
  if (o.far_path != AXIBIE_PATH_RECURSION && o.far_path != AXIBIE_PATH_FFT)
    throw ConfigError("far_path: must be recursion or fft");
  if (o.near_path != AXIBIE_PATH_RECURSION && o.near_path != AXIBIE_PATH_ORACLE)
    throw ConfigError("near_path: must be recursion or oracle");
  if (o.fft_oversample < 1) throw ConfigError("fft_oversample: must be at least 1");
  if (!(o.oracle_tol > 0.0)) throw ConfigError("oracle_tol: must be positive");
  if (o.m_theta < 0) throw ConfigError("m_theta: must be nonnegative");
  ProblemOptions p;
  p.type = o.type == AXIBIE_INTERIOR ? ProblemType::Interior : ProblemType::Exterior;
  p.n_panels = o.n_panels;
  p.n_f = o.n_f;
  p.m_theta = o.m_theta;
  p.policy = static_cast<RecursionPolicy>(o.recursion);
  p.assembly.far_path = static_cast<KernelPath>(o.far_path);
  p.assembly.near_path = static_cast<KernelPath>(o.near_path);
  p.assembly.fft_oversample = o.fft_oversample;
  p.assembly.oracle_tol = o.oracle_tol;
  p.factor.explicit_inverse = o.explicit_inverse != 0;
  p.factor.release_matrices = o.keep_matrices == 0;
  p.factor.rcond_threshold = o.rcond_threshold;
  p.completion = o.completion != 0;
  if (o.has_x0) p.x0 = Vec2{o.x0_r, o.x0_z};
  return p;
}

void copy_grid_in(const double* src, axibie::GridField& dst) {
  for (Eigen::Index i = 0; i < dst.rows(); ++i)
    for (Eigen::Index m = 0; m < dst.cols(); ++m) dst(i, m) = src[i * dst.cols() + m];
}

void copy_grid_out(const axibie::GridField& src, double* dst) {
  for (Eigen::Index i = 0; i < src.rows(); ++i)
    for (Eigen::Index m = 0; m < src.cols(); ++m) dst[i * src.cols() + m] = src(i, m);
}

}  // namespace

extern "C" {

const char* axibie_version(void) { return "1.0.0"; }

const char* axibie_last_error(void) { return g_last_error.c_str(); }

const char* axibie_status_name(axibie_status status) {
  switch (status) {
    case AXIBIE_OK: return "ok";
    case AXIBIE_ERR_CONFIG: return "configuration error";
    case AXIBIE_ERR_DOMAIN: return "domain error";
    case AXIBIE_ERR_NUMERICAL: return "numerical error";
    case AXIBIE_ERR_ARGUMENT: return "invalid argument";
    case AXIBIE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void axibie_set_num_threads(int n) { omp_set_num_threads(n > 0 ? n : omp_get_num_procs()); }

axibie_status axibie_curve_builtin(const char* name, const double* params, size_t n_params, axibie_curve** out) {
  AXIBIE_REQUIRE(name && out, "axibie_curve_builtin: null argument");
  AXIBIE_REQUIRE(params || n_params == 0, "axibie_curve_builtin: null parameter array");
  *out = nullptr;
  return guarded([&] {
    auto c = axibie::curves::builtin(name, std::span<const double>(params, n_params));
    *out = new axibie_curve{std::move(c)};
  });
}

axibie_status axibie_curve_from_file(const char* path, axibie_curve** out) {
  AXIBIE_REQUIRE(path && out, "axibie_curve_from_file: null argument");
  *out = nullptr;
  return guarded([&] { *out = new axibie_curve{axibie::curves::load_samples(path)}; });
}

axibie_status axibie_curve_from_samples(const double* r, const double* z, size_t count, axibie_curve** out) {
  AXIBIE_REQUIRE(r && z && out, "axibie_curve_from_samples: null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<axibie::Vec2> samples(count);
    for (size_t k = 0; k < count; ++k) samples[k] = {r[k], z[k]};
    *out = new axibie_curve{axibie::curves::spline(samples)};
  });
}

void axibie_curve_free(axibie_curve* curve) { delete curve; }

axibie_status axibie_curve_length(const axibie_curve* curve, double* length) {
  AXIBIE_REQUIRE(curve && length, "axibie_curve_length: null argument");
  *length = curve->curve->length();
  return AXIBIE_OK;
}

axibie_status axibie_curve_is_closed(const axibie_curve* curve, int* closed) {
  AXIBIE_REQUIRE(curve && closed, "axibie_curve_is_closed: null argument");
  *closed = curve->curve->topology() == axibie::Topology::Closed ? 1 : 0;
  return AXIBIE_OK;
}

axibie_status axibie_curve_eval(const axibie_curve* curve, double t, axibie_curve_point* out) {
  AXIBIE_REQUIRE(curve && out, "axibie_curve_eval: null argument");
  return guarded([&] {
    const auto p = curve->curve->eval(t);
    *out = {p.r, p.z, p.nr, p.nz, p.jacobian};
  });
}

void axibie_problem_options_init(axibie_problem_options* o) {
  if (!o) return;
  const axibie::ProblemOptions d;
  *o = {};
  o->type = AXIBIE_INTERIOR;
  o->n_panels = d.n_panels;
  o->n_f = d.n_f;
  o->m_theta = 0;
  o->recursion = AXIBIE_RECURSION_AUTO;
  o->far_path = AXIBIE_PATH_RECURSION;
  o->near_path = AXIBIE_PATH_RECURSION;
  o->fft_oversample = d.assembly.fft_oversample;
  o->oracle_tol = d.assembly.oracle_tol;
  o->explicit_inverse = 0;
  o->keep_matrices = 0;
  o->rcond_threshold = d.factor.rcond_threshold;
  o->completion = 1;
  o->has_x0 = 0;
}

axibie_status axibie_problem_create(const axibie_curve* curve, const axibie_problem_options* options,
                                    axibie_problem** out) {
  AXIBIE_REQUIRE(curve && options && out, "axibie_problem_create: null argument");
  *out = nullptr;
  return guarded([&] { *out = new axibie_problem{axibie::Problem(curve->curve, to_cpp(*options))}; });
}

void axibie_problem_free(axibie_problem* problem) { delete problem; }

axibie_status axibie_problem_sizes(const axibie_problem* problem, int* node_count, int* m_theta, int* n_f) {
  AXIBIE_REQUIRE(problem, "axibie_problem_sizes: null handle");
  if (node_count) *node_count = problem->problem.discretization().size();
  if (m_theta) *m_theta = problem->problem.m_theta();
  if (n_f) *n_f = problem->problem.options().n_f;
  return AXIBIE_OK;
}

axibie_status axibie_problem_nodes(const axibie_problem* problem, double* r, double* z, double* weights) {
  AXIBIE_REQUIRE(problem, "axibie_problem_nodes: null handle");
  const auto& disc = problem->problem.discretization();
  for (int i = 0; i < disc.size(); ++i) {
    if (r) r[i] = disc.point(i).r;
    if (z) z[i] = disc.point(i).z;
    if (weights) weights[i] = disc.weights()[i];
  }
  return AXIBIE_OK;
}

axibie_status axibie_problem_reference_point(const axibie_problem* problem, double* r0, double* z0) {
  AXIBIE_REQUIRE(problem && r0 && z0, "axibie_problem_reference_point: null argument");
  const auto x0 = problem->problem.reference_point();
  *r0 = x0[0];
  *z0 = x0[1];
  return AXIBIE_OK;
}

axibie_status axibie_problem_assemble(axibie_problem* problem) {
  AXIBIE_REQUIRE(problem, "axibie_problem_assemble: null handle");
  return guarded([&] { problem->problem.assemble(); });
}

axibie_status axibie_problem_factorize(axibie_problem* problem) {
  AXIBIE_REQUIRE(problem, "axibie_problem_factorize: null handle");
  return guarded([&] { problem->problem.factorize(); });
}

axibie_status axibie_problem_solve(axibie_problem* problem, const double* data, double* sigma) {
  AXIBIE_REQUIRE(problem && data && sigma, "axibie_problem_solve: null argument");
  return guarded([&] {
    auto& p = problem->problem;
    axibie::GridField f(p.discretization().size(), p.m_theta());
    copy_grid_in(data, f);
    copy_grid_out(p.solve(f), sigma);
  });
}

axibie_status axibie_problem_potential(const axibie_problem* problem, const double* sigma, const double* xyz,
                                       size_t count, double* u) {
  AXIBIE_REQUIRE(problem && sigma && (xyz || count == 0) && (u || count == 0),
                 "axibie_problem_potential: null argument");
  return guarded([&] {
    const auto& p = problem->problem;
    axibie::GridField s(p.discretization().size(), p.m_theta());
    copy_grid_in(sigma, s);
    std::vector<axibie::Vec3> targets(count);
    for (size_t k = 0; k < count; ++k) targets[k] = {xyz[3 * k], xyz[3 * k + 1], xyz[3 * k + 2]};
    const auto values = p.potential(s, targets);
    std::copy(values.begin(), values.end(), u);
  });
}

axibie_status axibie_problem_timings(const axibie_problem* problem, axibie_timings* out) {
  AXIBIE_REQUIRE(problem && out, "axibie_problem_timings: null argument");
  const auto& t = problem->problem.timings();
  *out = {t.setup, t.mat, t.inv, t.fft, t.apply};
  return AXIBIE_OK;
}

axibie_status axibie_problem_conditioning(axibie_problem* problem, double* sigma_max, double* sigma_min,
                                          size_t capacity) {
  AXIBIE_REQUIRE(problem && sigma_max && sigma_min, "axibie_problem_conditioning: null argument");
  AXIBIE_REQUIRE(capacity >= static_cast<size_t>(problem->problem.options().n_f + 1),
                 "axibie_problem_conditioning: buffers shorter than n_f + 1");
  return guarded([&] {
    const auto ext = problem->problem.conditioning();
    for (size_t n = 0; n < ext.size(); ++n) {
      sigma_max[n] = ext[n].sigma_max;
      sigma_min[n] = ext[n].sigma_min;
    }
  });
}

axibie_status axibie_problem_rcond(axibie_problem* problem, double* rcond, size_t capacity) {
  AXIBIE_REQUIRE(problem && rcond, "axibie_problem_rcond: null argument");
  AXIBIE_REQUIRE(capacity >= static_cast<size_t>(problem->problem.options().n_f + 1),
                 "axibie_problem_rcond: buffer shorter than n_f + 1");
  return guarded([&] {
    problem->problem.factorize();
    const auto& f = problem->problem.factors();
    for (size_t n = 0; n < f.size(); ++n) rcond[n] = f[n].rcond();
  });
}

void axibie_manufactured_options_init(axibie_manufactured_options* options) {
  if (!options) return;
  const axibie::ManufacturedOptions d;
  *options = {d.charges, d.seed, d.targets};
}

axibie_status axibie_problem_manufactured(axibie_problem* problem, const axibie_manufactured_options* options,
                                          axibie_manufactured_summary* summary, double* targets_xyz,
                                          double* u_num, double* u_exact, double* clearance, double* sigma) {
  AXIBIE_REQUIRE(problem && options && summary, "axibie_problem_manufactured: null argument");
  return guarded([&] {
    auto& p = problem->problem;
    const auto res = axibie::run_manufactured(p, {options->charges, options->seed, options->targets});
    *summary = {res.error, res.min_clearance, static_cast<int>(res.targets.size())};
    for (size_t k = 0; k < res.targets.size(); ++k) {
      if (targets_xyz)
        for (int c = 0; c < 3; ++c) targets_xyz[3 * k + c] = res.targets[k][c];
      if (u_num) u_num[k] = res.u_num[k];
      if (u_exact) u_exact[k] = res.u_exact[k];
      if (clearance) clearance[k] = axibie::clearance_in_panels(p.discretization(), res.targets[k]);
    }
    if (sigma) copy_grid_out(res.sigma, sigma);
  });
}

axibie_status axibie_select_modes(const axibie_curve* curve, const axibie_problem_options* options,
                                  const axibie_manufactured_options* charges, double eps, int m_theta, int* n_f,
                                  double* tail, int* converged) {
  AXIBIE_REQUIRE(curve && options && charges && n_f && tail && converged, "axibie_select_modes: null argument");
  return guarded([&] {
    const auto o = to_cpp(*options);
    if (m_theta < 3) throw axibie::ConfigError("m_theta: truncation grid needs at least 3 points");
    const axibie::Discretization disc(curve->curve, o.n_panels);
    const auto q = axibie::random_charges(*curve->curve, o.type, charges->charges, charges->seed);
    const auto t = axibie::select_truncation(axibie::boundary_data(disc, q, m_theta), eps);
    *n_f = t.n_f;
    *tail = t.tail;
    *converged = t.converged ? 1 : 0;
  });
}

axibie_status axibie_quad_residuals(unsigned seed, axibie_quad_residual* out, size_t capacity, size_t* count) {
  AXIBIE_REQUIRE(count && (out || capacity == 0), "axibie_quad_residuals: null argument");
  return guarded([&] {
    const auto res = axibie::quadrature_residuals(seed);
    *count = res.size();
    for (size_t k = 0; k < std::min(capacity, res.size()); ++k) {
      copy_name(out[k].rule, res[k].rule);
      copy_name(out[k].integrand, res[k].integrand);
      out[k].parameter = res[k].parameter;
      out[k].rule_value = res[k].rule_value;
      out[k].reference = res[k].reference;
      out[k].relative_error = res[k].relative_error;
    }
  });
}

uint64_t axibie_rule_table_checksum(void) { return axibie::table_checksum(); }

}  // extern "C"
