// Acceptance checks: one PASS/FAIL line per criterion, measured value and
// threshold side by side. Exit status 0 only when every line passes.
//
//   axibie_acceptance [--only N] [--threads T]
//
// Timing sweeps run single-threaded unless --threads is given.

#include <axibie/assembly.hpp>
#include <axibie/error.hpp>
#include <axibie/modal_kernels.hpp>
#include <axibie/postprocess.hpp>
#include <axibie/problem.hpp>
#include <axibie/quadrature.hpp>
#include <axibie/solver.hpp>
#include <axibie/special_functions.hpp>

#include <omp.h>

#include "support/mp_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <complex>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace axibie;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void report(const char* id, bool pass, const std::string& what) {
  std::printf("%s %-5s %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProblemOptions options(ProblemType type, int np, int modes) {
  ProblemOptions o;
  o.type = type;
  o.n_panels = np;
  o.n_f = (modes - 1) / 2;
  return o;
}

double sphere_error(int np, int modes) {
  Problem p(curves::sphere(), options(ProblemType::Interior, np, modes));
  return run_manufactured(p).error;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double e = sphere_error(10, 100);
  const double t = seconds(t0);
  report("1", e <= 1e-10 && t <= 60.0,
         fmt("sphere interior N_P=10, modes=100: error %.3e (<= 1e-10), %.2f s (<= 60 s)", e, t));
}

void criterion2() {
  std::string table;
  double e525 = 0, e10100 = 0;
  for (int np : {5, 10})
    for (int modes : {25, 50, 100}) {
      const double e = sphere_error(np, modes);
      table += fmt(" (%d,%d)=%.2e", np, modes, e);
      if (np == 5 && modes == 25) e525 = e;
      if (np == 10 && modes == 100) e10100 = e;
    }
  const double drop = std::log10(e525 / e10100);
  report("2", drop >= 6.0, fmt("plateau drop (5,25)->(10,100): %.2f orders (>= 6);%s", drop, table.c_str()));
}

void criterion3() {
  auto cond0 = [](bool completion) {
    auto o = options(ProblemType::Exterior, 10, 9);
    o.completion = completion;
    Problem p(curves::sphere(), o);
    return p.conditioning()[0].cond();
  };
  const double without = cond0(false), with = cond0(true);
  report("3", without > 1e10 && with < 100.0,
         fmt("exterior sphere n=0 condition: without completion %.3e (> 1e10), with %.3f (< 100)", without, with));
}

void criterion4() {
  // chi - 1 for a target at (1, 0) and a source on the unit ring at height z'.
  double worst = 0.0;
  int compared = 0;
  for (double cm1 : {1e-6, 1e-3, 0.1, 1.0, 9.0}) {
    CurvePoint s;
    s.r = 1.0;
    s.z = std::sqrt(2.0 * cm1);
    s.nr = 0.6;
    s.nz = 0.8;
    const int N = 200;
    const auto d = double_layer_modal_interior(KernelPairGeometry::make(1.0, 0.0, s), N);
    const auto ref = oracle::double_layer_modes(1.0, 0.0, s.r, s.z, s.nr, s.nz, N);
    for (int n = 0; n <= N; ++n) {
      if (ref[n] == 0.0) continue;
      worst = std::max(worst, std::abs(d[n] - ref[n]) / std::abs(ref[n]));
      ++compared;
    }
  }
  report("4a", worst <= 1e-10,
         fmt("d_n recursion vs extended-precision azimuthal quadrature, n <= 200, 5 chi: max rel %.3e (<= 1e-10, "
             "%d values)",
             worst, compared));

  auto t_mat = [](KernelPath near) {
    auto o = options(ProblemType::Interior, 5, 200);
    o.assembly.near_path = near;
    Problem p(curves::sphere(), o);
    p.assemble();
    return p.timings().mat;
  };
  const double rec = t_mat(KernelPath::Recursion), orc = t_mat(KernelPath::Oracle);
  report("4b", orc >= 5.0 * rec,
         fmt("T_mat N_P=5, modes=200: recursion %.3f s, adaptive oracle %.3f s, ratio %.1f (>= 5)", rec, orc,
             orc / rec));
}

void criterion5() {
  double g = 0, s = 0, nb = 0;
  for (const auto& r : quadrature_residuals(1)) {
    if (r.rule == "gauss10")
      g = std::max(g, r.relative_error);
    else if (r.rule.rfind("singular20", 0) == 0)
      s = std::max(s, r.relative_error);
    else
      nb = std::max(nb, r.relative_error);
  }
  report("5", g <= 1e-14 && s <= 1e-11 && nb <= 1e-10,
         fmt("quadrature residuals: gauss10 %.2e (<= 1e-14), singular20 %.2e (<= 1e-11), nearby24 %.2e (<= 1e-10)",
             g, s, nb));
}

void criterion6() {
  LaplaceDoubleLayer dl;
  double rows = 0.0;
  for (int np : {5, 10, 20}) {
    auto disc = build_discretization(curves::sphere(), np);
    auto sys = build_modal_systems(disc, dl, 0);
    rows = std::max(rows, (sys[0].matrix.rowwise().sum().array() + 0.5).abs().maxCoeff());
  }
  auto disc = build_discretization(curves::sphere(), 10);
  GridField one = GridField::Ones(disc.size(), 256);
  double in = 0.0, out = 0.0;
  for (Vec3 x : {Vec3{0.0, 0.0, 0.0}, Vec3{0.2, 0.1, -0.2}, Vec3{0.0, 0.0, 0.35}})
    in = std::max(in, std::abs(eval_double_layer_potential(one, disc, ProblemType::Interior, x) + 1.0));
  for (Vec3 x : {Vec3{1.7, 0.0, 0.0}, Vec3{0.0, -1.2, 1.3}, Vec3{3.0, 2.0, 1.0}})
    out = std::max(out, std::abs(eval_double_layer_potential(one, disc, ProblemType::Interior, x)));
  report("6", rows <= 1e-9 && in <= 1e-9 && out <= 1e-9,
         fmt("Gauss identities: row sums +1/2 %.2e, inside +1 %.2e, outside %.2e (each <= 1e-9)", rows, in, out));
}

void criterion7() {
  Problem p(curves::sphere(), options(ProblemType::Interior, 10, 100));
  const auto c = p.conditioning();
  bool finite = true;
  for (const auto& e : c) finite = finite && std::isfinite(e.cond());
  const int nf = static_cast<int>(c.size()) - 1;
  report("7", finite && c[nf].cond() < c[1].cond(),
         fmt("sphere conditioning: cond_0 %.4f, cond_1 %.4f, cond_%d %.6f (finite, cond_NF < cond_1)", c[0].cond(),
             c[1].cond(), nf, c[nf].cond()));
}

double best_t_mat(int np, int modes, int repeats) {
  double best = 1e300;
  for (int k = 0; k < repeats; ++k) {
    Problem p(curves::sphere(), options(ProblemType::Interior, np, modes));
    p.assemble();
    best = std::min(best, p.timings().mat);
  }
  return best;
}

void criterion8(int threads) {
  omp_set_num_threads(threads);
  std::vector<double> xp, yp, xm, ym;
  std::string tp, tm;
  for (int np : {5, 10, 20, 40}) {
    xp.push_back(np);
    yp.push_back(best_t_mat(np, 200, 3));
    tp += fmt(" %d:%.3f", np, yp.back());
  }
  for (int modes : {25, 50, 100, 200, 400}) {
    xm.push_back(modes);
    ym.push_back(best_t_mat(10, modes, 3));
    tm += fmt(" %d:%.3f", modes, ym.back());
  }
  const double sp = slope(xp, yp), sm = slope(xm, ym);
  report("8a", sp >= 1.7 && sp <= 2.3,
         fmt("T_mat vs N_P (modes=200, %d thread(s)): slope %.3f in [1.7, 2.3];%s s", threads, sp, tp.c_str()));
  report("8b", sm >= 0.7 && sm <= 1.3,
         fmt("T_mat vs modes (N_P=10, %d thread(s)): slope %.3f in [0.7, 1.3];%s s", threads, sm, tm.c_str()));
  omp_set_num_threads(omp_get_num_procs());
}

void criterion9() {
  const double cm1 = 1e-6;
  const ChiValue chi{1.0 + cm1, cm1};
  const auto f = legendre_q_forward(chi, 400), b = legendre_q_backward(chi, 400);
  double fb = 0.0;
  for (int n = 0; n <= 400; ++n) fb = std::max(fb, std::abs(f[n] - b[n]) / std::abs(b[n]));

  double q = 0.0;
  for (double c : {1e-6, 1e-3, 0.1, 1.0, 9.0}) {
    const auto ref = oracle::legendre_q(c, 200);
    const auto v = legendre_q(ChiValue{1.0 + c, c}, 200);
    for (int n = 0; n <= 200; ++n) q = std::max(q, std::abs(v[n] - ref[n]) / std::abs(ref[n]));
  }

  double ke = 0.0;
  for (double mu : {0.0, 0.1, 0.5, 0.9, 0.99, 0.999999}) {
    const auto v = elliptic_KE(mu);
    const double K = adaptive_integrate(
        [&](double t) { return 1.0 / std::sqrt(1 - mu * mu * std::sin(t) * std::sin(t)); }, 0.0, pi / 2, 1e-14);
    const double E = adaptive_integrate([&](double t) { return std::sqrt(1 - mu * mu * std::sin(t) * std::sin(t)); },
                                        0.0, pi / 2, 1e-14);
    ke = std::max({ke, std::abs(v.K - K) / K, std::abs(v.E - E) / E});
  }
  report("9", fb <= 1e-8 && q <= 1e-10 && ke <= 1e-12,
         fmt("special functions: forward/backward at chi=1+1e-6, n<=400 %.2e (<= 1e-8); Q vs integral, n<=200, 5 chi "
             "%.2e (<= 1e-10); K,E vs integrals %.2e (<= 1e-12)",
             fb, q, ke));
}

FourierModes random_modes(int nodes, int n_f, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> u;
  FourierModes m(nodes, n_f);
  for (int n = 0; n <= n_f; ++n)
    for (int i = 0; i < nodes; ++i) {
      const std::complex<double> v(u(rng), n == 0 ? 0.0 : u(rng));
      m.mode(n)(i) = v;
      m.mode(-n)(i) = std::conj(v);
    }
  return m;
}

void criterion10() {
  const int n_f = 12;
  auto disc = build_discretization(curves::sphere(), 8);
  LaplaceDoubleLayer dl;
  auto sys = build_modal_systems(disc, dl, n_f);
  FactorOptions keep;
  keep.release_matrices = false;
  const auto factors = factorize(sys, keep);
  const int N = disc.size();

  bool decoupled = true;
  for (int n : {0, 3, -9}) {
    FourierModes rhs(N, n_f);
    rhs.mode(n) = random_modes(N, 0, 40 + n + 20).mode(0);
    const auto x = solve_all(factors, rhs);
    for (int m = -n_f; m <= n_f; ++m)
      if (m != n && x.mode(m).cwiseAbs().maxCoeff() != 0.0) decoupled = false;
  }

  bool identical = true;
  for (unsigned k = 0; k < 3; ++k) {
    const auto rhs = random_modes(N, n_f, 10 + k);
    const auto reused = solve_all(factors, rhs);
    auto copy = sys;
    const auto fresh = factorize(copy);
    identical = identical && solve_all(fresh, rhs).coeffs == reused.coeffs;
  }

  double residual = 0.0;
  const auto rhs = random_modes(N, n_f, 3);
  const auto x = solve_all(factors, rhs);
  for (int n = -n_f; n <= n_f; ++n) {
    const Eigen::MatrixXcd A = sys[std::abs(n)].matrix.cast<std::complex<double>>();
    const Eigen::VectorXcd r = x.mode(n) + A * x.mode(n) - rhs.mode(n);
    residual = std::max(residual, r.norm() / rhs.mode(n).norm());
  }
  report("10", decoupled && identical && residual <= 1e-12,
         fmt("solver algebra: modes decoupled exactly %s, reused factors bit-identical %s, per-mode residual %.2e "
             "(<= 1e-12)",
             decoupled ? "yes" : "no", identical ? "yes" : "no", residual));
}

void self_convergence() {
  for (const char* name : {"wavy_block", "starfish_torus"}) {
    std::vector<double> u[2];
    double err[2];
    int k = 0;
    for (int np : {40, 80}) {
      Problem p(curves::builtin(name, {}), options(ProblemType::Interior, np, 200));
      const auto r = run_manufactured(p);
      u[k] = r.u_num;
      err[k] = r.error;
      ++k;
    }
    const double diff = relative_linf_error(u[0], u[1]);
    report(name[0] == 'w' ? "T4" : "T5", diff <= 1e-8,
           fmt("%s interior self-convergence, modes=200: |u_40 - u_80| / |u_80| = %.2e (<= 1e-8); "
               "point-charge error %.2e / %.2e",
               name, diff, err[0], err[1]));
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  int threads = 1;
  for (int k = 1; k < argc; ++k) {
    if (!std::strcmp(argv[k], "--only") && k + 1 < argc) {
      only = argv[++k];
    } else if (!std::strcmp(argv[k], "--threads") && k + 1 < argc) {
      threads = std::atoi(argv[++k]);
      if (threads < 1) {
        std::fprintf(stderr, "--threads must be positive\n");
        return 2;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--only N] [--threads T]\n", argv[0]);
      return 2;
    }
  }
  auto want = [&](const char* id) { return only.empty() || only == id; };
  try {
    if (want("1")) criterion1();
    if (want("2")) criterion2();
    if (want("3")) criterion3();
    if (want("4")) criterion4();
    if (want("5")) criterion5();
    if (want("6")) criterion6();
    if (want("7")) criterion7();
    if (want("8")) criterion8(threads);
    if (want("9")) criterion9();
    if (want("10")) criterion10();
    if (want("T")) self_convergence();
  } catch (const std::exception& e) {
    std::printf("FAIL  -     aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d failing line(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
