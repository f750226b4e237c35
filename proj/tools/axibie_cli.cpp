// Batch driver for the axisymmetric Laplace solver.
//
//   axibie <command> [--config FILE] [--set key=value ...] [--out DIR]
//
// Commands: solve, convergence, timing, conditioning, quad-check, defaults.
// Exit status: 0 success, 1 numerical failure, 2 configuration error.

#include <axibie/axibie.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct ConfigFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Key {
  const char* name;
  const char* value;
  const char* help;
};

// Every accepted key with its default.
const Key kKeys[] = {
    {"curve", "sphere", "sphere | torus | starfish_torus | wavy_block | file:PATH"},
    {"curve_params", "", "comma-separated numeric parameters of a built-in curve"},
    {"problem", "interior", "interior | exterior"},
    {"n_panels", "10", "number of equal arc-length panels N_P"},
    {"n_gauss", "10", "Gauss nodes per panel N_G (only 10 is supported)"},
    {"modes", "100", "total Fourier modes 2 N_F + 1 (N_F = floor((modes - 1) / 2))"},
    {"eps", "", "truncation tolerance; when set, N_F is selected from the data instead of `modes`"},
    {"eps_grid", "1024", "azimuthal samples used to select N_F from eps"},
    {"m_theta", "0", "azimuthal grid for boundary data and density; 0 = default for N_F"},
    {"charges", "3", "number of random point charges"},
    {"seed", "1", "charge RNG seed"},
    {"targets", "50", "number of evaluation points"},
    {"recursion", "auto", "Legendre recursion: auto | forward | backward"},
    {"far_path", "recursion", "far-block kernel coefficients: recursion | fft"},
    {"near_path", "recursion", "near-block kernel coefficients: recursion | oracle"},
    {"fft_oversample", "4", "oversampling factor of the fft far path"},
    {"oracle_tol", "1e-10", "relative tolerance of the oracle near path"},
    {"explicit_inverse", "false", "store explicit inverses instead of LU factors"},
    {"rcond_threshold", "1e-14", "reciprocal condition below which a mode is rejected"},
    {"completion", "true", "exterior only: include the 1/(4 pi |x - x0|) term"},
    {"x0", "auto", "exterior reference point r,z or auto"},
    {"out", "axibie_out", "output directory"},
    {"write_sigma", "true", "solve: write the density grid"},
    {"convergence_panels", "5,10,20,40,80", "convergence: N_P values"},
    {"convergence_modes", "25,50,100,200,400", "convergence: 2 N_F + 1 values"},
    {"timing_panels", "5,10,20,40", "timing: N_P sweep"},
    {"timing_panels_modes", "200", "timing: 2 N_F + 1 held fixed during the N_P sweep"},
    {"timing_modes", "25,50,100,200,400", "timing: 2 N_F + 1 sweep"},
    {"timing_modes_panels", "10", "timing: N_P held fixed during the 2 N_F + 1 sweep"},
    {"timing_repeats", "3", "timing: runs per point, fastest kept"},
    {"timing_oracle", "false", "timing: also time the oracle near path"},
    {"quad_seed", "1", "quad-check: RNG seed of the random test polynomials"},
};

class Config {
 public:
  Config() {
    for (const auto& k : kKeys) values_[k.name] = k.value;
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigFailure("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (trim(line).empty()) continue;
      try {
        set(line);
      } catch (const ConfigFailure& e) {
        throw ConfigFailure(path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  void set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigFailure("expected key = value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    if (!values_.count(key)) throw ConfigFailure("unknown key '" + key + "'");
    values_[key] = trim(assignment.substr(eq + 1));
  }

  [[nodiscard]] const std::string& str(const std::string& key) const { return values_.at(key); }

  [[nodiscard]] long integer(const std::string& key, long lo, long hi) const {
    const std::string& v = str(key);
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw ConfigFailure(key + ": expected an integer, got '" + v + "'");
    if (x < lo || x > hi)
      throw ConfigFailure(key + ": " + v + " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  [[nodiscard]] double real(const std::string& key) const { return parse_real(key, str(key)); }

  [[nodiscard]] bool flag(const std::string& key) const {
    const std::string& v = str(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigFailure(key + ": expected true or false, got '" + v + "'");
  }

  [[nodiscard]] std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) out.push_back(parse_real(key, trim(item)));
    return out;
  }

  [[nodiscard]] std::vector<int> integers(const std::string& key, int lo) const {
    std::vector<int> out;
    for (double x : reals(key)) {
      if (x != std::floor(x) || x < lo)
        throw ConfigFailure(key + ": entries must be integers >= " + std::to_string(lo));
      out.push_back(static_cast<int>(x));
    }
    if (out.empty()) throw ConfigFailure(key + ": empty list");
    return out;
  }

  [[nodiscard]] std::string dump() const {
    std::ostringstream os;
    for (const auto& k : kKeys) {
      os << "# " << k.help << "\n" << k.name << " = " << str(k.name) << "\n";
    }
    return os.str();
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  static double parse_real(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(x))
      throw ConfigFailure(key + ": expected a number, got '" + v + "'");
    return x;
  }

  std::map<std::string, std::string> values_;
};

void check(axibie_status s) {
  if (s == AXIBIE_OK) return;
  const std::string msg = axibie_last_error();
  if (s == AXIBIE_ERR_NUMERICAL || s == AXIBIE_ERR_INTERNAL) throw NumericalFailure(msg);
  throw ConfigFailure(msg);
}

struct CurveHandle {
  axibie_curve* p = nullptr;
  ~CurveHandle() { axibie_curve_free(p); }
};

struct ProblemHandle {
  axibie_problem* p = nullptr;
  ProblemHandle() = default;
  ProblemHandle(const ProblemHandle&) = delete;
  ProblemHandle& operator=(const ProblemHandle&) = delete;
  ~ProblemHandle() { axibie_problem_free(p); }
};

std::unique_ptr<CurveHandle> make_curve(const Config& cfg) {
  auto c = std::make_unique<CurveHandle>();
  const std::string& spec = cfg.str("curve");
  if (spec.rfind("file:", 0) == 0) {
    check(axibie_curve_from_file(spec.substr(5).c_str(), &c->p));
  } else {
    const auto params = cfg.reals("curve_params");
    check(axibie_curve_builtin(spec.c_str(), params.data(), params.size(), &c->p));
  }
  return c;
}

int n_f_from_modes(int modes) { return (modes - 1) / 2; }

// Validates every problem-level key before any computation starts.
axibie_problem_options problem_options(const Config& cfg) {
  axibie_problem_options o;
  axibie_problem_options_init(&o);
  const std::string& type = cfg.str("problem");
  if (type == "interior") {
    o.type = AXIBIE_INTERIOR;
  } else if (type == "exterior") {
    o.type = AXIBIE_EXTERIOR;
  } else {
    throw ConfigFailure("problem: expected interior or exterior, got '" + type + "'");
  }
  o.n_panels = static_cast<int>(cfg.integer("n_panels", 1, 100000));
  if (cfg.integer("n_gauss", 1, 1000) != 10) throw ConfigFailure("n_gauss: only 10 is supported");
  o.n_f = n_f_from_modes(static_cast<int>(cfg.integer("modes", 1, 1000000)));
  o.m_theta = static_cast<int>(cfg.integer("m_theta", 0, 100000000));
  const std::string& rec = cfg.str("recursion");
  if (rec == "auto") {
    o.recursion = AXIBIE_RECURSION_AUTO;
  } else if (rec == "forward") {
    o.recursion = AXIBIE_RECURSION_FORWARD;
  } else if (rec == "backward") {
    o.recursion = AXIBIE_RECURSION_BACKWARD;
  } else {
    throw ConfigFailure("recursion: expected auto, forward or backward, got '" + rec + "'");
  }
  const std::string& far = cfg.str("far_path");
  if (far != "recursion" && far != "fft") throw ConfigFailure("far_path: expected recursion or fft");
  o.far_path = far == "fft" ? AXIBIE_PATH_FFT : AXIBIE_PATH_RECURSION;
  const std::string& near = cfg.str("near_path");
  if (near != "recursion" && near != "oracle") throw ConfigFailure("near_path: expected recursion or oracle");
  o.near_path = near == "oracle" ? AXIBIE_PATH_ORACLE : AXIBIE_PATH_RECURSION;
  o.fft_oversample = static_cast<int>(cfg.integer("fft_oversample", 1, 64));
  o.oracle_tol = cfg.real("oracle_tol");
  if (!(o.oracle_tol > 0.0)) throw ConfigFailure("oracle_tol: must be positive");
  o.explicit_inverse = cfg.flag("explicit_inverse") ? 1 : 0;
  o.rcond_threshold = cfg.real("rcond_threshold");
  if (!(o.rcond_threshold >= 0.0)) throw ConfigFailure("rcond_threshold: must be nonnegative");
  o.completion = cfg.flag("completion") ? 1 : 0;
  if (cfg.str("x0") != "auto") {
    const auto x0 = cfg.reals("x0");
    if (x0.size() != 2) throw ConfigFailure("x0: expected auto or two numbers r,z");
    if (o.type != AXIBIE_EXTERIOR) throw ConfigFailure("x0: only meaningful for exterior problems");
    o.has_x0 = 1;
    o.x0_r = x0[0];
    o.x0_z = x0[1];
  }
  return o;
}

axibie_manufactured_options charge_options(const Config& cfg) {
  axibie_manufactured_options m;
  axibie_manufactured_options_init(&m);
  m.charges = static_cast<int>(cfg.integer("charges", 1, 10000));
  m.seed = static_cast<unsigned>(cfg.integer("seed", 0, 4294967295L));
  m.targets = static_cast<int>(cfg.integer("targets", 1, 1000000));
  return m;
}

fs::path output_dir(const Config& cfg) {
  fs::path dir = cfg.str("out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigFailure("out: cannot create directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_csv(const fs::path& path, const std::string& schema, const std::string& header) {
  std::ofstream os(path);
  if (!os) throw ConfigFailure("cannot write " + path.string());
  os << "# schema: " << schema << "\n" << header << "\n";
  os.precision(17);
  return os;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

nlohmann::json timings_json(const axibie_timings& t) {
  return {{"T_setup", t.t_setup}, {"T_mat", t.t_mat}, {"T_inv", t.t_inv}, {"T_fft", t.t_fft}, {"T_apply", t.t_apply}};
}

struct RunResult {
  axibie_manufactured_summary summary{};
  axibie_timings timings{};
  int nodes = 0;
  int m_theta = 0;
  int n_f = 0;
  double min_rcond = 0.0;
  int min_rcond_mode = 0;
};

RunResult run_case(const CurveHandle& curve, const axibie_problem_options& o, const axibie_manufactured_options& m,
                   std::vector<double>* xyz = nullptr, std::vector<double>* u_num = nullptr,
                   std::vector<double>* u_exact = nullptr, std::vector<double>* clearance = nullptr,
                   std::vector<double>* sigma = nullptr) {
  ProblemHandle p;
  check(axibie_problem_create(curve.p, &o, &p.p));
  RunResult r;
  check(axibie_problem_sizes(p.p, &r.nodes, &r.m_theta, &r.n_f));
  if (xyz) xyz->resize(3 * static_cast<size_t>(m.targets));
  if (u_num) u_num->resize(m.targets);
  if (u_exact) u_exact->resize(m.targets);
  if (clearance) clearance->resize(m.targets);
  if (sigma) sigma->resize(static_cast<size_t>(r.nodes) * r.m_theta);
  auto data = [](std::vector<double>* v) { return v ? v->data() : nullptr; };
  check(axibie_problem_manufactured(p.p, &m, &r.summary, data(xyz), data(u_num), data(u_exact), data(clearance),
                                    data(sigma)));
  check(axibie_problem_timings(p.p, &r.timings));
  std::vector<double> rc(r.n_f + 1);
  check(axibie_problem_rcond(p.p, rc.data(), rc.size()));
  const auto it = std::min_element(rc.begin(), rc.end());
  r.min_rcond = *it;
  r.min_rcond_mode = static_cast<int>(it - rc.begin());
  return r;
}

int cmd_solve(const Config& cfg) {
  auto o = problem_options(cfg);
  const auto m = charge_options(cfg);
  const bool write_sigma = cfg.flag("write_sigma");
  const auto dir = output_dir(cfg);
  auto curve = make_curve(cfg);

  nlohmann::json truncation = nullptr;
  if (!cfg.str("eps").empty()) {
    const double eps = cfg.real("eps");
    if (!(eps > 0.0)) throw ConfigFailure("eps: must be positive");
    const int grid = static_cast<int>(cfg.integer("eps_grid", 3, 1 << 24));
    int n_f = 0, converged = 0;
    double tail = 0.0;
    check(axibie_select_modes(curve->p, &o, &m, eps, grid, &n_f, &tail, &converged));
    if (!converged)
      std::cerr << "warning: data spectrum has not decayed to eps within " << grid << " samples; using N_F = " << n_f
                << "\n";
    o.n_f = n_f;
    truncation = {{"eps", eps}, {"n_f", n_f}, {"tail", tail}, {"converged", converged != 0}};
  }

  std::vector<double> xyz, u_num, u_exact, clearance, sigma;
  const RunResult r = run_case(*curve, o, m, &xyz, &u_num, &u_exact, &clearance, write_sigma ? &sigma : nullptr);

  {
    auto os = open_csv(dir / "potential.csv", "axibie.potential/1", "x,y,z,u_num,u_exact,abs_error,clearance");
    for (int k = 0; k < r.summary.target_count; ++k)
      os << xyz[3 * k] << ',' << xyz[3 * k + 1] << ',' << xyz[3 * k + 2] << ',' << u_num[k] << ',' << u_exact[k]
         << ',' << std::abs(u_num[k] - u_exact[k]) << ',' << clearance[k] << '\n';
  }
  if (write_sigma) {
    ProblemHandle p;
    check(axibie_problem_create(curve->p, &o, &p.p));
    std::vector<double> r_nodes(r.nodes), z_nodes(r.nodes);
    check(axibie_problem_nodes(p.p, r_nodes.data(), z_nodes.data(), nullptr));
    auto os = open_csv(dir / "sigma.csv", "axibie.sigma/1", "node,r,z,m,theta,sigma");
    for (int i = 0; i < r.nodes; ++i)
      for (int k = 0; k < r.m_theta; ++k)
        os << i << ',' << r_nodes[i] << ',' << z_nodes[i] << ',' << k << ',' << 2.0 * M_PI * k / r.m_theta << ','
           << sigma[static_cast<size_t>(i) * r.m_theta + k] << '\n';
  }

  nlohmann::json summary = {
      {"schema", "axibie.summary/1"},
      {"curve", cfg.str("curve")},
      {"problem", cfg.str("problem")},
      {"n_panels", o.n_panels},
      {"n_gauss", 10},
      {"n_f", r.n_f},
      {"modes", 2 * r.n_f + 1},
      {"m_theta", r.m_theta},
      {"nodes", r.nodes},
      {"charges", m.charges},
      {"seed", m.seed},
      {"targets", r.summary.target_count},
      {"relative_linf_error", r.summary.error},
      {"min_clearance_panels", r.summary.min_clearance},
      {"min_rcond", r.min_rcond},
      {"min_rcond_mode", r.min_rcond_mode},
      {"timings", timings_json(r.timings)},
      {"truncation", truncation},
  };
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
  std::cout << "relative l-inf error " << sci(r.summary.error) << "  (N_P = " << o.n_panels
            << ", 2N_F+1 = " << 2 * r.n_f + 1 << ", " << r.summary.target_count << " targets, min clearance "
            << r.summary.min_clearance << " panels)\n";
  std::cout << "T_setup " << r.timings.t_setup << "  T_mat " << r.timings.t_mat << "  T_inv " << r.timings.t_inv
            << "  T_fft " << r.timings.t_fft << "  T_apply " << r.timings.t_apply << "\n";
  if (r.min_rcond < 1e-10)
    std::cerr << "warning: mode " << r.min_rcond_mode << " is ill-conditioned (rcond " << sci(r.min_rcond)
              << "); results are unreliable\n";
  if (r.summary.min_clearance < 1.0)
    std::cerr << "warning: some targets are closer than one panel length to the surface\n";
  return 0;
}

int cmd_convergence(const Config& cfg) {
  const auto base = problem_options(cfg);
  const auto m = charge_options(cfg);
  const auto panels = cfg.integers("convergence_panels", 1);
  const auto modes = cfg.integers("convergence_modes", 1);
  const auto dir = output_dir(cfg);
  auto curve = make_curve(cfg);

  std::string header = "n_panels";
  for (int c : modes) header += "," + std::to_string(c);
  auto os = open_csv(dir / "convergence.csv", "axibie.convergence/1", header);
  std::cout << header << "\n";
  for (int np : panels) {
    std::string row = std::to_string(np);
    for (int c : modes) {
      auto o = base;
      o.n_panels = np;
      o.n_f = n_f_from_modes(c);
      row += "," + sci(run_case(*curve, o, m).summary.error);
    }
    os << row << "\n";
    std::cout << row << std::endl;
  }
  return 0;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::nan("");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_timing(const Config& cfg) {
  const auto base = problem_options(cfg);
  const auto m = charge_options(cfg);
  const auto panels = cfg.integers("timing_panels", 1);
  const int panels_modes = static_cast<int>(cfg.integer("timing_panels_modes", 1, 1000000));
  const auto modes = cfg.integers("timing_modes", 1);
  const int modes_panels = static_cast<int>(cfg.integer("timing_modes_panels", 1, 100000));
  const int repeats = static_cast<int>(cfg.integer("timing_repeats", 1, 100));
  const bool oracle = cfg.flag("timing_oracle");
  const auto dir = output_dir(cfg);
  auto curve = make_curve(cfg);

  auto os = open_csv(dir / "timing.csv", "axibie.timing/1",
                     "sweep,n_panels,modes,n_f,t_setup,t_mat,t_inv,t_fft,t_apply,t_mat_oracle,error");
  auto measure = [&](const char* sweep, int np, int c) {
    auto o = base;
    o.n_panels = np;
    o.n_f = n_f_from_modes(c);
    axibie_timings best{};
    double error = 0.0;
    for (int k = 0; k < repeats; ++k) {
      const RunResult r = run_case(*curve, o, m);
      error = r.summary.error;
      if (k == 0 || r.timings.t_mat < best.t_mat) best = r.timings;
    }
    std::string oracle_col;
    if (oracle) {
      auto oo = o;
      oo.near_path = AXIBIE_PATH_ORACLE;
      ProblemHandle p;
      check(axibie_problem_create(curve->p, &oo, &p.p));
      check(axibie_problem_assemble(p.p));
      axibie_timings t{};
      check(axibie_problem_timings(p.p, &t));
      oracle_col = std::to_string(t.t_mat);
    }
    os << sweep << ',' << np << ',' << c << ',' << o.n_f << ',' << best.t_setup << ',' << best.t_mat << ','
       << best.t_inv << ',' << best.t_fft << ',' << best.t_apply << ',' << oracle_col << ',' << error << '\n';
    std::cout << sweep << " N_P=" << np << " 2N_F+1=" << c << "  T_mat " << best.t_mat << "  T_inv " << best.t_inv
              << (oracle ? "  T_mat(oracle) " + oracle_col : "") << std::endl;
    return best.t_mat;
  };

  std::vector<double> xp, yp, xm, ym;
  for (int np : panels) {
    xp.push_back(np);
    yp.push_back(measure("panels", np, panels_modes));
  }
  for (int c : modes) {
    xm.push_back(c);
    ym.push_back(measure("modes", modes_panels, c));
  }
  const double sp = fit_slope(xp, yp), sm = fit_slope(xm, ym);
  auto fit = open_csv(dir / "timing_fit.csv", "axibie.timing_fit/1", "sweep,held_fixed,slope");
  fit << "panels," << panels_modes << ',' << sp << "\nmodes," << modes_panels << ',' << sm << '\n';
  std::cout << "log-log slope of T_mat vs N_P: " << sp << "\nlog-log slope of T_mat vs 2N_F+1: " << sm << "\n";
  return 0;
}

int cmd_conditioning(const Config& cfg) {
  auto o = problem_options(cfg);
  o.keep_matrices = 1;
  const auto dir = output_dir(cfg);
  auto curve = make_curve(cfg);
  ProblemHandle p;
  check(axibie_problem_create(curve->p, &o, &p.p));
  std::vector<double> smax(o.n_f + 1), smin(o.n_f + 1);
  check(axibie_problem_conditioning(p.p, smax.data(), smin.data(), smax.size()));
  auto os = open_csv(dir / "conditioning.csv", "axibie.conditioning/1", "n,sigma_max,sigma_min,cond");
  for (int n = -o.n_f; n <= o.n_f; ++n) {
    const int a = std::abs(n);
    os << n << ',' << smax[a] << ',' << smin[a] << ',' << smax[a] / smin[a] << '\n';
  }
  for (int n = 0; n <= o.n_f; ++n)
    std::cout << "n=" << n << "  sigma_max " << sci(smax[n]) << "  sigma_min " << sci(smin[n]) << "  cond "
              << sci(smax[n] / smin[n]) << "\n";
  return 0;
}

int cmd_quad_check(const Config& cfg) {
  const auto seed = static_cast<unsigned>(cfg.integer("quad_seed", 0, 4294967295L));
  const auto dir = output_dir(cfg);
  size_t count = 0;
  check(axibie_quad_residuals(seed, nullptr, 0, &count));
  std::vector<axibie_quad_residual> res(count);
  check(axibie_quad_residuals(seed, res.data(), res.size(), &count));
  const std::string header = "rule,integrand,parameter,rule_value,reference,relative_error";
  auto os = open_csv(dir / "quad_check.csv", "axibie.quad_check/1", header);
  std::cout << "# schema: axibie.quad_check/1\n" << header << "\n";
  std::cout.precision(17);
  for (const auto& r : res) {
    std::ostringstream line;
    line.precision(17);
    line << r.rule << ',' << r.integrand << ',' << r.parameter << ',' << r.rule_value << ',' << r.reference << ','
         << r.relative_error;
    os << line.str() << '\n';
    std::cout << line.str() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct solver for Laplace Dirichlet problems on axisymmetric surfaces"};
  app.require_subcommand(1);
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
  app.add_option("--config,-c", config_file, "flat key = value configuration file");
  app.add_option("--set,-s", overrides, "override one key, key=value (repeatable)");
  app.add_option("--out,-o", out_dir, "output directory (same as --set out=DIR)");
  app.fallthrough();
  auto* solve = app.add_subcommand("solve", "solve one point-charge problem and report the error");
  auto* conv = app.add_subcommand("convergence", "error table over N_P x (2 N_F + 1)");
  auto* timing = app.add_subcommand("timing", "T_mat scaling sweeps in N_P and N_F");
  auto* cond = app.add_subcommand("conditioning", "extreme singular values of I + A_n per mode");
  auto* quad = app.add_subcommand("quad-check", "exactness residuals of the embedded quadrature rules");
  auto* defaults = app.add_subcommand("defaults", "print every configuration key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (const char* env = std::getenv("AXIBIE_NUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || n < 1) {
      std::cerr << "error: AXIBIE_NUM_THREADS must be a positive integer, got '" << env << "'\n";
      return kExitConfig;
    }
    axibie_set_num_threads(static_cast<int>(n));
  }

  try {
    Config cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    for (const auto& s : overrides) cfg.set(s);
    if (!out_dir.empty()) cfg.set("out=" + out_dir);
    if (*defaults) {
      std::cout << Config().dump();
      return 0;
    }
    if (*solve) return cmd_solve(cfg);
    if (*conv) return cmd_convergence(cfg);
    if (*timing) return cmd_timing(cfg);
    if (*cond) return cmd_conditioning(cfg);
    if (*quad) return cmd_quad_check(cfg);
  } catch (const ConfigFailure& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
