#include <doctest.h>

#include <axibie/error.hpp>
#include <axibie/geometry.hpp>
#include <axibie/quadrature.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace axibie;
using doctest::Approx;

namespace {

double pi = std::numbers::pi;

void check_unit_normal(const CurvePoint& p) { CHECK(std::abs(p.nr * p.nr + p.nz * p.nz - 1.0) <= 1e-12); }

}  // namespace

TEST_CASE("sphere curve points") {
  auto c = curves::sphere();
  CHECK(c->length() == Approx(pi).epsilon(1e-14));
  CHECK(c->topology() == Topology::Open);

  auto eq = c->eval(pi / 2);
  CHECK(std::abs(eq.r - 1.0) < 1e-14);
  CHECK(std::abs(eq.z) < 1e-14);
  CHECK(std::abs(eq.nr - 1.0) < 1e-14);
  CHECK(std::abs(eq.nz) < 1e-14);
  CHECK(eq.jacobian == 1.0);

  auto pole = c->eval(0.0);
  CHECK(std::abs(pole.r) < 1e-15);
  CHECK(std::abs(pole.z - 1.0) < 1e-15);
  check_unit_normal(pole);
}

TEST_CASE("evaluation outside the parameter range") {
  auto c = curves::sphere();
  CHECK_THROWS_AS((void)c->eval(-1e-9), DomainError);
  CHECK_THROWS_AS((void)c->eval(pi + 1e-6), DomainError);
  CHECK_THROWS_AS((void)c->eval(std::nan("")), DomainError);
  CHECK_NOTHROW((void)c->eval(pi));
}

TEST_CASE("torus normals match rotated finite-difference tangents") {
  for (auto c : {curves::starfish_torus(2.0, 0.5, 0.0), curves::starfish_torus()}) {
    const double T = c->length();
    for (int k = 0; k < 17; ++k) {
      const double t = T * (k + 0.37) / 17.0;
      const double h = 1e-5;
      auto a = c->position(t + h), b = c->position(t - h);
      double tr = (a[0] - b[0]) / (2 * h), tz = (a[1] - b[1]) / (2 * h);
      const double len = std::hypot(tr, tz);
      CHECK(len == Approx(1.0).epsilon(1e-8));
      tr /= len;
      tz /= len;
      auto p = c->eval(t);
      check_unit_normal(p);
      // Either rotation is a normal; the outward one points away from the centroid
      // for the plain torus, and in all cases it is perpendicular to the tangent.
      CHECK(std::abs(p.nr * tr + p.nz * tz) < 1e-8);
      CHECK(std::abs(std::abs(p.nr * tz - p.nz * tr) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("generating curve invariants") {
  for (auto name : {"sphere", "torus", "starfish_torus", "wavy_block"}) {
    CAPTURE(name);
    auto c = curves::builtin(name, {});
    const double T = c->length();
    for (int k = 0; k <= 200; ++k) {
      const double t = std::min(T, T * k / 200.0);
      auto tan = c->tangent(t);
      CHECK(std::abs(std::hypot(tan[0], tan[1]) - 1.0) <= 1e-10);
      auto p = c->eval(t);
      CHECK(p.r >= 0.0);
      check_unit_normal(p);
    }
    if (c->topology() == Topology::Closed) {
      auto a = c->position(0.0), b = c->position(T);
      CHECK(std::hypot(a[0] - b[0], a[1] - b[1]) <= 1e-12);
    } else {
      CHECK(std::abs(c->position(0.0)[0]) <= 1e-10);
      CHECK(std::abs(c->position(T)[0]) <= 1e-10);
    }
  }
}

TEST_CASE("discretization of the sphere") {
  auto disc = build_discretization(curves::sphere(), 5);
  CHECK(disc.size() == 50);
  CHECK(disc.panel_length() == Approx(pi / 5).epsilon(1e-14));
  for (int p = 0; p < 5; ++p) CHECK(disc.panel(p).end - disc.panel(p).start == Approx(pi / 5).epsilon(1e-13));
  CHECK(disc.panel(0).start == 0.0);
  CHECK(disc.panel(4).end == Approx(pi).epsilon(1e-15));

  double wsum = 0.0, rsum = 0.0;
  for (int i = 0; i < disc.size(); ++i) {
    wsum += disc.weights()[i];
    rsum += disc.weights()[i] * disc.point(i).r;
  }
  CHECK(std::abs(wsum - pi) <= 1e-12);
  CHECK(std::abs(rsum - 2.0) <= 1e-12);
}

TEST_CASE("unsupported rule size and panel count") {
  CHECK_THROWS_AS(build_discretization(curves::sphere(), 5, 8), ConfigError);
  CHECK_THROWS_AS(build_discretization(curves::sphere(), 0), ConfigError);
}

TEST_CASE("panel nodes are the affinely mapped Gauss nodes") {
  const auto& g = gauss_rule();
  for (auto c : {curves::sphere(), curves::starfish_torus()}) {
    auto disc = build_discretization(c, 7);
    for (int p = 0; p < disc.panel_count(); ++p) {
      auto pan = disc.panel(p);
      const double mid = 0.5 * (pan.start + pan.end), half = 0.5 * (pan.end - pan.start);
      for (int i = 0; i < 10; ++i) {
        const double t = disc.params()[p * 10 + i];
        CHECK(std::abs((t - mid) / half - g.nodes[i]) <= 1e-14);
        CHECK(disc.weights()[p * 10 + i] == Approx(g.weights[i] * half).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("normals of convex curves point away from the centroid") {
  for (auto c : {curves::sphere(), curves::sphere(2.5), curves::starfish_torus(2.0, 0.5, 0.0)}) {
    auto disc = build_discretization(c, 8);
    auto cen = c->centroid();
    for (const auto& p : disc.points()) CHECK(p.nr * (p.r - cen[0]) + p.nz * (p.z - cen[1]) > 0.0);
  }
}

TEST_CASE("numerically integrated speed over each panel equals the panel length") {
  for (auto name : {"sphere", "starfish_torus", "wavy_block"}) {
    auto c = curves::builtin(name, {});
    auto disc = build_discretization(c, 9);
    for (int p = 0; p < disc.panel_count(); ++p) {
      auto pan = disc.panel(p);
      // Speed with respect to t from a central difference of the position.
      auto speed = [&](double t) {
        const double h = 1e-6 * disc.panel_length();
        const double a = std::max(pan.start, t - h), b = std::min(pan.end, t + h);
        auto pa = c->position(a), pb = c->position(b);
        return std::hypot(pb[0] - pa[0], pb[1] - pa[1]) / (b - a);
      };
      const double len = adaptive_integrate([&](double t) { return std::hypot(c->tangent(t)[0], c->tangent(t)[1]); },
                                            pan.start, pan.end, 1e-13);
      CHECK(std::abs(len - disc.panel_length()) <= 1e-10);
      CHECK(speed(0.5 * (pan.start + pan.end)) == Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("adjacency") {
  auto open = build_discretization(curves::sphere(), 5);
  CHECK(open.adjacent(0, 1));
  CHECK(!open.adjacent(0, 4));
  CHECK(open.previous_panel(0) == -1);
  CHECK(open.next_panel(4) == -1);
  auto closed = build_discretization(curves::starfish_torus(), 5);
  CHECK(closed.adjacent(0, 4));
  CHECK(closed.previous_panel(0) == 4);
  CHECK(closed.next_panel(4) == 0);
  CHECK(!closed.adjacent(2, 2));
}

TEST_CASE("surface points") {
  auto a = surface_point(1, 0, 0);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);
  CHECK(a[2] == 0.0);
  auto b = surface_point(1, 0, pi);
  CHECK(b[0] == -1.0);
  CHECK(std::abs(b[1]) < 1e-15);
  auto c = surface_point(2, 3, pi / 2);
  CHECK(std::abs(c[0]) < 1e-15);
  CHECK(c[1] == 2.0);
  CHECK(c[2] == 3.0);
}

TEST_CASE("spline through samples of the unit circle") {
  std::vector<Vec2> pts;
  const int n = 64;
  for (int k = 0; k <= n; ++k) {
    const double phi = pi * k / n;
    pts.push_back({std::sin(phi), std::cos(phi)});
  }
  pts.front()[0] = 0.0;
  pts.back()[0] = 0.0;
  auto c = curves::spline(pts);
  CHECK(c->topology() == Topology::Open);
  CHECK(c->length() == Approx(pi).epsilon(1e-6));
  auto p = c->eval(c->length() / 2);
  CHECK(p.r == Approx(1.0).epsilon(1e-6));
  CHECK(p.nr == Approx(1.0).epsilon(1e-5));

  std::vector<Vec2> loop;
  for (int k = 0; k <= n; ++k) {
    const double phi = 2 * pi * k / n;
    loop.push_back({2.0 + 0.5 * std::cos(phi), 0.5 * std::sin(phi)});
  }
  loop.back() = loop.front();
  auto t = curves::spline(loop);
  CHECK(t->topology() == Topology::Closed);
  CHECK(t->length() == Approx(pi).epsilon(1e-6));
  CHECK(t->contains(2.0, 0.0));
  CHECK(!t->contains(1.0, 0.0));
}

TEST_CASE("invalid spline samples") {
  CHECK_THROWS_AS(curves::spline({{0.0, 1.0}, {1.0, 0.0}, {0.5, -1.0}}), ConfigError);
  CHECK_THROWS_AS(curves::spline({{0.0, 1.0}}), ConfigError);
}

TEST_CASE("sample files") {
  const auto dir = std::filesystem::temp_directory_path() / "axibie_geometry_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "circle.txt";
  {
    std::ofstream f(good);
    f << "# unit circle\n\n";
    for (int k = 0; k <= 40; ++k) {
      const double phi = pi * k / 40;
      f << (k == 0 || k == 40 ? 0.0 : std::sin(phi)) << ' ' << std::cos(phi) << '\n';
    }
  }
  auto c = curves::load_samples(good.string());
  CHECK(c->length() == Approx(pi).epsilon(1e-5));

  const auto bad = dir / "bad.txt";
  {
    std::ofstream f(bad);
    f << "0 1\nnot numbers\n";
  }
  for (auto path : {bad, dir / "missing.txt"}) {
    try {
      (void)curves::load_samples(path.string());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(path.string()) != std::string::npos);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("built-in names and parameters") {
  CHECK(curves::builtin("sphere", std::vector<double>{2.0})->length() == Approx(2 * pi));
  CHECK(curves::builtin("torus", std::vector<double>{3.0, 1.0})->length() == Approx(2 * pi));
  CHECK_THROWS_AS(curves::builtin("cube", {}), ConfigError);
}

TEST_CASE("containment and distance") {
  auto s = curves::sphere();
  CHECK(s->contains(0.3, 0.2));
  CHECK(!s->contains(1.2, 0.0));
  CHECK(s->distance_to(2.0, 0.0) == Approx(1.0).epsilon(1e-4));
  CHECK(s->bounding_radius() == Approx(1.0).epsilon(1e-12));
}
