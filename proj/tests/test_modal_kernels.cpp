#include <doctest.h>

#include <axibie/error.hpp>
#include <axibie/modal_kernels.hpp>

#include "support/mp_oracle.hpp"

#include <cmath>
#include <memory>
#include <numbers>

using namespace axibie;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Source on the unit ring with normal (nr, nz), placed so that chi - 1 = cm1
// for the target (1, 0).
CurvePoint source_for(double cm1, double nr = 0.6, double nz = 0.8) {
  CurvePoint s;
  s.r = 1.0;
  s.z = std::sqrt(2.0 * cm1);
  s.nr = nr;
  s.nz = nz;
  return s;
}

Vec3 minus(Vec3 a, Vec3 b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double norm(Vec3 a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

}  // namespace

TEST_CASE("pair geometry") {
  CurvePoint s;
  s.r = 1.3;
  s.z = -0.4;
  s.nr = 0.6;
  s.nz = 0.8;
  const double r = 0.7, z = 0.5;
  auto g = KernelPairGeometry::make(r, z, s);
  const double chi = (r * r + s.r * s.r + (z - s.z) * (z - s.z)) / (2 * r * s.r);
  CHECK(rel(g.chi.chi, chi) <= 1e-15);
  CHECK(rel(g.chi.chi_minus_one, chi - 1) <= 1e-14);
  CHECK(rel(g.mu, std::sqrt(2 / (chi + 1))) <= 1e-15);
  CHECK(rel(g.dchi_drs, (s.r * s.r - r * r - (z - s.z) * (z - s.z)) / (2 * r * s.r * s.r)) <= 1e-14);
  CHECK(rel(g.dchi_dzs, (s.z - z) / (r * s.r)) <= 1e-14);
  CHECK(rel(g.normal_dchi, s.nr * g.dchi_drs + s.nz * g.dchi_dzs) <= 1e-13);

  // chi - 1 of nearly coincident points is not lost to cancellation.
  CurvePoint c;
  c.r = 1.0;
  c.z = 1e-9;
  c.nz = 1.0;
  auto close = KernelPairGeometry::make(1.0, 0.0, c);
  CHECK(rel(close.chi.chi_minus_one, 0.5e-18) <= 1e-14);

  CHECK_THROWS_AS(KernelPairGeometry::make(0.0, 0.0, s), DomainError);
  s.r = 0.0;
  CHECK_THROWS_AS(KernelPairGeometry::make(1.0, 0.0, s), DomainError);
}

TEST_CASE("single layer closed form") {
  CurvePoint s;
  s.r = 1.0;
  s.z = 2.0;
  auto g = KernelPairGeometry::make(1.0, 0.0, s);
  CHECK(g.chi.chi == doctest::Approx(3.0).epsilon(1e-15));
  auto sn = single_layer_modal(g, 100);
  const double mu = std::sqrt(0.5);
  CHECK(rel(sn[0], mu * elliptic_KE(mu).K / std::sqrt(8 * pi * pi * pi)) <= 1e-15);
  for (int n = 1; n <= 100; ++n) CHECK(sn[n] < sn[n - 1]);

  auto q = oracle::legendre_q(2.0, 100);
  for (int n = 0; n <= 100; ++n) CHECK(rel(sn[n], q[n] / std::sqrt(8 * pi * pi * pi)) <= 1e-11);

  LaplaceSingleLayer k;
  std::vector<double> adaptive(21);
  k.oracle_modes(1.0, 0.0, s, 20, adaptive.data(), 1e-13);
  // The azimuthal integral resolves modes only down to rounding of the n = 0 integrand.
  for (int n = 0; n <= 20; ++n) CHECK(std::abs(sn[n] - adaptive[n]) <= 1e-11 * std::abs(sn[n]) + 1e-13 * sn[0]);
}

TEST_CASE("double layer closed form matches the extended-precision oracle") {
  for (double cm1 : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1.0, 9.0}) {
    const int N = cm1 < 1e-4 ? 120 : 200;
    for (auto [nr, nz] : {std::pair{0.6, 0.8}, std::pair{0.0, 1.0}}) {
      auto s = source_for(cm1, nr, nz);
      auto d = double_layer_modal_interior(KernelPairGeometry::make(1.0, 0.0, s), N);
      auto ref = oracle::double_layer_modes(1.0, 0.0, s.r, s.z, nr, nz, N);
      CAPTURE(cm1);
      CAPTURE(nr);
      for (int n = 0; n <= N; ++n) {
        if (ref[n] == 0.0) continue;
        CHECK(rel(d[n], ref[n]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("exterior kernel modes") {
  const Vec2 x0{0.4, 0.3};
  for (double cm1 : {1e-3, 0.2, 4.0}) {
    const int N = 100;
    auto s = source_for(cm1);
    auto g = KernelPairGeometry::make(1.0, 0.0, s);
    auto de = double_layer_modal_exterior(g, x0, N);
    auto di = double_layer_modal_interior(g, N);
    auto ring = reference_ring_modal(1.0, 0.0, x0, N);
    for (int n = 0; n <= N; ++n) CHECK(std::abs(de[n] + di[n] - ring[n]) <= 1e-15 * (std::abs(di[n]) + std::abs(ring[n])));

    // Full integrand in extended precision.
    const double eta = std::min(std::acosh(1.0 + cm1), std::acosh((1.0 + x0[0] * x0[0] + x0[1] * x0[1]) / (2 * x0[0])));
    oracle::set_precision(N, eta);
    using oracle::mp;
    const mp R = 1, Rs = s.r, Z = -s.z, NR = s.nr, NZ = s.nz, R0 = x0[0], Z0 = x0[1];
    const mp four_pi = 4 * boost::math::constants::pi<mp>();
    auto f = [&](const mp& t) {
      const mp c = cos(t);
      const mp snt = sin(t / 2);
      const mp d2 = (R - Rs) * (R - Rs) + Z * Z + 4 * R * Rs * snt * snt;
      const mp dl = (NR * (R * c - Rs) + NZ * Z) / (four_pi * d2 * sqrt(d2));
      const mp e2 = R * R + R0 * R0 - 2 * R * R0 * c + Z0 * Z0;
      return -dl + 1 / (four_pi * sqrt(e2));
    };
    auto ref = oracle::cosine_coefficients(f, N, eta).values;
    CAPTURE(cm1);
    for (int n = 0; n <= N; ++n) {
      const double v = ref[n] / std::sqrt(2 * pi);
      // de = ring - di, so it carries the absolute error of the larger term.
      CHECK(std::abs(de[n] - v) <= 1e-10 * (std::abs(v) + std::abs(di[n])));
    }
  }
}

TEST_CASE("reference point on the axis contributes to mode zero only") {
  const Vec2 x0{0.0, 0.25};
  auto ring = reference_ring_modal(1.0, 0.5, x0, 12);
  const double dist = std::hypot(1.0, 0.25);
  CHECK(rel(ring[0], std::sqrt(2 * pi) / (4 * pi * dist)) <= 1e-14);
  for (int n = 1; n <= 12; ++n) CHECK(ring[n] == 0.0);

  auto s = source_for(0.1);
  auto g = KernelPairGeometry::make(1.0, 0.0, s);
  auto de = double_layer_modal_exterior(g, Vec2{0.0, 0.3}, 12);
  auto di = double_layer_modal_interior(g, 12);
  for (int n = 1; n <= 12; ++n) CHECK(de[n] == -di[n]);
}

TEST_CASE("azimuthal kernels agree with the three-dimensional formulas") {
  CurvePoint s;
  s.r = 1.2;
  s.z = 0.3;
  s.nr = 0.28;
  s.nz = 0.96;
  const double r = 0.8, z = -0.2;
  LaplaceSingleLayer sl;
  LaplaceDoubleLayer dl;
  const Vec2 x0{0.5, 0.1};
  LaplaceExteriorKernel ex(x0);
  LaplaceExteriorKernel ex_plain(x0, false);
  for (double th : {0.0, 0.7, 2.0, 4.5}) {
    const Vec3 x = surface_point(r, z, 0.0);
    const Vec3 y = surface_point(s.r, s.z, th);
    const Vec3 ny = {s.nr * std::cos(th), s.nr * std::sin(th), s.nz};
    const Vec3 d = minus(x, y);
    const double dist = norm(d);
    const double dlv = (ny[0] * d[0] + ny[1] * d[1] + ny[2] * d[2]) / (4 * pi * dist * dist * dist);
    const double ringv = 1.0 / (4 * pi * norm(minus(x, surface_point(x0[0], x0[1], th))));
    CHECK(rel(sl.azimuthal(r, z, s, th), 1.0 / (4 * pi * dist)) <= 1e-14);
    CHECK(rel(dl.azimuthal(r, z, s, th), dlv) <= 1e-13);
    CHECK(rel(ex.azimuthal(r, z, s, th), -dlv + ringv) <= 1e-13);
    CHECK(rel(ex_plain.azimuthal(r, z, s, th), -dlv) <= 1e-13);
    CHECK(dl.azimuthal(r, z, s, -th) == doctest::Approx(dl.azimuthal(r, z, s, th)).epsilon(1e-14));
  }
}

TEST_CASE("FFT coefficients") {
  auto c = kernel_coeffs_fft([](double) { return 2.5; }, 6);
  REQUIRE(c.size() == 13);
  CHECK(std::abs(c[6] - std::sqrt(2 * pi) * 2.5) <= 1e-14);
  for (int k = 0; k < 13; ++k)
    if (k != 6) CHECK(std::abs(c[k]) <= 1e-14);

  auto h = kernel_coeffs_fft([](double t) { return std::cos(3 * t); }, 6);
  for (int n = -6; n <= 6; ++n) {
    const double expect = std::abs(n) == 3 ? std::sqrt(pi / 2) : 0.0;
    CHECK(std::abs(h[n + 6] - expect) <= 1e-14);
  }

  CHECK(fft_friendly_size(1) == 1);
  CHECK(fft_friendly_size(11) == 12);
  CHECK(fft_friendly_size(401) == 405);
  CHECK(fft_friendly_size(1000) == 1000);
  CHECK(fft_friendly_size(1009) == 1024);
}

TEST_CASE("FFT path agrees with the recursion path for separated pairs") {
  LaplaceDoubleLayer dl;
  for (int n_f : {12, 50, 100}) {
    CurvePoint s;
    s.r = 1.5;
    s.z = 1.8;
    s.nr = 0.6;
    s.nz = -0.8;
    std::vector<double> rec(n_f + 1), fft(n_f + 1);
    dl.modes(0.9, 0.1, s, n_f, rec.data());
    dl.fft_modes(0.9, 0.1, s, n_f, fft.data(), 4);
    double scale = 0.0;
    for (double v : rec) scale = std::max(scale, std::abs(v));
    for (int n = 0; n <= n_f; ++n) {
      CHECK(std::abs(rec[n] - fft[n]) <= 1e-12 * scale);
      if (std::abs(rec[n]) > 1e-6 * scale) CHECK(rel(fft[n], rec[n]) <= 1e-10);
    }
  }
}

TEST_CASE("mode decay and oracle equivalence near the diagonal") {
  LaplaceDoubleLayer dl;
  for (double cm1 : {1e-4, 1e-2, 1.0}) {
    auto s = source_for(cm1);
    std::vector<double> d(301);
    dl.modes(1.0, 0.0, s, 300, d.data());
    int last_increase = 0;
    for (int n = 1; n <= 300; ++n)
      if (std::abs(d[n]) > std::abs(d[n - 1])) last_increase = n;
    CHECK(last_increase < 280);

    std::vector<double> a(11);
    dl.oracle_modes(1.0, 0.0, s, 10, a.data(), 1e-13);
    for (int n = 0; n <= 10; ++n) CHECK(rel(d[n], a[n]) <= 1e-9);
  }
}

TEST_CASE("scaled kernels") {
  auto base = std::make_shared<LaplaceDoubleLayer>();
  ScaledKernel k(base, -2.0);
  auto s = source_for(0.05);
  std::vector<double> a(9), b(9);
  base->modes(1.0, 0.0, s, 8, a.data());
  k.modes(1.0, 0.0, s, 8, b.data());
  for (int n = 0; n <= 8; ++n) CHECK(b[n] == -2.0 * a[n]);
  CHECK(k.azimuthal(1.0, 0.0, s, 0.3) == -2.0 * base->azimuthal(1.0, 0.0, s, 0.3));
}

TEST_CASE("recursion choice does not change the modes") {
  auto s = source_for(1e-5);
  auto g = KernelPairGeometry::make(1.0, 0.0, s);
  auto a = double_layer_modal_interior(g, 100, RecursionPolicy::Forward);
  auto b = double_layer_modal_interior(g, 100, RecursionPolicy::Backward);
  for (int n = 0; n <= 100; ++n) CHECK(rel(a[n], b[n]) <= 1e-9);
}
