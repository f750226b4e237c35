#pragma once

// Extended-precision reference values for smooth 2 pi-periodic integrands.
//
// c_n = int_0^{2 pi} f(t) cos(n t) dt by the trapezoid rule, evaluated in
// MPFR arithmetic and refined by doubling the sample count until two
// successive estimates agree for every n. The trapezoid rule converges
// geometrically for analytic periodic integrands, and the working precision
// is raised with the expected decay so that coefficients far below the size
// of the integrand are still resolved.

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

struct CosineCoefficients {
  std::vector<double> values;  // c_0 .. c_N
  int samples = 0;
  unsigned digits = 0;
};

/// Sets the working precision for coefficients up to degree N decaying like
/// exp(-decay n). Must precede the construction of any mp value that takes
/// part in the computation.
inline unsigned set_precision(int N, double decay) {
  const auto digits = static_cast<unsigned>(std::ceil(N * std::max(decay, 0.0) / std::log(10.0))) + 30u;
  mp::default_precision(digits);
  return digits;
}

/// `f` is evaluated at t = 2 pi m / M. `decay` is the geometric decay rate
/// of c_n (c_n ~ exp(-decay n)) and sets the first M.
inline CosineCoefficients cosine_coefficients(const std::function<mp(const mp&)>& f, int N, double decay,
                                              double rel_tol = 1e-14, int max_samples = 1 << 22) {
  const double eta = std::max(decay, 1e-9);
  const unsigned digits = mp::default_precision();

  int M = 64;
  while (M < 2 * N + 2 || M * eta < 10.0 * std::log(10.0)) M *= 2;

  auto estimate = [&](int m_count) {
    const mp pi = boost::math::constants::pi<mp>();
    std::vector<mp> cos_tab(m_count), fv(m_count);
    for (int m = 0; m < m_count; ++m) {
      const mp t = 2 * pi * m / m_count;
      cos_tab[m] = cos(t);
      fv[m] = f(t);
    }
    std::vector<mp> c(N + 1);
    for (int n = 0; n <= N; ++n) {
      mp s = 0;
      long long idx = 0;
      for (int m = 0; m < m_count; ++m) {
        s += fv[m] * cos_tab[idx];
        idx += n;
        if (idx >= m_count) idx -= m_count;
      }
      c[n] = s * 2 * pi / m_count;
    }
    return c;
  };

  std::vector<mp> prev = estimate(M);
  while (true) {
    if (2 * M > max_samples) throw std::runtime_error("oracle: trapezoid refinement did not converge");
    std::vector<mp> next = estimate(2 * M);
    M *= 2;
    bool done = true;
    for (int n = 0; n <= N && done; ++n) {
      const mp diff = abs(next[n] - prev[n]);
      if (diff > rel_tol * abs(next[n])) done = false;
    }
    prev = std::move(next);
    if (done) break;
  }
  CosineCoefficients out;
  out.samples = M;
  out.digits = digits;
  out.values.resize(N + 1);
  for (int n = 0; n <= N; ++n) out.values[n] = prev[n].convert_to<double>();
  return out;
}

/// Q_{n-1/2}(chi) = int_0^pi cos(n t) / sqrt(2 (chi - cos t)) dt for n = 0..N,
/// with chi = 1 + chi_minus_one.
inline std::vector<double> legendre_q(double chi_minus_one, int N) {
  const double chi = 1.0 + chi_minus_one;
  const double eta = std::acosh(chi) > 0 ? std::acosh(chi) : std::sqrt(2.0 * chi_minus_one);
  set_precision(N, eta);
  const mp cm1 = chi_minus_one;
  auto f = [&](const mp& t) {
    const mp s = sin(t / 2);
    return 1 / sqrt(2 * (cm1 + 2 * s * s));
  };
  auto c = cosine_coefficients(f, N, eta);
  for (double& v : c.values) v *= 0.5;
  return c.values;
}

/// Modes (1/sqrt(2 pi)) int_0^{2 pi} e^{-i n theta} k(theta) d theta of the
/// double-layer kernel n' . (x - x') / (4 pi |x - x'|^3) with x = (r, 0, z)
/// and x' = (r' cos theta, r' sin theta, z'), n' = (nr cos theta, nr sin theta, nz).
inline std::vector<double> double_layer_modes(double r, double z, double rs, double zs, double nr, double nz,
                                              int N) {
  const double dz = z - zs;
  const double chi_m1 = ((r - rs) * (r - rs) + dz * dz) / (2.0 * r * rs);
  const double eta = std::max(std::acosh(1.0 + chi_m1), std::sqrt(2.0 * chi_m1) * 0.999);
  set_precision(N, eta);
  const mp R = r, Rs = rs, Z = dz, NR = nr, NZ = nz;
  const mp four_pi = 4 * boost::math::constants::pi<mp>();
  const mp cm1 = mp((R - Rs) * (R - Rs) + Z * Z) / (2 * R * Rs);
  auto k = [&](const mp& t) {
    const mp s = sin(t / 2);
    const mp d2 = 2 * R * Rs * (cm1 + 2 * s * s);
    const mp num = NR * (R * cos(t) - Rs) + NZ * Z;
    return num / (four_pi * d2 * sqrt(d2));
  };
  auto c = cosine_coefficients(k, N, eta);
  const double scale = 1.0 / std::sqrt(2.0 * M_PI);
  for (double& v : c.values) v *= scale;
  return c.values;
}

}  // namespace oracle
