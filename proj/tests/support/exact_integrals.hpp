#pragma once

// Closed-form integrals of polynomial and polynomial-times-log integrands,
// evaluated in MPFR so that the cancellation in the expansions is harmless.

#include <boost/multiprecision/mpfr.hpp>

#include <vector>

namespace exact {

using mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>, boost::multiprecision::et_off>;

// int_0^L u^j log u du
inline mp u_pow_log(int j, const mp& L) {
  if (L == 0) return 0;
  const mp jp1 = j + 1;
  return pow(L, j + 1) * (log(L) / jp1 - 1 / (jp1 * jp1));
}

inline mp binomial(int k, int j) {
  mp b = 1;
  for (int i = 1; i <= j; ++i) b = b * (k - j + i) / i;
  return b;
}

/// int_{-1}^{1} sum_k c_k x^k dx
inline double poly(const std::vector<double>& c) {
  mp s = 0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (k % 2 == 0) s += mp(c[k]) * 2 / mp(static_cast<int>(k) + 1);
  return s.convert_to<double>();
}

/// int_{-1}^{1} (sum_k p_k x^k + sum_k q_k x^k log|x - c|) dx, |c| < 1.
inline double poly_log_abs(const std::vector<double>& p, const std::vector<double>& q, double c_in) {
  const mp c = c_in;
  mp s = mp(poly(p));
  for (std::size_t kk = 0; kk < q.size(); ++kk) {
    const int k = static_cast<int>(kk);
    // x = c + u on [c, 1]; x = c - u on [-1, c].
    mp right = 0, left = 0;
    for (int j = 0; j <= k; ++j) {
      const mp b = binomial(k, j) * pow(c, k - j);
      right += b * u_pow_log(j, 1 - c);
      left += b * ((j % 2) ? -1 : 1) * u_pow_log(j, 1 + c);
    }
    s += mp(q[kk]) * (right + left);
  }
  return s.convert_to<double>();
}

/// int_0^1 (sum_k f_k x^k + sum_k g_k x^k log(x + a)) dx, a > 0.
inline double poly_log_shift(const std::vector<double>& f, const std::vector<double>& g, double a_in) {
  const mp a = a_in;
  mp s = 0;
  for (std::size_t k = 0; k < f.size(); ++k) s += mp(f[k]) / mp(static_cast<int>(k) + 1);
  // u = x + a on [a, 1 + a]; x^k = sum_j C(k,j) u^j (-a)^(k-j).
  for (std::size_t kk = 0; kk < g.size(); ++kk) {
    const int k = static_cast<int>(kk);
    mp t = 0;
    for (int j = 0; j <= k; ++j)
      t += binomial(k, j) * pow(-a, k - j) * (u_pow_log(j, 1 + a) - u_pow_log(j, a));
    s += mp(g[kk]) * t;
  }
  return s.convert_to<double>();
}

}  // namespace exact
