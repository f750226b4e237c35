#include "axibie/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "axibie/error.hpp"

namespace axibie {

namespace detail {

AgmResult agm(double mu, double mu_complement) {
  double a = 1.0;
  double b = mu_complement;
  double s = 0.0;
  double weight = 1.0;  // 2^(j-1), starting at j = 1
  for (int j = 0; j < 64; ++j) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    s += weight * c * c;
    weight *= 2.0;
    if (std::abs(c) <= 0.5 * std::numeric_limits<double>::epsilon() * a) break;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return {K, K * (1.0 - 0.5 * mu * mu - s), s};
}

}  // namespace detail

EllipticKE elliptic_KE(double mu, double mu_complement) {
  if (!(mu >= 0.0 && mu <= 1.0 && mu_complement > 0.0 && mu_complement <= 1.0))
    throw DomainError("elliptic_KE: modulus must lie in [0, 1)");
  const auto r = detail::agm(mu, mu_complement);
  return {r.K, r.E};
}

EllipticKE elliptic_KE(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw DomainError("elliptic_KE: modulus must lie in [0, 1)");
  return elliptic_KE(mu, std::sqrt((1.0 - mu) * (1.0 + mu)));
}

double elliptic_E(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("elliptic_E: modulus must lie in [0, 1]");
  if (mu == 1.0) return 1.0;
  return elliptic_KE(mu).E;
}

namespace {

void check_chi(ChiValue chi) {
  if (!(chi.chi_minus_one > 0.0) || !std::isfinite(chi.chi))
    throw DomainError("Legendre Q: chi must exceed 1 (coincident kernel points)");
}

struct Seeds {
  double q0;  // Q_{-1/2}
  double q1;  // Q_{1/2}
  double e;   // E(mu)
};

Seeds seeds(ChiValue chi) {
  // mu^2 = 2/(chi+1), 1 - mu^2 = (chi-1)/(chi+1).
  const double cp1 = chi.chi_minus_one + 2.0;
  const double mu = std::sqrt(2.0 / cp1);
  const double mu_c = std::sqrt(chi.chi_minus_one / cp1);
  const auto r = detail::agm(mu, mu_c);
  // chi mu K - sqrt(2(chi+1)) E = (2/mu) K S, free of cancellation.
  return {mu * r.K, 2.0 / mu * r.K * r.S, r.E};
}

double acosh_chi(ChiValue chi) {
  const double x = chi.chi_minus_one;
  return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

}  // namespace

double LegendreQSequence::derivative(int n) const {
  if (n < 0) n = -n;
  if (n > max_degree()) throw DomainError("Legendre Q derivative: degree beyond the sequence");
  const double chi2m1 = chi_.chi_minus_one * (chi_.chi_minus_one + 2.0);
  if (n == 0) {
    // chi Q_{-1/2} - Q_{1/2} = sqrt(2(chi+1)) E.
    const double cp1 = chi_.chi_minus_one + 2.0;
    return -std::sqrt(2.0 * cp1) * e_value_ / (2.0 * chi2m1);
  }
  return (2.0 * n - 1.0) / (2.0 * chi2m1) * (chi_.chi * values_[n] - values_[n - 1]);
}

std::vector<double> LegendreQSequence::derivatives() const {
  std::vector<double> out(values_.size());
  for (int n = 0; n <= max_degree(); ++n) out[n] = derivative(n);
  return out;
}

namespace {

double forward_into(ChiValue chi, int N, double* q) {
  const Seeds s = seeds(chi);
  q[0] = s.q0;
  if (N >= 1) q[1] = s.q1;
  for (int n = 2; n <= N; ++n)
    q[n] = (4.0 * (n - 1) * chi.chi * q[n - 1] - (2.0 * n - 3.0) * q[n - 2]) / (2.0 * n - 1.0);
  return s.e;
}

double backward_into(ChiValue chi, int N, double* q) {
  const Seeds s = seeds(chi);
  const double eta = acosh_chi(chi);
  const int M = N + static_cast<int>(std::ceil(std::min(20.0 / eta, 1e8))) + 20;
  // Continued fraction for Q_{n-1/2} / Q_{n-3/2}, started from its large-n
  // limit; the ratios are parked in q[1..N] and turned into values below.
  double r = std::exp(-eta);
  for (int n = M; n >= 2; --n) {
    r = (2.0 * n - 3.0) / (4.0 * (n - 1) * chi.chi - (2.0 * n - 1.0) * r);
    if (n - 1 <= N) q[n - 1] = r;
  }
  q[0] = s.q0;
  for (int n = 1; n <= N; ++n) q[n] *= q[n - 1];
  return s.e;
}

void check_degree(int N) {
  if (N < 0) throw DomainError("Legendre Q: N must be nonnegative");
}

}  // namespace

double detail::legendre_q_into(ChiValue chi, int N, RecursionPolicy policy, double* q) {
  check_chi(chi);
  check_degree(N);
  switch (policy) {
    case RecursionPolicy::Forward:
      return forward_into(chi, N, q);
    case RecursionPolicy::Backward:
      return backward_into(chi, N, q);
    case RecursionPolicy::Auto:
      break;
  }
  if (N <= 1 || forward_recursion_is_safe(chi, N)) return forward_into(chi, N, q);
  return backward_into(chi, N, q);
}

LegendreQSequence legendre_q(ChiValue chi, int N, RecursionPolicy policy) {
  check_chi(chi);
  check_degree(N);
  std::vector<double> q(N + 1);
  const double e = detail::legendre_q_into(chi, N, policy, q.data());
  return {chi, std::move(q), e};
}

LegendreQSequence legendre_q_forward(ChiValue chi, int N) { return legendre_q(chi, N, RecursionPolicy::Forward); }

LegendreQSequence legendre_q_forward(double chi, int N) { return legendre_q_forward(ChiValue::from_chi(chi), N); }

LegendreQSequence legendre_q_backward(ChiValue chi, int N) { return legendre_q(chi, N, RecursionPolicy::Backward); }

LegendreQSequence legendre_q_backward(double chi, int N) { return legendre_q_backward(ChiValue::from_chi(chi), N); }

bool forward_recursion_is_safe(ChiValue chi, int N) {
  return (2.0 * N + 1.0) * acosh_chi(chi) <= std::log(1e4);
}

double legendre_q_derivative(double chi, int n, double q_n, double q_n_minus_1) {
  if (!(chi > 1.0)) throw DomainError("Legendre Q derivative: chi must exceed 1");
  return (2.0 * n - 1.0) / (2.0 * (chi * chi - 1.0)) * (chi * q_n - q_n_minus_1);
}

}  // namespace axibie
