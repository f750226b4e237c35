#pragma once

#include <vector>

namespace axibie {

struct EllipticKE {
  double K = 0.0;
  double E = 0.0;
};

/// Complete elliptic integrals of the first and second kind for modulus mu
/// (not the parameter m = mu^2), by the arithmetic-geometric mean. Throws
/// DomainError for mu outside [0, 1] and for K at mu = 1 (E(1) = 1 is
/// returned with K = +inf only through `elliptic_E`).
EllipticKE elliptic_KE(double mu);
double elliptic_E(double mu);

/// Same, with the complementary modulus sqrt(1 - mu^2) supplied separately so
/// that mu close to 1 keeps full relative accuracy.
EllipticKE elliptic_KE(double mu, double mu_complement);

/// chi with chi - 1 carried separately; near-coincident kernel points make
/// chi - 1 tiny and it must not be recovered by subtraction.
struct ChiValue {
  double chi = 0.0;
  double chi_minus_one = 0.0;

  [[nodiscard]] static ChiValue from_chi(double chi) { return {chi, chi - 1.0}; }
};

enum class RecursionPolicy { Auto, Forward, Backward };

/// Q_{n-1/2}(chi) for n = 0..N. Negative indices map to positive ones
/// (Q_{-n-1/2} = Q_{n-1/2}).
class LegendreQSequence {
 public:
  LegendreQSequence() = default;
  /// `e_value` is E(mu) at mu = sqrt(2/(chi+1)), used for the n = 0 derivative.
  LegendreQSequence(ChiValue chi, std::vector<double> values, double e_value)
      : chi_(chi), values_(std::move(values)), e_value_(e_value) {}

  [[nodiscard]] double chi() const noexcept { return chi_.chi; }
  [[nodiscard]] ChiValue chi_value() const noexcept { return chi_; }
  [[nodiscard]] int max_degree() const noexcept { return static_cast<int>(values_.size()) - 1; }
  /// Q_{n-1/2} for |n| <= N.
  [[nodiscard]] double operator[](int n) const { return values_.at(n < 0 ? -n : n); }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  /// dQ_{n-1/2}/dchi for |n| <= N.
  [[nodiscard]] double derivative(int n) const;
  [[nodiscard]] std::vector<double> derivatives() const;

 private:
  ChiValue chi_;
  std::vector<double> values_;
  double e_value_ = 0.0;
};

/// Seeds Q_{-1/2} = mu K(mu), Q_{1/2} = chi mu K - sqrt(2(chi+1)) E with
/// mu = sqrt(2/(chi+1)), then the three-term recursion upward. Accurate while
/// exp(2 N acosh chi) stays moderate. Throws DomainError for chi <= 1.
LegendreQSequence legendre_q_forward(ChiValue chi, int N);
LegendreQSequence legendre_q_forward(double chi, int N);

/// Miller's algorithm: the recursion run downward (as a continued fraction
/// for Q_{n-1/2}/Q_{n-3/2}) from a start index M > N, normalized by
/// Q_{-1/2} = mu K(mu). Stable for every chi > 1; values that underflow are 0.
LegendreQSequence legendre_q_backward(ChiValue chi, int N);
LegendreQSequence legendre_q_backward(double chi, int N);

/// Forward when (2N+1) acosh(chi) <= ln(1e4), Miller otherwise (Auto), or
/// the forced direction.
LegendreQSequence legendre_q(ChiValue chi, int N, RecursionPolicy policy = RecursionPolicy::Auto);
bool forward_recursion_is_safe(ChiValue chi, int N);

/// dQ_{n-1/2}/dchi = (2n-1)/(2(chi^2-1)) (chi Q_{n-1/2} - Q_{n-3/2}).
/// Throws DomainError for chi <= 1.
double legendre_q_derivative(double chi, int n, double q_n, double q_n_minus_1);

namespace detail {
/// K, E and S = sum_{j>=1} 2^(j-1) c_j^2 from the AGM, where
/// E = K (1 - mu^2/2 - S).
struct AgmResult {
  double K;
  double E;
  double S;
};
AgmResult agm(double mu, double mu_complement);
/// Writes Q_{n-1/2}(chi), n = 0..N, to q[0..N] by the chosen policy and
/// returns E(mu). No allocation; the hot path of kernel evaluation.
double legendre_q_into(ChiValue chi, int N, RecursionPolicy policy, double* q);
}  // namespace detail

}  // namespace axibie
