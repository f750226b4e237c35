#include "axibie/modal_kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "axibie/error.hpp"
#include "axibie/quadrature.hpp"
#include "fft.hpp"

namespace axibie {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);
const double kInvSqrt8Pi3 = 1.0 / std::sqrt(8.0 * kPi * kPi * kPi);

thread_local std::vector<double> q_scratch;

double* scratch(int N) {
  if (static_cast<int>(q_scratch.size()) < N + 1) q_scratch.resize(N + 1);
  return q_scratch.data();
}

void double_layer_into(const KernelPairGeometry& g, int N, RecursionPolicy policy, double* out) {
  double* q = scratch(N);
  const double e = detail::legendre_q_into(g.chi, N, policy, q);
  const double cm1 = g.chi.chi_minus_one;
  const double chi2m1 = cm1 * (cm1 + 2.0);
  const double pref = kInvSqrt8Pi3 / std::sqrt(g.r * g.source.r);
  const double G = g.normal_dchi;
  const double half_nr = 0.5 * g.source.nr / g.source.r;
  const double inv = 1.0 / (2.0 * chi2m1);
  // n = 0: chi Q_{-1/2} - Q_{1/2} = sqrt(2 (chi + 1)) E.
  const double dq0 = -std::sqrt(2.0 * (cm1 + 2.0)) * e * inv;
  out[0] = pref * (dq0 * G - half_nr * q[0]);
  for (int n = 1; n <= N; ++n) {
    const double dq = (2.0 * n - 1.0) * inv * (g.chi.chi * q[n] - q[n - 1]);
    out[n] = pref * (dq * G - half_nr * q[n]);
  }
}

void ring_into(double r, double z, Vec2 x0, int N, RecursionPolicy policy, double* out) {
  if (!(r > 0.0)) throw DomainError("reference ring term: target must have r > 0");
  const double dr = r - x0[0];
  const double dz = z - x0[1];
  if (x0[0] <= 0.0) {
    out[0] = 1.0 / (2.0 * kSqrt2Pi * std::hypot(r, dz));
    for (int n = 1; n <= N; ++n) out[n] = 0.0;
    return;
  }
  const ChiValue chi{1.0 + (dr * dr + dz * dz) / (2.0 * r * x0[0]), (dr * dr + dz * dz) / (2.0 * r * x0[0])};
  const double pref = kInvSqrt8Pi3 / std::sqrt(r * x0[0]);
  detail::legendre_q_into(chi, N, policy, out);
  for (int n = 0; n <= N; ++n) out[n] *= pref;
}

}  // namespace

KernelPairGeometry KernelPairGeometry::make(double r, double z, const CurvePoint& source) {
  if (!(r > 0.0) || !(source.r > 0.0)) throw DomainError("kernel pair: r and r' must be positive");
  KernelPairGeometry g;
  g.r = r;
  g.z = z;
  g.source = source;
  const double dr = source.r - r;
  const double dz = source.z - z;
  const double d2 = dr * dr + dz * dz;
  const double rr = r * source.r;
  const double cm1 = d2 / (2.0 * rr);
  g.chi = {1.0 + cm1, cm1};
  g.mu = std::sqrt(2.0 / (cm1 + 2.0));
  g.dchi_drs = (source.r * source.r - r * r - dz * dz) / (2.0 * rr * source.r);
  g.dchi_dzs = dz / rr;
  const double ndelta = source.nr * dr + source.nz * dz;
  g.normal_dchi = (2.0 * source.r * ndelta - source.nr * d2) / (2.0 * rr * source.r);
  return g;
}

std::vector<double> single_layer_modal(const KernelPairGeometry& g, int N, RecursionPolicy policy) {
  std::vector<double> out(N + 1);
  detail::legendre_q_into(g.chi, N, policy, out.data());
  const double pref = kInvSqrt8Pi3 / std::sqrt(g.r * g.source.r);
  for (double& v : out) v *= pref;
  return out;
}

std::vector<double> double_layer_modal_interior(const KernelPairGeometry& g, int N, RecursionPolicy policy) {
  std::vector<double> out(N + 1);
  double_layer_into(g, N, policy, out.data());
  return out;
}

std::vector<double> reference_ring_modal(double r, double z, Vec2 x0, int N, RecursionPolicy policy) {
  std::vector<double> out(N + 1);
  ring_into(r, z, x0, N, policy, out.data());
  return out;
}

std::vector<double> double_layer_modal_exterior(const KernelPairGeometry& g, Vec2 x0, int N,
                                                RecursionPolicy policy) {
  std::vector<double> out = double_layer_modal_interior(g, N, policy);
  const std::vector<double> ring = reference_ring_modal(g.r, g.z, x0, N, policy);
  for (int n = 0; n <= N; ++n) out[n] = ring[n] - out[n];
  return out;
}

int fft_friendly_size(int minimum) {
  for (int m = std::max(minimum, 1);; ++m) {
    int k = m;
    for (int p : {2, 3, 5, 7})
      while (k % p == 0) k /= p;
    if (k == 1) return m;
  }
}

std::vector<std::complex<double>> kernel_coeffs_fft(const std::function<double(double)>& kernel, int n_f,
                                                    int oversample) {
  if (n_f < 0 || oversample < 1) throw ConfigError("kernel_coeffs_fft: need N_F >= 0 and oversample >= 1");
  const int M = fft_friendly_size(oversample * (2 * n_f + 1));
  std::vector<double> samples(M);
  for (int m = 0; m < M; ++m) samples[m] = kernel(2.0 * kPi * m / M);
  std::vector<std::complex<double>> X(M / 2 + 1);
  fft::forward_real(samples, X);
  std::vector<std::complex<double>> out(2 * n_f + 1);
  const double scale = kSqrt2Pi / M;
  for (int n = 0; n <= n_f; ++n) {
    out[n_f + n] = scale * X[n];
    out[n_f - n] = scale * std::conj(X[n]);
  }
  return out;
}

void ModalKernel::oracle_modes(double r, double z, const CurvePoint& source, int N, double* out,
                               double tol) const {
  auto k = [&](double t) { return azimuthal(r, z, source, t); };
  const auto base = adaptive_integrate_ex(k, 0.0, kPi, tol);
  const double floor = std::max(1e-2 * tol, 200 * std::numeric_limits<double>::epsilon()) * base.l1;
  const double scale = 2.0 / kSqrt2Pi;
  out[0] = scale * base.value;
  for (int n = 1; n <= N; ++n) {
    auto f = [&](double t) { return std::cos(n * t) * k(t); };
    out[n] = scale * adaptive_integrate_ex(f, 0.0, kPi, tol, {}, floor).value;
  }
}

void ModalKernel::fft_modes(double r, double z, const CurvePoint& source, int N, double* out,
                            int oversample) const {
  const int M = fft_friendly_size(oversample * (2 * N + 1));
  thread_local std::vector<double> samples;
  thread_local std::vector<std::complex<double>> X;
  samples.resize(M);
  X.resize(M / 2 + 1);
  for (int m = 0; m < M; ++m) samples[m] = azimuthal(r, z, source, 2.0 * kPi * m / M);
  fft::forward_real(samples, X);
  const double scale = kSqrt2Pi / M;
  for (int n = 0; n <= N; ++n) out[n] = scale * X[n].real();
}

void LaplaceSingleLayer::modes(double r, double z, const CurvePoint& source, int N, double* out) const {
  const auto g = KernelPairGeometry::make(r, z, source);
  detail::legendre_q_into(g.chi, N, policy_, out);
  const double pref = kInvSqrt8Pi3 / std::sqrt(r * source.r);
  for (int n = 0; n <= N; ++n) out[n] *= pref;
}

double LaplaceSingleLayer::azimuthal(double r, double z, const CurvePoint& source, double theta) const {
  const double s = std::sin(0.5 * theta);
  const double dr = source.r - r, dz = source.z - z;
  const double dist2 = dr * dr + dz * dz + 4.0 * r * source.r * s * s;
  return 1.0 / (4.0 * kPi * std::sqrt(dist2));
}

void LaplaceDoubleLayer::modes(double r, double z, const CurvePoint& source, int N, double* out) const {
  double_layer_into(KernelPairGeometry::make(r, z, source), N, policy_, out);
}

double LaplaceDoubleLayer::azimuthal(double r, double z, const CurvePoint& source, double theta) const {
  const double s = std::sin(0.5 * theta);
  const double s2 = s * s;
  const double dr = source.r - r, dz = source.z - z;
  const double dist2 = dr * dr + dz * dz + 4.0 * r * source.r * s2;
  const double num = -(source.nr * dr + source.nz * dz) - 2.0 * source.nr * r * s2;
  return num / (4.0 * kPi * dist2 * std::sqrt(dist2));
}

void LaplaceExteriorKernel::modes(double r, double z, const CurvePoint& source, int N, double* out) const {
  double_layer_into(KernelPairGeometry::make(r, z, source), N, policy_, out);
  for (int n = 0; n <= N; ++n) out[n] = -out[n];
  if (!completion_) return;
  thread_local std::vector<double> ring;
  ring.resize(N + 1);
  ring_into(r, z, x0_, N, policy_, ring.data());
  for (int n = 0; n <= N; ++n) out[n] += ring[n];
}

double LaplaceExteriorKernel::azimuthal(double r, double z, const CurvePoint& source, double theta) const {
  double v = -LaplaceDoubleLayer().azimuthal(r, z, source, theta);
  if (completion_) {
    const double s = std::sin(0.5 * theta);
    const double dr = x0_[0] - r, dz = x0_[1] - z;
    v += 1.0 / (4.0 * kPi * std::sqrt(dr * dr + dz * dz + 4.0 * r * x0_[0] * s * s));
  }
  return v;
}

void ScaledKernel::modes(double r, double z, const CurvePoint& source, int N, double* out) const {
  base_->modes(r, z, source, N, out);
  for (int n = 0; n <= N; ++n) out[n] *= factor_;
}

double ScaledKernel::azimuthal(double r, double z, const CurvePoint& source, double theta) const {
  return factor_ * base_->azimuthal(r, z, source, theta);
}

void ScaledKernel::oracle_modes(double r, double z, const CurvePoint& source, int N, double* out,
                                double tol) const {
  base_->oracle_modes(r, z, source, N, out, tol);
  for (int n = 0; n <= N; ++n) out[n] *= factor_;
}

}  // namespace axibie
