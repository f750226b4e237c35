#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "axibie/geometry.hpp"
#include "axibie/special_functions.hpp"

namespace axibie {

/// Target (r, z) and source point on the generating curve, with
/// chi = (r^2 + r'^2 + (z - z')^2) / (2 r r') and its derivatives in r', z'.
struct KernelPairGeometry {
  double r = 0.0;
  double z = 0.0;
  CurvePoint source;
  ChiValue chi;
  double mu = 0.0;        // sqrt(2 / (chi + 1))
  double dchi_drs = 0.0;  // d chi / d r'
  double dchi_dzs = 0.0;  // d chi / d z'
  /// n' . grad' chi, formed without cancellation.
  double normal_dchi = 0.0;

  /// Throws DomainError when r or r' is not positive.
  static KernelPairGeometry make(double r, double z, const CurvePoint& source);
};

/// Coefficients k_n = (1/sqrt(2 pi)) int_0^{2 pi} e^{-i n theta} k(theta) d theta
/// for n = 0..N of the even Laplace kernels (k_{-n} = k_n).
std::vector<double> single_layer_modal(const KernelPairGeometry& g, int N,
                                       RecursionPolicy policy = RecursionPolicy::Auto);
std::vector<double> double_layer_modal_interior(const KernelPairGeometry& g, int N,
                                                RecursionPolicy policy = RecursionPolicy::Auto);
/// -d_n^(i) + s_n(r, z; r0, z0), where the reference point x0 = (r0, z0)
/// is a ring turning with the source azimuth (for r0 = 0 a single point,
/// contributing to n = 0 only).
std::vector<double> double_layer_modal_exterior(const KernelPairGeometry& g, Vec2 x0, int N,
                                                RecursionPolicy policy = RecursionPolicy::Auto);

/// s_n(r, z; r0, z0) of the reference ring alone.
std::vector<double> reference_ring_modal(double r, double z, Vec2 x0, int N,
                                         RecursionPolicy policy = RecursionPolicy::Auto);

/// Trapezoidal Fourier coefficients of a 2 pi-periodic kernel on
/// M = fft_friendly_size(oversample (2 N_F + 1)) samples, normalized like
/// k_n above. Returned for n = -N_F..N_F at index n + N_F.
std::vector<std::complex<double>> kernel_coeffs_fft(const std::function<double(double)>& kernel, int n_f,
                                                    int oversample = 4);

/// Smallest 2^a 3^b 5^c 7^d that is >= minimum.
int fft_friendly_size(int minimum);

/// Azimuthally invariant kernel in modal form: the pipeline evaluates
/// `modes`, tests and the oracle path use `azimuthal`.
class ModalKernel {
 public:
  virtual ~ModalKernel() = default;

  /// out[n] = k_n(target; source), n = 0..N.
  virtual void modes(double r, double z, const CurvePoint& source, int N, double* out) const = 0;
  /// The surface kernel k(x, x') with x at azimuth 0 and x' at azimuth theta.
  [[nodiscard]] virtual double azimuthal(double r, double z, const CurvePoint& source, double theta) const = 0;
  /// Modes by adaptive integration of `azimuthal`, one integral per n.
  virtual void oracle_modes(double r, double z, const CurvePoint& source, int N, double* out,
                            double tol = 1e-12) const;
  /// Modes by FFT of `azimuthal`.
  virtual void fft_modes(double r, double z, const CurvePoint& source, int N, double* out,
                         int oversample = 4) const;
};

using KernelPtr = std::shared_ptr<const ModalKernel>;

class LaplaceSingleLayer final : public ModalKernel {
 public:
  explicit LaplaceSingleLayer(RecursionPolicy policy = RecursionPolicy::Auto) : policy_(policy) {}
  void modes(double r, double z, const CurvePoint& source, int N, double* out) const override;
  [[nodiscard]] double azimuthal(double r, double z, const CurvePoint& source, double theta) const override;

 private:
  RecursionPolicy policy_;
};

/// n(x') . (x - x') / (4 pi |x - x'|^3).
class LaplaceDoubleLayer final : public ModalKernel {
 public:
  explicit LaplaceDoubleLayer(RecursionPolicy policy = RecursionPolicy::Auto) : policy_(policy) {}
  void modes(double r, double z, const CurvePoint& source, int N, double* out) const override;
  [[nodiscard]] double azimuthal(double r, double z, const CurvePoint& source, double theta) const override;

 private:
  RecursionPolicy policy_;
};

/// -n(x') . (x - x') / (4 pi |x - x'|^3) + 1 / (4 pi |x - x0|), the second
/// term omitted when `completion` is false.
class LaplaceExteriorKernel final : public ModalKernel {
 public:
  LaplaceExteriorKernel(Vec2 x0, bool completion = true, RecursionPolicy policy = RecursionPolicy::Auto)
      : x0_(x0), completion_(completion), policy_(policy) {}
  void modes(double r, double z, const CurvePoint& source, int N, double* out) const override;
  [[nodiscard]] double azimuthal(double r, double z, const CurvePoint& source, double theta) const override;
  [[nodiscard]] Vec2 reference_point() const noexcept { return x0_; }
  [[nodiscard]] bool completion() const noexcept { return completion_; }

 private:
  Vec2 x0_;
  bool completion_;
  RecursionPolicy policy_;
};

/// factor * base.
class ScaledKernel final : public ModalKernel {
 public:
  ScaledKernel(KernelPtr base, double factor) : base_(std::move(base)), factor_(factor) {}
  void modes(double r, double z, const CurvePoint& source, int N, double* out) const override;
  [[nodiscard]] double azimuthal(double r, double z, const CurvePoint& source, double theta) const override;
  void oracle_modes(double r, double z, const CurvePoint& source, int N, double* out,
                    double tol = 1e-12) const override;

 private:
  KernelPtr base_;
  double factor_;
};

}  // namespace axibie
