#pragma once

#include <complex>
#include <span>

namespace axibie::fft {

/// X[k] = sum_m x[m] exp(-2 pi i k m / M) for k = 0..M/2, M = x.size().
void forward_real(std::span<const double> x, std::span<std::complex<double>> X);

/// x[m] = sum_{k=0}^{M-1} X[k] exp(2 pi i k m / M) for Hermitian X given by
/// its first M/2 + 1 entries.
void inverse_real(std::span<const std::complex<double>> X, std::span<double> x);

}  // namespace axibie::fft
