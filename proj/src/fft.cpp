#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace axibie::fft {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<int, bool>, fftw_plan> plans;

  fftw_plan get(int m, bool forward) {
    std::lock_guard lock(mutex);
    auto it = plans.find({m, forward});
    if (it != plans.end()) return it->second;
    std::vector<double> re(m);
    std::vector<fftw_complex> co(m / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = forward ? fftw_plan_dft_r2c_1d(m, re.data(), co.data(), flags)
                          : fftw_plan_dft_c2r_1d(m, co.data(), re.data(), flags);
    if (!p) throw std::runtime_error("FFTW planning failed");
    plans.emplace(std::make_pair(m, forward), p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void forward_real(std::span<const double> x, std::span<std::complex<double>> X) {
  const int m = static_cast<int>(x.size());
  if (static_cast<int>(X.size()) < m / 2 + 1) throw std::invalid_argument("fft: output too short");
  fftw_plan p = cache().get(m, true);
  fftw_execute_dft_r2c(p, const_cast<double*>(x.data()), reinterpret_cast<fftw_complex*>(X.data()));
}

void inverse_real(std::span<const std::complex<double>> X, std::span<double> x) {
  const int m = static_cast<int>(x.size());
  if (static_cast<int>(X.size()) < m / 2 + 1) throw std::invalid_argument("fft: input too short");
  // c2r overwrites its input.
  std::vector<std::complex<double>> scratch(X.begin(), X.begin() + m / 2 + 1);
  fftw_plan p = cache().get(m, false);
  fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(scratch.data()), x.data());
}

}  // namespace axibie::fft
