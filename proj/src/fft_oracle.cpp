#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>

#include "dickman/exact_dist.hpp"
#include "pmf_internal.hpp"

namespace dickman {
namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

}  // namespace

Pmf tn_pmf_fft(int n, int n_cap) {
  detail::check_tn_request(n, n_cap);
  const std::int64_t end = static_cast<std::int64_t>(n) * (n + 1) / 2;
  std::int64_t size = 1;
  while (size <= end) size *= 2;
  const std::int64_t half = size / 2 + 1;

  std::unique_ptr<fftw_complex[], FftwFree> spectrum(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half)));
  std::unique_ptr<double[], FftwFree> out(
      static_cast<double*>(fftw_malloc(sizeof(double) * size)));

  // The pmf is real, so frequencies 0..S/2 determine the transform.
  // Angles are reduced exactly as (j k mod S) before scaling.
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < half; ++j) {
    Complex prod{1.0, 0.0};
    for (int k = 1; k <= n; ++k) {
      const double angle = 2.0 * kPi * static_cast<double>((j * k) % size) / size;
      prod *= 1.0 + expm1i(angle) / static_cast<double>(k);
    }
    // c2r computes sum_j X_j e^{+2 pi i j m / S}; conjugating the input
    // gives the e^{-2 pi i j m / S} inversion.
    spectrum[j][0] = prod.real();
    spectrum[j][1] = -prod.imag();
  }

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(size), spectrum.get(), out.get(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  Pmf pmf;
  pmf.offset = 1;
  pmf.n = n;
  pmf.kind = PmfKind::FftOracle;
  pmf.probs.resize(static_cast<std::size_t>(end));
  const double scale = 1.0 / static_cast<double>(size);
  for (std::int64_t m = 1; m <= end; ++m) pmf.probs[static_cast<std::size_t>(m - 1)] = out[m] * scale;
  detail::finalize_probs(pmf);
  return pmf;
}

}  // namespace dickman
