#pragma once

#include <algorithm>
#include <cstdint>

#include "dickman/exact_dist.hpp"

namespace dickman::detail {

inline constexpr double kNegativeClampThreshold = 1e-15;

void check_tn_request(int n, int n_cap);

// Clamps entries in [-1e-15, 0) to zero and counts them; throws
// NumericalError on anything more negative.
void finalize_probs(Pmf& pmf);

// One step k >= 2 of the T recursion on p[0 .. k(k+1)/2), index m - 1.
// Descending m so that p[m - k] is still the old value when read.
inline void bernoulli_step_in_place(double* p, int k) {
  const std::int64_t prev_end = static_cast<std::int64_t>(k) * (k - 1) / 2;
  const std::int64_t end = static_cast<std::int64_t>(k) * (k + 1) / 2;
  const std::int64_t lo = std::min<std::int64_t>(k, prev_end);
  const std::int64_t jump_lo = std::max<std::int64_t>(k, prev_end);
  const double q = 1.0 / k;
  const double r = 1.0 - q;
  for (std::int64_t i = end - 1; i >= jump_lo; --i) p[i] = p[i - k] * q;
  for (std::int64_t i = prev_end; i < jump_lo; ++i) p[i] = 0.0;
  for (std::int64_t i = prev_end - 1; i >= lo; --i) p[i] = p[i] * r + p[i - k] * q;
  for (std::int64_t i = lo - 1; i >= 0; --i) p[i] *= r;
}

}  // namespace dickman::detail
