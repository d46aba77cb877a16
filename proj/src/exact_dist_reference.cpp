#include <cmath>
#include <string>

#include "dickman/exact_dist.hpp"
#include "pmf_internal.hpp"

namespace dickman::reference {

Pmf tn_pmf(int n, int n_cap) {
  detail::check_tn_request(n, n_cap);
  Pmf pmf;
  pmf.offset = 1;
  pmf.n = n;
  pmf.kind = PmfKind::BernoulliT;
  pmf.probs.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  pmf.probs[0] = 1.0;
  for (int k = 2; k <= n; ++k) detail::bernoulli_step_in_place(pmf.probs.data(), k);
  return pmf;
}

Pmf tn_pmf_dft(int n) {
  constexpr int kCap = 40;
  if (n < 1) throw DomainError("tn_pmf_dft: n must be >= 1");
  if (n > kCap) throw ResourceError("tn_pmf_dft: n exceeds cap " + std::to_string(kCap));
  const std::int64_t end = static_cast<std::int64_t>(n) * (n + 1) / 2;
  std::int64_t size = 1;
  while (size <= end) size *= 2;

  std::vector<Complex> phi(static_cast<std::size_t>(size));
  for (std::int64_t j = 0; j < size; ++j) {
    Complex prod{1.0, 0.0};
    for (int k = 1; k <= n; ++k) {
      const double angle = 2.0 * kPi * static_cast<double>((j * k) % size) / size;
      prod *= 1.0 + expm1i(angle) / static_cast<double>(k);
    }
    phi[static_cast<std::size_t>(j)] = prod;
  }
  Pmf pmf;
  pmf.offset = 1;
  pmf.n = n;
  pmf.kind = PmfKind::FftOracle;
  pmf.probs.resize(static_cast<std::size_t>(end));
  for (std::int64_t m = 1; m <= end; ++m) {
    ComplexKahanSum acc;
    for (std::int64_t j = 0; j < size; ++j) {
      const double angle = -2.0 * kPi * static_cast<double>((j * m) % size) / size;
      acc += phi[static_cast<std::size_t>(j)] * std::polar(1.0, angle);
    }
    pmf.probs[static_cast<std::size_t>(m - 1)] = acc.value().real() / static_cast<double>(size);
  }
  detail::finalize_probs(pmf);
  return pmf;
}

}  // namespace dickman::reference
