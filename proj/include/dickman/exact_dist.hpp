#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dickman/special_fn.hpp"

namespace dickman {

enum class PmfKind { BernoulliT, PoissonY, FftOracle, BruteForce };

// Probability mass function on the consecutive integers
// offset, offset + 1, ..., offset + probs.size() - 1.
struct Pmf {
  std::int64_t offset = 0;
  std::vector<double> probs;
  std::int64_t n = 0;
  PmfKind kind = PmfKind::BernoulliT;
  // Mass known to lie beyond the stored range (Poisson model only).
  double mass_deficit = 0.0;
  // Entries in [-1e-15, 0) that were clamped to zero.
  std::size_t clamped = 0;

  double at(std::int64_t m) const noexcept {
    const std::int64_t i = m - offset;
    if (i < 0 || i >= static_cast<std::int64_t>(probs.size())) return 0.0;
    return probs[static_cast<std::size_t>(i)];
  }
  std::int64_t support_end() const noexcept {
    return offset + static_cast<std::int64_t>(probs.size()) - 1;
  }
  double total() const;
  double mean() const;
  double variance() const;
};

inline constexpr int kDefaultNCap = 4000;
inline constexpr int kBruteForceCap = 24;

// Exact pmf of T_n by the Bernoulli-factor recursion
//   new[m] = old[m] (1 - 1/k) + old[m - k] / k,  k = 2..n,
// from the point mass at 1. Double-buffered, OpenMP over m.
Pmf tn_pmf(int n, int n_cap = kDefaultNCap);

// Exact pmf of T_n by sampling phi_n at S = 2^j > n(n+1)/2 equispaced
// frequencies and inverting with a length-S FFT.
Pmf tn_pmf_fft(int n, int n_cap = kDefaultNCap);

// Enumeration of all 2^{n-1} outcomes of (Z_2, ..., Z_n).
Pmf brute_force_pmf(int n);

// Pmf of Y_n = sum_{k <= n} k X_k with X_k ~ Poisson(1/k), from
//   p_0 = e^{-H_n},  m p_m = sum_{j=1}^{min(m,n)} p_{m-j}.
// Extends beyond m_max until the mass deficit is at most 1e-12.
Pmf yn_pmf(int n, std::int64_t m_max = 0);

namespace reference {

// Serial in-place recursion, descending m for each k.
Pmf tn_pmf(int n, int n_cap = kDefaultNCap);

// Naive O(S^2) inverse DFT; only for small n.
Pmf tn_pmf_dft(int n);

}  // namespace reference

// Runs the T_n recursion up to n_max and calls `visit(k, pmf_of_T_k)` after
// every step k = 1..n_max. The span indexes m - 1.
void tn_pmf_sweep(int n_max, const std::function<void(int, std::span<const double>)>& visit,
                  int n_cap = kDefaultNCap);

// sum_{m >= 0} |P(X = m) - rho0(m/n)/n| for a pmf with index n, including
// the rho tail out to n u_max.
double l1_to_dickman(const Pmf& pmf, const DickmanTable& table = DickmanTable::standard());

// v_n for the Bernoulli model.
double vn(int n);
// Same for the Poisson model Y_n.
double poisson_vn(int n);

// sum_m |P(A = m) - P(B = m)| (no factor 1/2), plus the mass deficits.
double dtv(const Pmf& a, const Pmf& b);
double dtv(int n);

// 2 log n / (pi^2 n).
double predicted_vn(int n);

// (P(T_n = m) - rho0(m/n)/n) pi^2 m n / 2; predicted (-1)^{m+1} + O(1/m + m/n).
double correction_term(const Pmf& tn, std::int64_t m,
                       const DickmanTable& table = DickmanTable::standard());
double correction_term(int n, std::int64_t m);

// sup_u |P(X/n <= u) - dickman_cdf(u)|, evaluated at every jump.
double cdf_sup_distance(const Pmf& pmf, const DickmanTable& table = DickmanTable::standard());

}  // namespace dickman
