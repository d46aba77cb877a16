#include "dickman/exact_dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmf_internal.hpp"

namespace dickman {

namespace detail {

void check_tn_request(int n, int n_cap) {
  if (n < 1) throw DomainError("tn_pmf: n must be >= 1");
  if (n > n_cap) {
    throw ResourceError("tn_pmf: n = " + std::to_string(n) + " exceeds n_cap = " +
                        std::to_string(n_cap));
  }
}

void finalize_probs(Pmf& pmf) {
  for (double& p : pmf.probs) {
    if (p < 0.0) {
      if (p < -kNegativeClampThreshold) {
        throw NumericalError("pmf: negative probability " + std::to_string(p));
      }
      p = 0.0;
      ++pmf.clamped;
    }
  }
}

}  // namespace detail

double Pmf::total() const {
  KahanSum s;
  for (double p : probs) s += p;
  return s.value();
}

double Pmf::mean() const {
  KahanSum s;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    s += static_cast<double>(offset + static_cast<std::int64_t>(i)) * probs[i];
  }
  return s.value();
}

double Pmf::variance() const {
  const double mu = mean();
  KahanSum s;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double d = static_cast<double>(offset + static_cast<std::int64_t>(i)) - mu;
    s += d * d * probs[i];
  }
  return s.value();
}

Pmf tn_pmf(int n, int n_cap) {
  detail::check_tn_request(n, n_cap);
  const std::size_t size = static_cast<std::size_t>(n) * (n + 1) / 2;
  std::vector<double> cur(size, 0.0);
  std::vector<double> next(size, 0.0);
  cur[0] = 1.0;
  for (int k = 2; k <= n; ++k) {
    const std::int64_t prev_end = static_cast<std::int64_t>(k) * (k - 1) / 2;
    const std::int64_t end = static_cast<std::int64_t>(k) * (k + 1) / 2;
    const std::int64_t lo = std::min<std::int64_t>(k, prev_end);
    const std::int64_t jump_lo = std::max<std::int64_t>(k, prev_end);
    const double q = 1.0 / k;
    const double r = 1.0 - q;
    const double* a = cur.data();
    double* b = next.data();
    // Index i holds m = i + 1: keep-only below k, both terms up to
    // prev_end, jump-only from max(k, prev_end). Only k = 2 leaves a gap.
    for (std::int64_t i = prev_end; i < jump_lo; ++i) b[i] = 0.0;
#pragma omp parallel
    {
#pragma omp for simd schedule(static) nowait
      for (std::int64_t i = 0; i < lo; ++i) b[i] = a[i] * r;
#pragma omp for simd schedule(static) nowait
      for (std::int64_t i = lo; i < prev_end; ++i) b[i] = a[i] * r + a[i - k] * q;
#pragma omp for simd schedule(static)
      for (std::int64_t i = jump_lo; i < end; ++i) b[i] = a[i - k] * q;
    }
    cur.swap(next);
  }
  Pmf pmf;
  pmf.offset = 1;
  pmf.probs = std::move(cur);
  pmf.n = n;
  pmf.kind = PmfKind::BernoulliT;
  return pmf;
}

void tn_pmf_sweep(int n_max, const std::function<void(int, std::span<const double>)>& visit,
                  int n_cap) {
  detail::check_tn_request(n_max, n_cap);
  const std::size_t size = static_cast<std::size_t>(n_max) * (n_max + 1) / 2;
  std::vector<double> p(size, 0.0);
  p[0] = 1.0;
  visit(1, std::span<const double>(p.data(), 1));
  for (int k = 2; k <= n_max; ++k) {
    detail::bernoulli_step_in_place(p.data(), k);
    visit(k, std::span<const double>(p.data(), static_cast<std::size_t>(k) * (k + 1) / 2));
  }
}

Pmf brute_force_pmf(int n) {
  if (n < 1) throw DomainError("brute_force_pmf: n must be >= 1");
  if (n > kBruteForceCap) {
    throw ResourceError("brute_force_pmf: n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(kBruteForceCap));
  }
  Pmf pmf;
  pmf.offset = 1;
  pmf.n = n;
  pmf.kind = PmfKind::BruteForce;
  pmf.probs.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  // Depth-first over Z_2..Z_n.
  struct Walker {
    int n;
    std::vector<double>& out;
    void go(int k, std::int64_t m, double prob) {
      if (k > n) {
        out[static_cast<std::size_t>(m - 1)] += prob;
        return;
      }
      go(k + 1, m, prob * ((k - 1.0) / k));
      go(k + 1, m + k, prob / k);
    }
  } walker{n, pmf.probs};
  walker.go(2, 1, 1.0);
  return pmf;
}

Pmf yn_pmf(int n, std::int64_t m_max) {
  if (n < 1) throw DomainError("yn_pmf: n must be >= 1");
  constexpr std::int64_t kEntryCap = 100'000'000;
  constexpr double kTargetDeficit = 1e-12;
  std::int64_t target = m_max > 0 ? m_max : 16 * static_cast<std::int64_t>(n) + 32;

  KahanSum harmonic;
  for (int k = 1; k <= n; ++k) harmonic += 1.0 / k;

  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(target) + 1);
  p.push_back(std::exp(-harmonic.value()));
  KahanSum mass;
  mass += p[0];
  for (;;) {
    for (std::int64_t m = static_cast<std::int64_t>(p.size()); m <= target; ++m) {
      const std::int64_t lo = std::max<std::int64_t>(0, m - n);
      const double* src = p.data();
      double window = 0.0;
#pragma omp simd reduction(+ : window)
      for (std::int64_t i = lo; i < m; ++i) window += src[i];
      const double pm = window / static_cast<double>(m);
      p.push_back(pm);
      mass += pm;
    }
    const double deficit = std::max(0.0, 1.0 - mass.value());
    if (deficit <= kTargetDeficit) {
      Pmf pmf;
      pmf.offset = 0;
      pmf.probs = std::move(p);
      pmf.n = n;
      pmf.kind = PmfKind::PoissonY;
      pmf.mass_deficit = deficit;
      return pmf;
    }
    target *= 2;
    if (target > kEntryCap) throw ResourceError("yn_pmf: support exceeds entry cap");
  }
}

double l1_to_dickman(const Pmf& pmf, const DickmanTable& table) {
  if (pmf.n < 1) throw DomainError("l1_to_dickman: pmf has no model index");
  const double nd = static_cast<double>(pmf.n);
  const auto rho_top = static_cast<std::int64_t>(std::floor(nd * table.u_max()));
  const std::int64_t top = std::max(pmf.support_end(), rho_top);
  const std::int64_t bottom = std::min<std::int64_t>(0, pmf.offset);
  KahanSum sum;
  for (std::int64_t m = bottom; m <= top; ++m) {
    const double density = m <= rho_top ? table.rho0(static_cast<double>(m) / nd) / nd : 0.0;
    sum += std::abs(pmf.at(m) - density);
  }
  sum += pmf.mass_deficit;
  return sum.value();
}

double vn(int n) { return l1_to_dickman(tn_pmf(n)); }

double poisson_vn(int n) { return l1_to_dickman(yn_pmf(n)); }

double dtv(const Pmf& a, const Pmf& b) {
  const std::int64_t lo = std::min(a.offset, b.offset);
  const std::int64_t hi = std::max(a.support_end(), b.support_end());
  KahanSum sum;
  for (std::int64_t m = lo; m <= hi; ++m) sum += std::abs(a.at(m) - b.at(m));
  sum += a.mass_deficit;
  sum += b.mass_deficit;
  return sum.value();
}

double dtv(int n) { return dtv(tn_pmf(n), yn_pmf(n)); }

double predicted_vn(int n) {
  const double nd = static_cast<double>(n);
  return 2.0 * std::log(nd) / (kPi * kPi * nd);
}

double correction_term(const Pmf& tn, std::int64_t m, const DickmanTable& table) {
  if (m < 1 || m > tn.support_end()) {
    throw DomainError("correction_term: m = " + std::to_string(m) + " outside [1, " +
                      std::to_string(tn.support_end()) + "]");
  }
  const double nd = static_cast<double>(tn.n);
  const double md = static_cast<double>(m);
  const double diff = tn.at(m) - table.rho0(md / nd) / nd;
  return diff * kPi * kPi * md * nd / 2.0;
}

double correction_term(int n, std::int64_t m) { return correction_term(tn_pmf(n), m); }

double cdf_sup_distance(const Pmf& pmf, const DickmanTable& table) {
  const double nd = static_cast<double>(pmf.n);
  const auto rho_top = static_cast<std::int64_t>(std::floor(nd * table.u_max()));
  const std::int64_t top = std::min(pmf.support_end(), rho_top);
  double before = 0.0;
  KahanSum cumulative;
  double worst = 0.0;
  for (std::int64_t m = std::min<std::int64_t>(0, pmf.offset); m <= top; ++m) {
    cumulative += pmf.at(m);
    const double after = cumulative.value();
    const double c = table.cdf(static_cast<double>(m) / nd);
    worst = std::max({worst, std::abs(before - c), std::abs(after - c)});
    before = after;
  }
  // Beyond the last evaluated jump the limit cdf only grows toward 1.
  const double c_end = table.cdf(std::min(static_cast<double>(top + 1) / nd, table.u_max()));
  worst = std::max(worst, std::abs(before - c_end));
  return worst;
}

}  // namespace dickman
