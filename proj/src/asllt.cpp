#include "dickman/asllt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dickman/exact_dist.hpp"

namespace dickman {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void check_walk_request(const TargetSequence& target, std::int64_t N,
                        std::span<const std::int64_t> checkpoints) {
  if (N < 1 || N > kMaxWalkLength) {
    throw DomainError("simulate_counts: N must lie in [1, " + std::to_string(kMaxWalkLength) + "]");
  }
  if (N > target.max_n()) {
    throw DomainError("simulate_counts: target sequence defined only up to n = " +
                      std::to_string(target.max_n()));
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > N) {
      throw DomainError("simulate_counts: checkpoint outside [1, N]");
    }
    if (i > 0 && checkpoints[i] < checkpoints[i - 1]) {
      throw DomainError("simulate_counts: checkpoints must be sorted");
    }
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t base_seed, std::uint64_t replica) noexcept {
  return mix64(mix64(base_seed + kGolden) ^ mix64((replica + 1) * 0xD1B54A32D192ED03ULL));
}

// SplitMix64 evaluated at position `counter` of the stream starting at `key`.
double uniform01(std::uint64_t key, std::uint64_t counter) noexcept {
  const std::uint64_t bits = mix64(key + (counter + 1) * kGolden) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

std::int64_t exact_floor_product(double u, std::int64_t n) {
  const double nd = static_cast<double>(n);
  double m = std::floor(u * nd);
  if (std::fma(u, nd, -m) < 0.0) {
    m -= 1.0;
  } else if (std::fma(u, nd, -(m + 1.0)) >= 0.0) {
    m += 1.0;
  }
  return static_cast<std::int64_t>(m);
}

TargetSequence TargetSequence::floor_un(double u, bool strict) {
  if (!std::isfinite(u) || !(u > 0.0)) throw DomainError("floor_un: u must be positive");
  if (strict && u < 1.0) {
    throw DomainError("floor_un: floor(u n) is not strictly increasing for u < 1");
  }
  return TargetSequence(TargetKind::FloorUn, u, strict);
}

TargetSequence TargetSequence::custom(std::vector<std::int64_t> values, double u, bool strict) {
  if (!std::isfinite(u) || !(u > 0.0)) throw DomainError("custom target: u must be positive");
  if (values.empty()) throw DomainError("custom target: no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) throw DomainError("custom target: negative m_n");
    if (i == 0) continue;
    if (values[i] < values[i - 1]) {
      throw DomainError("custom target: m_n decreases at n = " + std::to_string(i + 1));
    }
    if (strict && values[i] == values[i - 1]) {
      throw DomainError("custom target: strict mode requires m_{n+1} > m_n (n = " +
                        std::to_string(i) + ")");
    }
  }
  TargetSequence t(TargetKind::Custom, u, strict);
  t.values_ = std::move(values);
  return t;
}

std::int64_t TargetSequence::max_n() const noexcept {
  return kind_ == TargetKind::FloorUn ? kMaxWalkLength : static_cast<std::int64_t>(values_.size());
}

std::int64_t TargetSequence::operator()(std::int64_t n) const {
  if (n < 1 || n > max_n()) throw DomainError("target: n outside defined range");
  if (kind_ == TargetKind::FloorUn) return exact_floor_product(u_, n);
  return values_[static_cast<std::size_t>(n - 1)];
}

double TargetSequence::epsilon(std::int64_t n) const {
  const double nd = static_cast<double>(n);
  const double m = static_cast<double>((*this)(n));
  return std::abs(std::fma(-u_, nd, m)) / nd;
}

double TargetSequence::eta(std::int64_t N) const {
  if (N < 2) throw DomainError("eta: requires N >= 2");
  KahanSum s;
  for (std::int64_t n = 1; n <= N; ++n) s += epsilon(n) / static_cast<double>(n);
  return s.value() / std::log(static_cast<double>(N));
}

MultiplicityStats TargetSequence::theta_stats(std::int64_t N) const {
  MultiplicityStats stats;
  std::int64_t run = 0;
  std::int64_t current = (*this)(1);
  auto close_run = [&stats](std::int64_t len) {
    stats.max_theta = std::max(stats.max_theta, len);
    ++stats.histogram[len];
  };
  for (std::int64_t n = 1; n <= N; ++n) {
    const std::int64_t m = (*this)(n);
    if (m == current) {
      ++run;
    } else {
      close_run(run);
      current = m;
      run = 1;
    }
  }
  close_run(run);
  return stats;
}

ReplicaCounts simulate_counts(const TargetSequence& target, std::int64_t N, std::uint64_t seed,
                              std::span<const std::int64_t> checkpoints, std::uint64_t replica) {
  check_walk_request(target, N, checkpoints);
  ReplicaCounts out;
  out.replica = replica;
  out.counts.resize(checkpoints.size());
  const std::uint64_t key = stream_key(seed, replica);
  std::int64_t walk = 0;
  std::int64_t hits = 0;
  std::int64_t previous_target = -1;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (uniform01(key, static_cast<std::uint64_t>(n)) < 1.0 / static_cast<double>(n)) walk += n;
    const std::int64_t m = target(n);
    if (target.strict() && m <= previous_target) {
      throw DomainError("simulate_counts: strict target not increasing at n = " + std::to_string(n));
    }
    previous_target = m;
    if (walk == m) ++hits;
    while (next < checkpoints.size() && checkpoints[next] == n) out.counts[next++] = hits;
  }
  return out;
}

std::vector<CheckpointAggregate> aggregate(std::span<const ReplicaCounts> replicas,
                                           std::span<const std::int64_t> checkpoints) {
  std::vector<CheckpointAggregate> out(checkpoints.size());
  const double r = static_cast<double>(replicas.size());
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    KahanSum sum;
    for (const auto& rep : replicas) sum += static_cast<double>(rep.counts[c]);
    const double mean = replicas.empty() ? 0.0 : sum.value() / r;
    KahanSum sq;
    for (const auto& rep : replicas) {
      const double d = static_cast<double>(rep.counts[c]) - mean;
      sq += d * d;
    }
    const double var = replicas.size() > 1 ? sq.value() / (r - 1.0) : 0.0;
    out[c] = {checkpoints[c], mean, var, replicas.empty() ? 0.0 : std::sqrt(var / r)};
  }
  return out;
}

ReplicaSummary simulate_replicas(const TargetSequence& target, std::int64_t N,
                                 std::int64_t replicas, std::uint64_t base_seed,
                                 std::span<const std::int64_t> checkpoints) {
  if (replicas < 1) throw DomainError("simulate_replicas: replicas must be >= 1");
  check_walk_request(target, N, checkpoints);
  ReplicaSummary summary;
  summary.seed = base_seed;
  summary.N = N;
  summary.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  summary.replicas.resize(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t r = 0; r < replicas; ++r) {
    summary.replicas[static_cast<std::size_t>(r)] =
        simulate_counts(target, N, base_seed, checkpoints, static_cast<std::uint64_t>(r));
  }
  summary.aggregates = aggregate(summary.replicas, checkpoints);
  return summary;
}

ExpectationReport exact_expectation(const TargetSequence& target, std::int64_t N,
                                    std::int64_t n_exact) {
  if (N < 1) throw DomainError("exact_expectation: N must be >= 1");
  if (n_exact < 1) throw DomainError("exact_expectation: n_exact must be >= 1");
  if (n_exact > kDefaultNCap) {
    throw ResourceError("exact_expectation: n_exact exceeds the exact pmf cap");
  }
  ExpectationReport rep;
  rep.N = N;
  rep.n_exact = std::min(n_exact, N);
  KahanSum exact;
  tn_pmf_sweep(static_cast<int>(rep.n_exact), [&](int k, std::span<const double> p) {
    const std::int64_t m = target(k);
    if (m >= 1 && m <= static_cast<std::int64_t>(p.size())) exact += p[static_cast<std::size_t>(m - 1)];
  });
  rep.exact_part = exact.value();
  const DickmanTable& table = DickmanTable::standard();
  KahanSum approx;
  KahanSum err;
  for (std::int64_t n = rep.n_exact + 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    approx += table.rho0(static_cast<double>(target(n)) / nd) / nd;
    err += 1.0 / (nd * nd);
  }
  rep.approx_part = approx.value();
  rep.error_scale = err.value();
  return rep;
}

VarianceReport variance_study(const TargetSequence& target, std::int64_t N,
                              std::int64_t replicas, std::uint64_t base_seed,
                              std::span<const std::int64_t> checkpoints) {
  if (replicas < 100) throw DomainError("variance_study: replicas must be >= 100");
  for (std::int64_t c : checkpoints) {
    if (c < 2) throw DomainError("variance_study: checkpoints must be >= 2");
  }
  const ReplicaSummary summary = simulate_replicas(target, N, replicas, base_seed, checkpoints);
  VarianceReport report;
  report.replicas = replicas;
  for (const auto& agg : summary.aggregates) {
    VarianceRow row;
    row.N = agg.N;
    row.mean = agg.mean;
    row.variance = agg.variance;
    row.std_error = agg.std_error;
    row.log_N = std::log(static_cast<double>(agg.N));
    row.q = target.theta_stats(agg.N).max_theta;
    row.ratio = row.variance / (static_cast<double>(row.q) * row.log_N);
    report.rows.push_back(row);
  }
  return report;
}

std::vector<double> perpetuity_sample(std::int64_t count, std::uint64_t seed, double trunc_eps) {
  if (count < 0) throw DomainError("perpetuity_sample: negative count");
  if (!(trunc_eps > 0.0) || trunc_eps >= 1.0) {
    throw DomainError("perpetuity_sample: trunc_eps must lie in (0, 1)");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const std::uint64_t key = stream_key(seed, static_cast<std::uint64_t>(i));
    double product = 1.0;
    double sum = 0.0;
    for (std::uint64_t j = 0; product >= trunc_eps; ++j) {
      product *= 1.0 - uniform01(key, j);  // uniform on (0, 1]
      sum += product;
    }
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

double ks_distance_to_dickman(std::vector<double> samples, const DickmanTable& table) {
  if (samples.empty()) throw DomainError("ks_distance_to_dickman: empty sample");
  std::sort(samples.begin(), samples.end());
  const double count = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = table.cdf(std::min(samples[i], table.u_max()));
    worst = std::max({worst, (static_cast<double>(i) + 1.0) / count - f,
                      f - static_cast<double>(i) / count});
  }
  return worst;
}

EcdfReport walk_ecdf(std::int64_t n, std::int64_t samples, std::uint64_t seed) {
  if (n < 1 || n > kMaxWalkLength) throw DomainError("walk_ecdf: n out of range");
  if (samples < 1) throw DomainError("walk_ecdf: samples must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(samples));
  const double nd = static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::uint64_t key = stream_key(seed, static_cast<std::uint64_t>(s));
    std::int64_t walk = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
      if (uniform01(key, static_cast<std::uint64_t>(k)) < 1.0 / static_cast<double>(k)) walk += k;
    }
    values[static_cast<std::size_t>(s)] = static_cast<double>(walk) / nd;
  }
  return {n, samples, ks_distance_to_dickman(std::move(values))};
}

}  // namespace dickman
