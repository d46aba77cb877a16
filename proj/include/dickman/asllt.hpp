#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dickman/special_fn.hpp"

namespace dickman {

// ---------------------------------------------------------------------------
// Counter-based random numbers.
//
// Every uniform is a pure function of (key, counter), so a replica's stream
// does not depend on how replicas are scheduled across threads.
// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x) noexcept;

// Stream key for one replica of a run seeded with `base_seed`.
std::uint64_t stream_key(std::uint64_t base_seed, std::uint64_t replica) noexcept;

// Uniform on [0, 1) with 53 random bits.
double uniform01(std::uint64_t key, std::uint64_t counter) noexcept;

// ---------------------------------------------------------------------------
// Target sequences m_n.
// ---------------------------------------------------------------------------

enum class TargetKind { FloorUn, Custom };

struct MultiplicityStats {
  std::int64_t max_theta = 0;                  // max_m theta_m over n <= N
  std::map<std::int64_t, std::int64_t> histogram;  // theta value -> number of m
};

class TargetSequence {
 public:
  // m_n = floor(u n), computed exactly for the double u. With strict = true,
  // u < 1 is rejected (floor(u n) then repeats values).
  static TargetSequence floor_un(double u, bool strict = false);

  // values[n - 1] = m_n. Must be non-decreasing (strictly increasing when
  // strict); u is the nominal slope used for epsilon_n.
  static TargetSequence custom(std::vector<std::int64_t> values, double u, bool strict = false);

  TargetKind kind() const noexcept { return kind_; }
  double u() const noexcept { return u_; }
  bool strict() const noexcept { return strict_; }

  // Largest n with a defined m_n (unbounded for floor_un).
  std::int64_t max_n() const noexcept;

  // m_n for n >= 1.
  std::int64_t operator()(std::int64_t n) const;

  // epsilon_n = |m_n - u n| / n.
  double epsilon(std::int64_t n) const;

  // eta_N = (1 / log N) sum_{n <= N} epsilon_n / n; requires N >= 2.
  double eta(std::int64_t N) const;

  // theta_m = #{n <= N : m_n = m}.
  MultiplicityStats theta_stats(std::int64_t N) const;

 private:
  TargetSequence(TargetKind kind, double u, bool strict) : kind_(kind), u_(u), strict_(strict) {}

  TargetKind kind_;
  double u_;
  bool strict_;
  std::vector<std::int64_t> values_;
};

// Exact floor(u * n) for a double u.
std::int64_t exact_floor_product(double u, std::int64_t n);

// ---------------------------------------------------------------------------
// Hit counting L_N(u) = #{n <= N : T_n = m_n}.
// ---------------------------------------------------------------------------

struct ReplicaCounts {
  std::uint64_t replica = 0;
  std::vector<std::int64_t> counts;  // L_N at each checkpoint
};

struct CheckpointAggregate {
  std::int64_t N = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error = 0.0;
};

struct ReplicaSummary {
  std::uint64_t seed = 0;
  std::int64_t N = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<ReplicaCounts> replicas;
  std::vector<CheckpointAggregate> aggregates;
};

inline constexpr std::int64_t kMaxWalkLength = 100'000'000;

// One walk T_n = T_{n-1} + n [U_n < 1/n], n = 1..N, on stream
// stream_key(seed, replica). Checkpoints must be sorted, in [1, N].
ReplicaCounts simulate_counts(const TargetSequence& target, std::int64_t N, std::uint64_t seed,
                              std::span<const std::int64_t> checkpoints,
                              std::uint64_t replica = 0);

// Cross-replica mean/variance per checkpoint, folded in replica order.
std::vector<CheckpointAggregate> aggregate(std::span<const ReplicaCounts> replicas,
                                           std::span<const std::int64_t> checkpoints);

// Replicas 0..replicas-1 of simulate_counts, OpenMP across replicas.
ReplicaSummary simulate_replicas(const TargetSequence& target, std::int64_t N,
                                 std::int64_t replicas, std::uint64_t base_seed,
                                 std::span<const std::int64_t> checkpoints);

namespace reference {
ReplicaSummary simulate_replicas(const TargetSequence& target, std::int64_t N,
                                 std::int64_t replicas, std::uint64_t base_seed,
                                 std::span<const std::int64_t> checkpoints);
}  // namespace reference

struct ExpectationReport {
  std::int64_t N = 0;
  std::int64_t n_exact = 0;
  double exact_part = 0.0;         // sum_{n <= n_exact} P(T_n = m_n)
  double approx_part = 0.0;        // sum_{n_exact < n <= N} rho0(m_n/n)/n
  double error_scale = 0.0;        // sum_{n_exact < n <= N} 1/n^2
  double total() const noexcept { return exact_part + approx_part; }
};

ExpectationReport exact_expectation(const TargetSequence& target, std::int64_t N,
                                    std::int64_t n_exact);

struct VarianceRow {
  std::int64_t N = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double log_N = 0.0;
  std::int64_t q = 1;  // max theta_m over n <= N
  double ratio = 0.0;  // variance / (q log N)
};

struct VarianceReport {
  std::int64_t replicas = 0;
  std::vector<VarianceRow> rows;
};

// Requires replicas >= 100 and checkpoints >= 2.
VarianceReport variance_study(const TargetSequence& target, std::int64_t N,
                              std::int64_t replicas, std::uint64_t base_seed,
                              std::span<const std::int64_t> checkpoints);

// ---------------------------------------------------------------------------
// Dickman samplers and empirical CDF distances.
// ---------------------------------------------------------------------------

// sum_{n >= 1} prod_{j <= n} X_j with X_j uniform, stopping once the running
// product drops below trunc_eps. The dropped tail has expectation below
// trunc_eps (E tail = product * 1).
std::vector<double> perpetuity_sample(std::int64_t count, std::uint64_t seed,
                                      double trunc_eps = 1e-12);

// Kolmogorov-Smirnov distance of the sample's ECDF to dickman_cdf.
double ks_distance_to_dickman(std::vector<double> samples,
                              const DickmanTable& table = DickmanTable::standard());

struct EcdfReport {
  std::int64_t n = 0;
  std::int64_t samples = 0;
  double sup_distance = 0.0;
};

// ECDF of T_n / n over independent walks versus dickman_cdf.
EcdfReport walk_ecdf(std::int64_t n, std::int64_t samples, std::uint64_t seed);

}  // namespace dickman
