#include "dickman/asllt.hpp"

namespace dickman::reference {

ReplicaSummary simulate_replicas(const TargetSequence& target, std::int64_t N,
                                 std::int64_t replicas, std::uint64_t base_seed,
                                 std::span<const std::int64_t> checkpoints) {
  if (replicas < 1) throw DomainError("simulate_replicas: replicas must be >= 1");
  ReplicaSummary summary;
  summary.seed = base_seed;
  summary.N = N;
  summary.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  for (std::int64_t r = 0; r < replicas; ++r) {
    summary.replicas.push_back(
        simulate_counts(target, N, base_seed, checkpoints, static_cast<std::uint64_t>(r)));
  }
  summary.aggregates = aggregate(summary.replicas, checkpoints);
  return summary;
}

}  // namespace dickman::reference
