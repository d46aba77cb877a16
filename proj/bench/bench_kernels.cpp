// Serial reference versus OpenMP kernels: wall time and agreement.
//
//   dickman_bench [n] [replicas] [N]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "dickman/asllt.hpp"
#include "dickman/exact_dist.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_diff(const dickman::Pmf& a, const dickman::Pmf& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) {
    worst = std::max(worst, std::abs(a.probs[i] - b.probs[i]));
  }
  return worst;
}

void row(const char* name, double serial, double parallel, const char* agreement) {
  std::printf("%-22s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              agreement);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1500;
  const std::int64_t replicas = argc > 2 ? std::atoll(argv[2]) : 2000;
  const std::int64_t N = argc > 3 ? std::atoll(argv[3]) : 100000;

  std::printf("threads = %d, n = %d, replicas = %lld, N = %lld\n", omp_get_max_threads(), n,
              static_cast<long long>(replicas), static_cast<long long>(N));
  std::printf("%-22s %10s %10s %9s  %s\n", "kernel", "serial s", "omp s", "speedup", "agreement");

  dickman::Pmf ref;
  dickman::Pmf par;
  const double t_ref = seconds([&] { ref = dickman::reference::tn_pmf(n); });
  const double t_par = seconds([&] { par = dickman::tn_pmf(n); });
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |diff| = %.2e", max_diff(ref, par));
  row("tn_pmf", t_ref, t_par, buf);

  dickman::Pmf fft;
  const double t_fft = seconds([&] { fft = dickman::tn_pmf_fft(n); });
  std::snprintf(buf, sizeof buf, "max |diff| = %.2e", max_diff(ref, fft));
  row("tn_pmf_fft vs serial", t_ref, t_fft, buf);

  const auto target = dickman::TargetSequence::floor_un(1.0, true);
  const std::vector<std::int64_t> checkpoints = {N};
  dickman::ReplicaSummary a;
  dickman::ReplicaSummary b;
  const double t_sref =
      seconds([&] { a = dickman::reference::simulate_replicas(target, N, replicas, 1, checkpoints); });
  const double t_spar =
      seconds([&] { b = dickman::simulate_replicas(target, N, replicas, 1, checkpoints); });
  bool same = a.aggregates.front().mean == b.aggregates.front().mean &&
              a.aggregates.front().variance == b.aggregates.front().variance;
  for (std::size_t r = 0; same && r < a.replicas.size(); ++r) {
    same = a.replicas[r].counts == b.replicas[r].counts;
  }
  row("simulate_replicas", t_sref, t_spar, same ? "bit-identical" : "MISMATCH");
  return same ? 0 : 1;
}
