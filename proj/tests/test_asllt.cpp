#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dickman/asllt.hpp"
#include "dickman/exact_dist.hpp"

using namespace dickman;

TEST_SUITE("asllt") {
  TEST_CASE("uniform stream") {
    const std::uint64_t key = stream_key(7, 3);
    CHECK(uniform01(key, 11) == uniform01(key, 11));
    CHECK(stream_key(7, 3) != stream_key(7, 4));
    CHECK(stream_key(7, 3) != stream_key(8, 3));
    double sum = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
      const double x = uniform01(key, static_cast<std::uint64_t>(i));
      REQUIRE(x >= 0.0);
      REQUIRE(x < 1.0);
      sum += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    // Standard error of the mean is 1 / sqrt(12 count).
    CHECK(std::abs(sum / count - 0.5) <= 5.0 / std::sqrt(12.0 * count));
    CHECK(lo < 1e-4);
    CHECK(hi > 1.0 - 1e-4);
  }

  TEST_CASE("target sequences") {
    const auto one = TargetSequence::floor_un(1.0, true);
    CHECK(one(1) == 1);
    CHECK(one(1000) == 1000);
    CHECK(one.eta(1000) == 0.0);
    CHECK(one.theta_stats(500).max_theta == 1);

    const auto half = TargetSequence::floor_un(0.5);
    CHECK(half(1) == 0);
    CHECK(half(7) == 3);
    const MultiplicityStats st = half.theta_stats(1000);
    CHECK(st.max_theta <= 3);
    CHECK(st.max_theta == 2);
    // epsilon_n = 1/(2n) for odd n.
    CHECK(std::abs(half.epsilon(7) - 1.0 / 14.0) <= 1e-15);
    double s = 0.0;
    for (int n = 1; n <= 1000; n += 2) s += 0.5 / (static_cast<double>(n) * n);
    CHECK(std::abs(half.eta(1000) - s / std::log(1000.0)) <= 1e-14);

    CHECK_THROWS_AS(TargetSequence::floor_un(0.5, true), DomainError);
    CHECK_THROWS_AS(TargetSequence::floor_un(0.0), DomainError);
    CHECK_THROWS_AS(TargetSequence::custom({1, 3, 2}, 1.0), DomainError);
    CHECK_THROWS_AS(TargetSequence::custom({1, 2, 2}, 1.0, true), DomainError);
    const auto custom = TargetSequence::custom({1, 2, 3}, 1.0, true);
    CHECK(custom.max_n() == 3);
    CHECK_THROWS_AS(custom(4), DomainError);

    CHECK(exact_floor_product(0.1, 10) == 1);
    CHECK(exact_floor_product(0.3, 10) == 2);  // 0.3 is slightly below 3/10
    CHECK(exact_floor_product(2.5, 3) == 7);
  }

  TEST_CASE("L_1 is one and replicas are deterministic") {
    const auto target = TargetSequence::floor_un(1.0, true);
    const std::vector<std::int64_t> cps = {1, 10, 1000};
    const ReplicaCounts a = simulate_counts(target, 1000, 42, cps, 5);
    const ReplicaCounts b = simulate_counts(target, 1000, 42, cps, 5);
    CHECK(a.counts == b.counts);
    CHECK(a.counts[0] == 1);
    CHECK(std::is_sorted(a.counts.begin(), a.counts.end()));
    CHECK_THROWS_AS(simulate_counts(target, 1000, 42, std::vector<std::int64_t>{10, 5}), DomainError);
    CHECK_THROWS_AS(simulate_counts(target, 100, 42, std::vector<std::int64_t>{200}), DomainError);
  }

  TEST_CASE("OpenMP replicas match the serial reference for any thread count") {
    const auto target = TargetSequence::floor_un(2.5, true);
    const std::vector<std::int64_t> cps = {100, 2000};
    const ReplicaSummary ref = reference::simulate_replicas(target, 2000, 300, 9, cps);
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      const ReplicaSummary par = simulate_replicas(target, 2000, 300, 9, cps);
      REQUIRE(par.replicas.size() == ref.replicas.size());
      for (std::size_t r = 0; r < ref.replicas.size(); ++r) {
        REQUIRE(par.replicas[r].counts == ref.replicas[r].counts);
      }
      for (std::size_t c = 0; c < cps.size(); ++c) {
        REQUIRE(par.aggregates[c].mean == ref.aggregates[c].mean);
        REQUIRE(par.aggregates[c].variance == ref.aggregates[c].variance);
      }
    }
    omp_set_num_threads(saved);
    const ReplicaSummary other = simulate_replicas(target, 2000, 300, 10, cps);
    CHECK(other.aggregates[1].mean != ref.aggregates[1].mean);
  }

  TEST_CASE("aggregate against a hand computation") {
    std::vector<ReplicaCounts> reps = {{0, {1, 2}}, {1, {1, 4}}, {2, {1, 3}}};
    const std::vector<std::int64_t> cps = {5, 9};
    const auto agg = aggregate(reps, cps);
    CHECK(agg[0].variance == 0.0);
    CHECK(agg[1].mean == doctest::Approx(3.0));
    CHECK(agg[1].variance == doctest::Approx(1.0));
    CHECK(agg[1].std_error == doctest::Approx(1.0 / std::sqrt(3.0)));
  }

  TEST_CASE("exact expectation") {
    const auto one = TargetSequence::floor_un(1.0, true);
    // P(T_1 = 1) + P(T_2 = 2) + P(T_3 = 3) = 1 + 0 + 1/3.
    const ExpectationReport small = exact_expectation(one, 3, 10);
    CHECK(std::abs(small.total() - 4.0 / 3.0) <= 1e-15);
    CHECK(small.approx_part == 0.0);

    const ExpectationReport full = exact_expectation(one, 400, 400);
    double direct = 0.0;
    tn_pmf_sweep(400, [&](int k, std::span<const double> p) { direct += p[static_cast<std::size_t>(k - 1)]; });
    CHECK(std::abs(full.total() - direct) <= 1e-12);
    const ExpectationReport split = exact_expectation(one, 400, 100);
    CHECK(std::abs(split.total() - direct) <= 10.0 * split.error_scale);
    CHECK_THROWS_AS(exact_expectation(one, 10, kDefaultNCap + 1), ResourceError);
  }

  TEST_CASE("law of L_3 by simulation") {
    // L_3 = 1 + [Z_2 = 1, Z_3 = 0]; the bracket is Bernoulli(1/3).
    const auto one = TargetSequence::floor_un(1.0, true);
    const std::vector<std::int64_t> cps = {3};
    const std::int64_t R = 100000;
    const ReplicaSummary s = simulate_replicas(one, 3, R, 77, cps);
    std::int64_t twos = 0;
    for (const auto& r : s.replicas) {
      REQUIRE((r.counts[0] == 1 || r.counts[0] == 2));
      twos += r.counts[0] == 2;
    }
    const double p = 1.0 / 3.0;
    const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(R));
    CHECK(std::abs(static_cast<double>(twos) / R - p) <= 5.0 * sd);
  }

  TEST_CASE("standard error shrinks with replicas") {
    const auto target = TargetSequence::floor_un(1.0, true);
    const std::vector<std::int64_t> cps = {5000};
    const double se_small = simulate_replicas(target, 5000, 100, 3, cps).aggregates[0].std_error;
    const double se_large = simulate_replicas(target, 5000, 2000, 3, cps).aggregates[0].std_error;
    const double ratio = se_small / se_large;
    CHECK(ratio >= 0.6 * std::sqrt(20.0));
    CHECK(ratio <= 1.6 * std::sqrt(20.0));
  }

  TEST_CASE("variance study") {
    const auto half = TargetSequence::floor_un(0.5);
    const std::vector<std::int64_t> cps = {100, 1000};
    const VarianceReport rep = variance_study(half, 1000, 200, 4, cps);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
      CHECK(row.q == 2);
      CHECK(row.ratio == doctest::Approx(row.variance / (2.0 * std::log(static_cast<double>(row.N)))));
    }
    CHECK_THROWS_AS(variance_study(half, 1000, 50, 4, cps), DomainError);
  }

  TEST_CASE("Dickman samplers") {
    const std::vector<double> d = perpetuity_sample(100000, 11);
    CHECK(std::all_of(d.begin(), d.end(), [](double x) { return x > 0.0; }));
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    // Var D = 1/2.
    CHECK(std::abs(mean - 1.0) <= 5.0 * std::sqrt(0.5 / 1e5));
    CHECK(ks_distance_to_dickman(d) <= 0.01);
    CHECK(perpetuity_sample(1000, 11) == std::vector<double>(d.begin(), d.begin() + 1000));
    CHECK_THROWS_AS(perpetuity_sample(10, 1, 1.5), DomainError);
    CHECK_THROWS_AS(ks_distance_to_dickman({}), DomainError);

    const EcdfReport trivial = walk_ecdf(1, 10, 1);
    CHECK(std::abs(trivial.sup_distance - kExpMinusGamma) <= 1e-10);
    const EcdfReport walk = walk_ecdf(2000, 20000, 5);
    CHECK(walk.sup_distance <= 0.02);
  }
}
