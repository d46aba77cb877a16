#include "dickman/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

#include "dickman/asllt.hpp"
#include "dickman/exact_dist.hpp"
#include "dickman/kernels.hpp"
#include "dickman/special_fn.hpp"

namespace dickman {

namespace {

// Tolerances and scales. Fast mode caps n at 500 and replicas at 200.
constexpr double kRho2Tol = 1e-10;
constexpr double kMassTol = 1e-8;
constexpr double kDdeTol = 1e-6;
constexpr int kDdeGrid = 1000;
constexpr double kDdeHi = 10.0;
constexpr double kDdeStep = 1e-5;

constexpr double kKernelTol = 1e-6;
constexpr double kModulusTol = 1e-5;

constexpr int kTripleMaxN = 20;
constexpr double kTripleTol = 1e-12;
constexpr double kDpFftTol = 1e-10;
constexpr double kMomentRelTol = 1e-8;
constexpr int kMomentMaxN = 500;

constexpr double kTrendEndTol = 0.5;
constexpr double kTrendSlack = 1.10;

constexpr int kCorrectionFirstM = 2;
constexpr int kCorrectionLastM = 30;

// Fitted bounds are the largest scaled value over the fit range times this.
constexpr double kFitHeadroom = 1.25;
constexpr int kFitMaxN = 200;

constexpr double kMeanSigmas = 3.0;
constexpr double kMeanRelTol = 0.15;
constexpr std::int64_t kExactCutoff = 500;

// var L_N <= q log N, and the ratio may grow at most 2x across checkpoints.
constexpr double kVarianceBound = 1.0;
constexpr double kVarianceSpread = 2.0;

constexpr double kKsTol = 0.01;
constexpr std::int64_t kPerpetuitySamples = 100'000;
constexpr double kExactCdfTol = 0.01;

constexpr int kFastCap = 500;
constexpr std::int64_t kFastReplicas = 200;
constexpr std::int64_t kFullReplicas = 2000;

// Wall-clock budgets in seconds; 0 means none.
constexpr double kBudget[11] = {0, 1, 10, 30, 600, 120, 180, 120, 0, 60, 0};

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string fix(double x, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct Builder {
  CriterionResult r;
  Builder(int id, std::string title) {
    r.id = id;
    r.title = std::move(title);
    r.pass = true;
  }
  // Records a checked quantity; a failed check fails the criterion.
  void check(bool ok, const std::string& line) {
    r.pass = r.pass && ok;
    r.lines.push_back((ok ? "ok   " : "FAIL ") + line);
  }
  void note(const std::string& line) { r.lines.push_back("     " + line); }
};

Pmf pmf_from_span(int n, std::span<const double> p) {
  Pmf pmf;
  pmf.offset = 1;
  pmf.n = n;
  pmf.probs.assign(p.begin(), p.end());
  return pmf;
}

double max_abs_diff(const Pmf& a, const Pmf& b) {
  const std::int64_t lo = std::min(a.offset, b.offset);
  const std::int64_t hi = std::max(a.support_end(), b.support_end());
  double worst = 0.0;
  for (std::int64_t m = lo; m <= hi; ++m) worst = std::max(worst, std::abs(a.at(m) - b.at(m)));
  return worst;
}

CriterionResult criterion_solver() {
  Builder b(1, "Dickman solver");
  const DickmanTable table;
  const double e2 = std::abs(table.rho(2.0) - (1.0 - std::log(2.0)));
  b.check(e2 <= kRho2Tol, "|rho(2) - (1 - log 2)| = " + sci(e2) + " <= " + sci(kRho2Tol));
  const double mass = std::abs(table.cdf(table.u_max()) - 1.0);
  b.check(mass <= kMassTol, "|int rho0 - 1| = " + sci(mass) + " <= " + sci(kMassTol));
  double worst = 0.0;
  for (int j = 0; j < kDdeGrid; ++j) {
    const double u = 1.0 + (kDdeHi - 1.0) * (j + 0.5) / kDdeGrid;
    const double d = (table.rho(u + kDdeStep) - table.rho(u - kDdeStep)) / (2.0 * kDdeStep);
    worst = std::max(worst, std::abs(u * d + table.rho(u - 1.0)));
  }
  b.check(worst <= kDdeTol, "max |u rho'(u) + rho(u - 1)| on " + std::to_string(kDdeGrid) +
                                " points in [1, 10] = " + sci(worst) + " <= " + sci(kDdeTol));
  return b.r;
}

CriterionResult criterion_kernels() {
  Builder b(2, "kernel values at tau = pi");
  const double eg = kExpGamma;
  const Complex eu = std::exp(kernel_U(kPi).value);
  const double d_u = std::abs(eu + 2.0 * eg);
  b.check(d_u <= kKernelTol, "|exp(U(pi)) + 2 e^gamma| = " + sci(d_u));
  const Complex v = kernel_V(kPi).value;
  const double d_v = std::abs(v - Complex(std::log(kPi / 2.0), -kPi / 2.0));
  b.check(d_v <= kKernelTol, "|V(pi) - (log(pi/2) - i pi/2)| = " + sci(d_v));
  const Complex g = kernel_G(kPi).value - kernel_G(-kPi).value;
  const double d_g = std::abs(g + 2.0 / kPi);
  b.check(d_g <= kKernelTol, "|G(pi) - G(-pi) + 2/pi| = " + sci(d_g));
  const Complex f = kernel_F(kPi).value;
  const double d_mod = std::abs(std::abs(f + 1.0) - kPi * eg);
  b.check(d_mod <= kModulusTol, "||F(pi) + 1| - pi e^gamma| = " + sci(d_mod));
  const double d_re = std::abs(f.real() + 1.0);
  b.check(d_re <= kKernelTol, "|Re F(pi) + 1| = " + sci(d_re));
  b.note(std::string("Im F(pi) = ") + fix(f.imag(), 9) + " (sign " + (f.imag() > 0 ? "+" : "-") +
         ")");
  return b.r;
}

CriterionResult criterion_oracles() {
  Builder b(3, "pmf oracle equivalence");
  double worst = 0.0;
  for (int n = 1; n <= kTripleMaxN; ++n) {
    const Pmf dp = tn_pmf(n);
    const Pmf fft = tn_pmf_fft(n);
    const Pmf bf = brute_force_pmf(n);
    worst = std::max({worst, max_abs_diff(dp, fft), max_abs_diff(dp, bf), max_abs_diff(fft, bf)});
  }
  b.check(worst <= kTripleTol,
          "max pairwise |DP - FFT - enumeration| for n <= 20 = " + sci(worst));
  for (int n : {60, 200}) {
    const double d = max_abs_diff(tn_pmf(n), tn_pmf_fft(n));
    b.check(d <= kDpFftTol, "max |DP - FFT| at n = " + std::to_string(n) + " = " + sci(d));
  }
  double mean_err = 0.0;
  double var_err = 0.0;
  tn_pmf_sweep(kMomentMaxN, [&](int k, std::span<const double> p) {
    const Pmf pmf = pmf_from_span(k, p);
    const double nd = k;
    const double var = nd * (nd + 1.0) / 2.0 - nd;
    mean_err = std::max(mean_err, std::abs(pmf.mean() - nd) / nd);
    if (k > 1) var_err = std::max(var_err, std::abs(pmf.variance() - var) / var);
  });
  b.check(mean_err <= kMomentRelTol, "max relative mean error, n <= 500 = " + sci(mean_err));
  b.check(var_err <= kMomentRelTol, "max relative variance error, n <= 500 = " + sci(var_err));
  return b.r;
}

CriterionResult criterion_trend(bool fast) {
  Builder b(4, "strong local limit trend");
  std::vector<int> ladder = {100, 200, 400, 800, 1600, 3200};
  if (fast) std::erase_if(ladder, [](int n) { return n > kFastCap; });
  std::vector<double> r;
  tn_pmf_sweep(ladder.back(), [&](int k, std::span<const double> p) {
    if (std::find(ladder.begin(), ladder.end(), k) == ladder.end()) return;
    const double v = l1_to_dickman(pmf_from_span(k, p));
    const double rn = v / predicted_vn(k);
    r.push_back(rn);
    b.note("n = " + std::to_string(k) + ": v_n = " + sci(v) + ", n v_n = " + fix(k * v) +
           ", r_n = " + fix(rn));
  });
  const bool positive = std::all_of(r.begin(), r.end(), [](double x) { return x > 0.0; });
  b.check(positive, "r_n > 0 on the ladder");
  const double end_dev = std::abs(r.back() - 1.0);
  b.check(end_dev < kTrendEndTol, "|r_" + std::to_string(ladder.back()) + " - 1| = " +
                                      fix(end_dev) + " < " + fix(kTrendEndTol, 2));
  bool monotone = true;
  for (std::size_t i = 1; i < r.size(); ++i) {
    monotone = monotone && std::abs(r[i] - 1.0) <= kTrendSlack * std::abs(r[i - 1] - 1.0);
  }
  b.check(monotone, "|r_n - 1| non-increasing along the ladder (10% slack)");
  return b.r;
}

CriterionResult criterion_correction(bool fast) {
  Builder b(5, "pointwise correction law");
  const int n = fast ? kFastCap : 2000;
  const Pmf pmf = tn_pmf(n);
  std::string wrong_sign;
  double worst_ratio = 0.0;
  for (int m = kCorrectionFirstM; m <= kCorrectionLastM; ++m) {
    const double ct = correction_term(pmf, m);
    const double s = (m % 2 == 1) ? 1.0 : -1.0;
    if (!(ct * s > 0.0)) wrong_sign += " " + std::to_string(m);
    worst_ratio = std::max(worst_ratio, std::abs(ct - s) / (1.0 / m + static_cast<double>(m) / n));
  }
  b.check(wrong_sign.empty(), "sign = (-1)^{m+1} for 2 <= m <= 30 at n = " + std::to_string(n) +
                                  (wrong_sign.empty() ? "" : "; wrong at m =" + wrong_sign));
  b.check(worst_ratio <= kCorrectionC, "max |ct - (-1)^{m+1}| / (1/m + m/n) = " +
                                           fix(worst_ratio) + " <= C = " + fix(kCorrectionC));
  return b.r;
}

CriterionResult criterion_poisson(bool fast) {
  Builder b(6, "Poisson comparison");
  std::vector<int> grid = {50, 100, 150, 200, 500, 1000, 1500, 2000};
  if (fast) grid = {50, 100, 150, 200, 300, 400, 500};
  const int verify_from = fast ? 400 : 1000;
  struct Row {
    int n;
    double a;  // n poisson_vn
    double c;  // n |dtv - vn|
  };
  std::vector<Row> rows;
  tn_pmf_sweep(grid.back(), [&](int k, std::span<const double> p) {
    if (std::find(grid.begin(), grid.end(), k) == grid.end()) return;
    const Pmf tn = pmf_from_span(k, p);
    const Pmf yn = yn_pmf(k);
    const double v = l1_to_dickman(tn);
    const double pv = l1_to_dickman(yn);
    const double d = dtv(tn, yn);
    rows.push_back({k, k * pv, k * std::abs(d - v)});
    b.note("n = " + std::to_string(k) + ": n poisson_v_n = " + fix(k * pv) +
           ", n |d_TV - v_n| = " + fix(k * std::abs(d - v)));
  });
  double c1 = 0.0;
  double c2 = 0.0;
  for (const Row& row : rows) {
    if (row.n > kFitMaxN) continue;
    c1 = std::max(c1, row.a);
    c2 = std::max(c2, row.c);
  }
  c1 *= kFitHeadroom;
  c2 *= kFitHeadroom;
  bool all1 = true;
  bool all2 = true;
  double big1 = 0.0;
  double big2 = 0.0;
  for (const Row& row : rows) {
    all1 = all1 && row.a <= c1;
    all2 = all2 && row.c <= c2;
    if (row.n >= verify_from) {
      big1 = std::max(big1, row.a);
      big2 = std::max(big2, row.c);
    }
  }
  b.note("C1 = " + fix(c1) + ", C2 = " + fix(c2) + " (fit n <= 200, headroom 1.25)");
  b.check(all1, "n poisson_v_n <= C1 on the grid; max for n >= " + std::to_string(verify_from) +
                    " = " + fix(big1));
  b.check(all2, "n |d_TV - v_n| <= C2 on the grid; max for n >= " + std::to_string(verify_from) +
                    " = " + fix(big2));
  return b.r;
}

CriterionResult criterion_mean(bool fast, std::uint64_t seed) {
  Builder b(7, "hit-count mean");
  const std::int64_t N = fast ? kFastCap : 10'000;
  const std::int64_t replicas = fast ? kFastReplicas : kFullReplicas;
  const std::vector<std::int64_t> checkpoints = {N};
  std::uint64_t stream = seed;
  for (double u : {1.0, 2.5}) {
    const TargetSequence target = TargetSequence::floor_un(u, true);
    const ReplicaSummary sim = simulate_replicas(target, N, replicas, stream++, checkpoints);
    const CheckpointAggregate& agg = sim.aggregates.front();
    const ExpectationReport exact = exact_expectation(target, N, kExactCutoff);
    const double z = std::abs(agg.mean - exact.total()) / agg.std_error;
    const std::string tag = "u = " + fix(u, 1) + ", N = " + std::to_string(N) + ": ";
    b.check(z <= kMeanSigmas, tag + "mean " + fix(agg.mean) + " vs exact " + fix(exact.total()) +
                                  ", |z| = " + fix(z, 3) + " <= 3");
    const double density = rho0(u);
    const double per_log = exact.total() / std::log(static_cast<double>(N));
    const double rel = std::abs(per_log - density) / density;
    b.check(rel <= kMeanRelTol, tag + "E L_N / log N = " + fix(per_log) + " vs rho0(u) = " +
                                    fix(density) + ", relative " + fix(rel, 4) + " <= 0.15");
  }
  return b.r;
}

CriterionResult criterion_variance(bool fast, std::uint64_t seed) {
  Builder b(8, "hit-count variance");
  const std::vector<std::int64_t> checkpoints =
      fast ? std::vector<std::int64_t>{100, kFastCap} : std::vector<std::int64_t>{100, 1000, 10'000};
  const std::int64_t replicas = fast ? kFastReplicas : kFullReplicas;
  std::uint64_t stream = seed + 100;
  for (double u : {1.0, 0.5}) {
    const TargetSequence target = TargetSequence::floor_un(u, u >= 1.0);
    const VarianceReport rep =
        variance_study(target, checkpoints.back(), replicas, stream++, checkpoints);
    double lo = rep.rows.front().ratio;
    double hi = lo;
    for (const VarianceRow& row : rep.rows) {
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
      b.check(row.ratio <= kVarianceBound,
              "u = " + fix(u, 1) + ", N = " + std::to_string(row.N) + ": var " +
                  fix(row.variance, 4) + ", q = " + std::to_string(row.q) +
                  ", var / (q log N) = " + fix(row.ratio, 4) + " <= " + fix(kVarianceBound, 2));
    }
    b.check(hi <= kVarianceSpread * lo, "u = " + fix(u, 1) + ": max/min ratio across N = " +
                                            fix(hi / lo, 4) + " <= " + fix(kVarianceSpread, 1));
  }
  return b.r;
}

CriterionResult criterion_weak(bool fast, std::uint64_t seed) {
  Builder b(9, "weak convergence");
  const double ks = ks_distance_to_dickman(perpetuity_sample(kPerpetuitySamples, seed + 200));
  b.check(ks <= kKsTol, "perpetuity KS distance, 1e5 samples = " + sci(ks) + " <= 0.01");
  const int n = fast ? kFastCap : 2000;
  const double d = cdf_sup_distance(tn_pmf(n));
  b.check(d <= kExactCdfTol,
          "exact cdf sup-distance of T_n/n at n = " + std::to_string(n) + " = " + sci(d));
  return b.r;
}

using Runner = std::function<CriterionResult()>;

CriterionResult timed(int id, const Runner& run, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = run();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (kBudget[id] > 0.0 && r.seconds > kBudget[id]) {
    r.pass = false;
    r.lines.push_back("FAIL runtime over the " + fix(kBudget[id], 0) + " s budget");
  }
  if (log) *log << "criterion " << id << ": " << fix(r.seconds, 2) << " s\n";
  return r;
}

std::vector<CriterionResult> run_core(bool fast, std::uint64_t seed, const std::set<int>& only,
                                      std::ostream* log) {
  const std::pair<int, Runner> table[] = {
      {1, [] { return criterion_solver(); }},
      {2, [] { return criterion_kernels(); }},
      {3, [] { return criterion_oracles(); }},
      {4, [fast] { return criterion_trend(fast); }},
      {5, [fast] { return criterion_correction(fast); }},
      {6, [fast] { return criterion_poisson(fast); }},
      {7, [fast, seed] { return criterion_mean(fast, seed); }},
      {8, [fast, seed] { return criterion_variance(fast, seed); }},
      {9, [fast, seed] { return criterion_weak(fast, seed); }},
  };
  std::vector<CriterionResult> out;
  for (const auto& [id, run] : table) {
    if (only.empty() || only.count(id)) out.push_back(timed(id, run, log));
  }
  return out;
}

std::string render(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const CriterionResult& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << '\n';
    for (const std::string& line : r.lines) os << "    " << line << '\n';
  }
  return os.str();
}

}  // namespace

double correction_calibration(int n) {
  const Pmf pmf = tn_pmf(n);
  double worst = 0.0;
  for (int m = kCorrectionFirstM; m <= kCorrectionLastM; ++m) {
    const double s = (m % 2 == 1) ? 1.0 : -1.0;
    worst = std::max(worst, std::abs(correction_term(pmf, m) - s) /
                                (1.0 / m + static_cast<double>(m) / n));
  }
  return worst;
}

bool VerifyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

std::vector<int> VerifyReport::failed() const {
  std::vector<int> ids;
  for (const auto& r : results) {
    if (!r.pass) ids.push_back(r.id);
  }
  return ids;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  os << "verify mode=" << (fast ? "fast" : "full") << " seed=" << seed << '\n';
  os << render(results);
  const std::vector<int> bad = failed();
  os << "summary: " << results.size() - bad.size() << "/" << results.size() << " passed";
  if (!bad.empty()) {
    os << "; failed:";
    for (int id : bad) os << ' ' << id;
  }
  os << '\n';
  return os.str();
}

VerifyReport run_verify(const VerifyOptions& options, std::ostream* timing_log) {
  VerifyReport report;
  report.fast = options.fast;
  report.seed = options.seed;
  report.results = run_core(options.fast, options.seed, options.only, timing_log);

  if (options.only.empty() || options.only.count(10)) {
    // Two fast runs of criteria 1-9 with different thread counts must render identically.
    const auto t0 = std::chrono::steady_clock::now();
    Builder b(10, "determinism");
    const std::string first = options.fast && options.only.empty()
                                  ? render(report.results)
                                  : render(run_core(true, options.seed, {}, nullptr));
    const int threads = omp_get_max_threads();
    const int other = threads > 1 ? 1 : 2;
    omp_set_num_threads(other);
    const std::string second = render(run_core(true, options.seed, {}, nullptr));
    omp_set_num_threads(threads);
    b.note("threads " + std::string(threads > 1 ? "default" : "1") + " vs " +
           std::to_string(other));
    b.check(first == second, "fast reports byte-identical across two runs");
    b.r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (timing_log) *timing_log << "criterion 10: " << fix(b.r.seconds, 2) << " s\n";
    report.results.push_back(b.r);
  }
  return report;
}

}  // namespace dickman
