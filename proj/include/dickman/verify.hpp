#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace dickman {

struct VerifyOptions {
  bool fast = false;
  std::uint64_t seed = 20240607;
  // Criteria to run; empty means 1..10.
  std::set<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> lines;  // measured values, deterministic
  double seconds = 0.0;            // wall time, never part of the report text
};

struct VerifyReport {
  bool fast = false;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> results;

  bool all_passed() const;
  std::vector<int> failed() const;
  // Deterministic text: one PASS/FAIL line per criterion plus detail lines.
  std::string text() const;
};

// correction_calibration(4000), computed once and frozen.
inline constexpr double kCorrectionC = 48.371374015638082;

// max_{2 <= m <= 30} |ct(n, m) - (-1)^{m+1}| / (1/m + m/n).
double correction_calibration(int n);

// Runs the acceptance criteria. Timings go to `timing_log` when non-null.
VerifyReport run_verify(const VerifyOptions& options, std::ostream* timing_log = nullptr);

}  // namespace dickman
