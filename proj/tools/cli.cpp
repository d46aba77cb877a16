#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dickman/asllt.hpp"
#include "dickman/exact_dist.hpp"
#include "dickman/kernels.hpp"
#include "dickman/special_fn.hpp"
#include "dickman/verify.hpp"

namespace dickman::cli {

namespace {

using json = nlohmann::json;
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  return std::get<std::string>(c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(t.columns[i]);
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << '\n';
  }
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

struct Config {
  std::string format;  // "" until set; csv for tables, text for verify
  std::string output;
  int threads = 0;

  std::vector<double> u;
  int n = 0;
  std::string model = "T";
  std::string method = "dp";
  std::string kernel;
  std::vector<double> tau;
  std::vector<int> n_list;
  std::string m_range = "2:30";
  double asllt_u = 1.0;
  std::int64_t N = 0;
  std::int64_t replicas = 1;
  std::uint64_t seed = 20240607;
  std::vector<std::int64_t> checkpoints;
  std::int64_t count = 0;
  bool fast = false;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_n(int n) {
  require(n >= 1, "--n must be >= 1");
  if (n > kDefaultNCap) {
    throw ResourceError("--n = " + std::to_string(n) + " exceeds the exact pmf cap " +
                        std::to_string(kDefaultNCap));
  }
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const std::int64_t v = std::stoll(s);
      return {v, v};
    }
    return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--m-range", "expected LO:HI, got '" + s + "'");
  }
}

json params_json(const std::string& command, const Config& c) {
  json p = json::object();
  if (command == "rho" || command == "cdf") p["u"] = c.u;
  if (command == "pmf") p = {{"model", c.model}, {"n", c.n}, {"method", c.method}};
  if (command == "kernels") p = {{"kernel", c.kernel}, {"n", c.n}, {"tau", c.tau}};
  if (command == "vn") p["n_list"] = c.n_list;
  if (command == "correction") p = {{"n", c.n}, {"m_range", c.m_range}};
  if (command == "asllt") {
    p = {{"u", c.asllt_u},         {"N", c.N},
         {"replicas", c.replicas}, {"seed", c.seed},
         {"checkpoints", c.checkpoints}};
  }
  if (command == "perpetuity") p = {{"count", c.count}, {"seed", c.seed}};
  return p;
}

Table cmd_dickman(const Config& c, bool cdf) {
  require(!c.u.empty(), "--u is required");
  const DickmanTable& table = DickmanTable::standard();
  for (double u : c.u) {
    require(std::isfinite(u) && u <= table.u_max(),
            "--u must be finite and <= " + format_double(table.u_max()));
  }
  Table t{{"u", cdf ? "cdf" : "rho"}, {}};
  for (double u : c.u) t.rows.push_back({u, cdf ? table.cdf(u) : table.rho(u)});
  return t;
}

Table cmd_pmf(const Config& c) {
  Pmf pmf;
  if (c.model == "T") {
    require_n(c.n);
    if (c.method == "dp") {
      pmf = tn_pmf(c.n);
    } else if (c.method == "fft") {
      pmf = tn_pmf_fft(c.n);
    } else {
      if (c.n > kBruteForceCap) {
        throw ResourceError("--n exceeds the enumeration cap " + std::to_string(kBruteForceCap));
      }
      pmf = brute_force_pmf(c.n);
    }
  } else {
    require(c.n >= 1, "--n must be >= 1");
    require(c.method == "dp", "--method applies to --model T only");
    pmf = yn_pmf(c.n);
  }
  Table t{{"m", "p"}, {}};
  for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
    if (pmf.probs[i] == 0.0) continue;
    t.rows.push_back({pmf.offset + static_cast<std::int64_t>(i), pmf.probs[i]});
  }
  return t;
}

Table cmd_kernels(const Config& c) {
  const auto kernel = parse_kernel(c.kernel);
  require(kernel.has_value(), "--kernel: unknown kernel '" + c.kernel + "'");
  require(!c.tau.empty(), "--tau is required");
  const bool uses_n = kernel_uses_n(*kernel);
  if (uses_n) require(c.n >= 1, "--n must be >= 1 for kernel " + c.kernel);
  for (double tau : c.tau) {
    require(std::isfinite(tau) && (*kernel == Kernel::phi_n || std::abs(tau) <= kPi),
            "--tau must lie in [-pi, pi]");
  }
  Table t{{"kernel", "n", "tau", "re", "im", "est_abs_err"}, {}};
  for (double tau : c.tau) {
    const KernelValue v =
        evaluate_kernel(*kernel, uses_n ? std::optional<std::int64_t>(c.n) : std::nullopt, tau);
    t.rows.push_back({std::string(kernel_name(*kernel)),
                      uses_n ? Cell(static_cast<std::int64_t>(c.n)) : Cell(std::string()),
                      tau, v.value.real(), v.value.imag(), v.est_abs_err});
  }
  return t;
}

Table cmd_vn(const Config& c) {
  require(!c.n_list.empty(), "--n-list is required");
  for (int n : c.n_list) require_n(n);
  Table t{{"n", "v_n", "poisson_v_n", "d_TV", "predicted", "ratio"}, {}};
  for (int n : c.n_list) {
    const Pmf tn = tn_pmf(n);
    const Pmf yn = yn_pmf(n);
    const double v = l1_to_dickman(tn);
    const double pred = n > 1 ? predicted_vn(n) : std::nan("");
    t.rows.push_back({static_cast<std::int64_t>(n), v, l1_to_dickman(yn), dtv(tn, yn), pred,
                      v / pred});
  }
  return t;
}

Table cmd_correction(const Config& c) {
  require_n(c.n);
  const auto [lo, hi] = parse_range(c.m_range);
  const std::int64_t end = static_cast<std::int64_t>(c.n) * (c.n + 1) / 2;
  require(lo >= 1 && lo <= hi && hi <= end,
          "--m-range must satisfy 1 <= LO <= HI <= n(n+1)/2 = " + std::to_string(end));
  const Pmf pmf = tn_pmf(c.n);
  Table t{{"n", "m", "correction", "predicted"}, {}};
  for (std::int64_t m = lo; m <= hi; ++m) {
    t.rows.push_back({static_cast<std::int64_t>(c.n), m, correction_term(pmf, m),
                      m % 2 == 1 ? 1.0 : -1.0});
  }
  return t;
}

void cmd_asllt(const Config& c, std::ostream& out) {
  require(std::isfinite(c.asllt_u) && c.asllt_u > 0.0, "--u must be positive");
  require(c.N >= 1 && c.N <= kMaxWalkLength,
          "--N must lie in [1, " + std::to_string(kMaxWalkLength) + "]");
  require(c.replicas >= 1, "--replicas must be >= 1");
  std::vector<std::int64_t> checkpoints = c.checkpoints;
  if (checkpoints.empty()) checkpoints.push_back(c.N);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  require(checkpoints.front() >= 1 && checkpoints.back() <= c.N,
          "--checkpoints must lie in [1, N]");
  if (static_cast<double>(c.replicas) * static_cast<double>(c.N) > 1e11) {
    throw ResourceError("--replicas * --N exceeds the 1e11 work cap");
  }
  const TargetSequence target = TargetSequence::floor_un(c.asllt_u, c.asllt_u >= 1.0);
  const ReplicaSummary sum = simulate_replicas(target, c.N, c.replicas, c.seed, checkpoints);
  Table t{{"N", "mean", "variance", "std_error", "log_N", "mean_over_log_N", "rho0_u"}, {}};
  const double density = rho0(std::min(c.asllt_u, DickmanTable::standard().u_max()));
  for (const auto& a : sum.aggregates) {
    const double lg = std::log(static_cast<double>(a.N));
    t.rows.push_back({a.N, a.mean, a.variance, a.std_error, lg, a.N > 1 ? a.mean / lg : std::nan(""),
                      density});
  }
  if (c.format == "json") {
    json reps = json::array();
    for (const auto& r : sum.replicas) reps.push_back({{"replica", r.replica}, {"counts", r.counts}});
    json doc = {{"command", "asllt"},
                {"params", params_json("asllt", c)},
                {"aggregates", table_json(t)},
                {"replicas", std::move(reps)}};
    out << doc.dump(2) << '\n';
  } else {
    write_csv(out, t);
  }
}

void cmd_perpetuity(const Config& c, std::ostream& out) {
  require(c.count >= 1, "--count must be >= 1");
  if (c.count > 100'000'000) throw ResourceError("--count exceeds the 1e8 cap");
  const std::vector<double> xs = perpetuity_sample(c.count, c.seed);
  const double ks = ks_distance_to_dickman(xs);
  Table t{{"index", "value"}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({static_cast<std::int64_t>(i), xs[i]});
  if (c.format == "json") {
    json doc = {{"command", "perpetuity"},
                {"params", params_json("perpetuity", c)},
                {"ks_distance", ks},
                {"samples", table_json(t)}};
    out << doc.dump(2) << '\n';
  } else {
    write_csv(out, t);
  }
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  VerifyOptions opt;
  opt.fast = c.fast;
  opt.seed = c.seed;
  const VerifyReport rep = run_verify(opt, &err);
  if (c.format == "json") {
    json crit = json::array();
    for (const auto& r : rep.results) {
      crit.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"lines", r.lines}});
    }
    json doc = {{"command", "verify"},
                {"fast", rep.fast},
                {"seed", rep.seed},
                {"all_passed", rep.all_passed()},
                {"criteria", std::move(crit)}};
    out << doc.dump(2) << '\n';
  } else {
    out << rep.text();
  }
  return rep.all_passed() ? kOk : kVerifyFailed;
}

void emit(const std::string& command, const Config& c, const Table& t, std::ostream& out) {
  if (c.format == "json") {
    json doc = table_json(t);
    doc["command"] = command;
    doc["params"] = params_json(command, c);
    out << doc.dump(2) << '\n';
  } else {
    write_csv(out, t);
  }
}

int dispatch(const std::string& command, Config& c, std::ostream& out, std::ostream& err) {
  if (command == "verify") return cmd_verify(c, out, err);
  if (c.format.empty()) c.format = "csv";
  if (command == "rho") emit(command, c, cmd_dickman(c, false), out);
  if (command == "cdf") emit(command, c, cmd_dickman(c, true), out);
  if (command == "pmf") emit(command, c, cmd_pmf(c), out);
  if (command == "kernels") emit(command, c, cmd_kernels(c), out);
  if (command == "vn") emit(command, c, cmd_vn(c), out);
  if (command == "correction") emit(command, c, cmd_correction(c), out);
  if (command == "asllt") cmd_asllt(c, out);
  if (command == "perpetuity") cmd_perpetuity(c, out);
  return kOk;
}

int fail(std::ostream& err, int code, const std::string& msg) {
  std::string line = msg;
  std::replace(line.begin(), line.end(), '\n', ' ');
  while (!line.empty() && line.back() == ' ') line.pop_back();
  err << "dickman: error: " << line << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Dickman-limit computations for sums of independent Bernoulli(1/k) jumps"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", c.output, "Write results to this file instead of stdout");
  app.add_option("--threads", c.threads, "OpenMP thread count (default: $DICKMAN_NUM_THREADS)")
      ->check(CLI::Range(1, 4096));

  auto* rho = app.add_subcommand("rho", "Dickman function rho(u)");
  rho->add_option("--u", c.u, "Argument(s)")->required()->delimiter(',');
  auto* cdf = app.add_subcommand("cdf", "Dickman distribution function");
  cdf->add_option("--u", c.u, "Argument(s)")->required()->delimiter(',');

  auto* pmf = app.add_subcommand("pmf", "Exact pmf of T_n or Y_n");
  pmf->add_option("--model", c.model, "T (Bernoulli) or Y (Poisson)")
      ->check(CLI::IsMember({"T", "Y"}));
  pmf->add_option("--n", c.n, "Model index")->required();
  pmf->add_option("--method", c.method, "dp, fft or brute (model T)")
      ->check(CLI::IsMember({"dp", "fft", "brute"}));

  auto* kern = app.add_subcommand("kernels", "Analytic kernels of the characteristic function");
  kern->add_option("--kernel", c.kernel, "S_n, U, V, V_n, W_n, a, F, G, phi_n, Wstar_n")
      ->required();
  kern->add_option("--n", c.n, "Index for n-dependent kernels");
  kern->add_option("--tau", c.tau, "Frequencies")->required()->delimiter(',');

  auto* vn = app.add_subcommand("vn", "l1 distance to the Dickman density");
  vn->add_option("--n-list", c.n_list, "Indices")->required()->delimiter(',');

  auto* corr = app.add_subcommand("correction", "Normalized pointwise correction term");
  corr->add_option("--n", c.n, "Model index")->required();
  corr->add_option("--m-range", c.m_range, "LO:HI (default 2:30)");

  auto* as = app.add_subcommand("asllt", "Monte-Carlo hit counts L_N(u)");
  as->add_option("--u", c.asllt_u, "Slope of m_n = floor(u n)")->required();
  as->add_option("--N", c.N, "Walk length")->required();
  as->add_option("--replicas", c.replicas, "Independent replicas");
  as->add_option("--seed", c.seed, "Base seed");
  as->add_option("--checkpoints", c.checkpoints, "N values to report (default N)")
      ->delimiter(',');

  auto* perp = app.add_subcommand("perpetuity", "Exact Dickman samples from the perpetuity");
  perp->add_option("--count", c.count, "Number of samples")->required();
  perp->add_option("--seed", c.seed, "Base seed");

  auto* ver = app.add_subcommand("verify", "Run the acceptance criteria");
  ver->add_flag("--fast", c.fast, "Cap n at 500 and replicas at 200");
  ver->add_option("--seed", c.seed, "Base seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ValidationError& e) {
    return fail(err, kOutOfRange, e.what());
  } catch (const CLI::ParseError& e) {
    return fail(err, kUsage, e.what());
  }

  if (c.threads > 0) {
    omp_set_num_threads(c.threads);
  } else if (const char* env = std::getenv("DICKMAN_NUM_THREADS")) {
    const int t = std::atoi(env);
    if (t < 1) return fail(err, kUsage, "DICKMAN_NUM_THREADS must be a positive integer");
    omp_set_num_threads(t);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::ofstream file;
    std::ostringstream buffer;
    const int code = dispatch(command, c, buffer, err);
    if (c.output.empty()) {
      out << buffer.str();
    } else {
      file.open(c.output, std::ios::binary);
      if (!file) return fail(err, kUsage, "cannot open output file " + c.output);
      file << buffer.str();
    }
    return code;
  } catch (const CLI::ValidationError& e) {
    return fail(err, kOutOfRange, e.what());
  } catch (const DomainError& e) {
    return fail(err, kOutOfRange, e.what());
  } catch (const ResourceError& e) {
    return fail(err, kResource, e.what());
  } catch (const NumericalError& e) {
    return fail(err, kNumerical, e.what());
  } catch (const std::bad_alloc&) {
    return fail(err, kResource, "out of memory");
  } catch (const std::exception& e) {
    return fail(err, kInternal, e.what());
  }
}

}  // namespace dickman::cli
