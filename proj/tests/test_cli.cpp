#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dickman::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("rho and cdf") {
    const Outcome r = run({"rho", "--u", "2"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "u,rho");
    CHECK(ls[1].rfind("2,0.30685281944", 0) == 0);
    CHECK(r.out.find('\r') == std::string::npos);

    const Outcome c = run({"cdf", "--u", "0", "1", "--format", "json"});
    REQUIRE(c.code == 0);
    const auto doc = nlohmann::json::parse(c.out);
    CHECK(doc["command"] == "cdf");
    CHECK(doc["columns"] == nlohmann::json::array({"u", "cdf"}));
    CHECK(doc["rows"][0]["cdf"].get<double>() == 0.0);
    CHECK(std::abs(doc["rows"][1]["cdf"].get<double>() - 0.56145948356688517) <= 1e-12);
  }

  TEST_CASE("pmf rows") {
    const Outcome r = run({"pmf", "--model", "T", "--n", "2", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out) == std::vector<std::string>{"m,p", "1,0.5", "3,0.5"});
    const Outcome b = run({"--format", "csv", "pmf", "--n", "3", "--method", "brute"});
    REQUIRE(b.code == 0);
    CHECK(lines(b.out).size() == 5);
    const Outcome y = run({"pmf", "--model", "Y", "--n", "1", "--format", "json"});
    REQUIRE(y.code == 0);
    const auto doc = nlohmann::json::parse(y.out);
    CHECK(std::abs(doc["rows"][0]["p"].get<double>() - std::exp(-1.0)) <= 1e-15);
  }

  TEST_CASE("vn prediction column") {
    const Outcome r = run({"vn", "--n-list", "100", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const double predicted = doc["rows"][0]["predicted"].get<double>();
    CHECK(std::abs(predicted - 0.0093318) <= 1e-6);
    CHECK(doc["rows"][0]["v_n"].get<double>() > predicted);
  }

  TEST_CASE("kernels and correction") {
    const Outcome k = run({"kernels", "--kernel", "a", "--tau", "0", "--format", "json"});
    REQUIRE(k.code == 0);
    const auto doc = nlohmann::json::parse(k.out);
    CHECK(doc["rows"][0]["re"].get<double>() == doctest::Approx(0.5));
    const Outcome c = run({"correction", "--n", "100", "--m-range", "2:5"});
    REQUIRE(c.code == 0);
    CHECK(lines(c.out).size() == 5);
    CHECK(lines(c.out)[0] == "n,m,correction,predicted");
  }

  TEST_CASE("asllt and perpetuity") {
    const Outcome a = run({"asllt", "--u", "1", "--N", "100", "--replicas", "10", "--seed", "3",
                           "--format", "json"});
    REQUIRE(a.code == 0);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc["replicas"].size() == 10);
    const Outcome again = run({"asllt", "--u", "1", "--N", "100", "--replicas", "10", "--seed", "3",
                               "--format", "json"});
    CHECK(again.out == a.out);
    const Outcome p = run({"perpetuity", "--count", "5", "--format", "json"});
    REQUIRE(p.code == 0);
    CHECK(nlohmann::json::parse(p.out)["samples"]["rows"].size() == 5);
  }

  TEST_CASE("exit codes") {
    const Outcome usage = run({"pmf", "--bogus"});
    CHECK(usage.code == dickman::cli::kUsage);
    CHECK(lines(usage.err).size() == 1);
    CHECK(usage.err.rfind("dickman: error: ", 0) == 0);
    CHECK(run({}).code == dickman::cli::kUsage);
    CHECK(run({"pmf", "--n", "5000"}).code == dickman::cli::kResource);
    CHECK(run({"pmf", "--n", "30", "--method", "brute"}).code == dickman::cli::kResource);
    CHECK(run({"rho", "--u", "100"}).code == dickman::cli::kOutOfRange);
    CHECK(run({"kernels", "--kernel", "V", "--tau", "4"}).code == dickman::cli::kOutOfRange);
    CHECK(run({"kernels", "--kernel", "nope", "--tau", "1"}).code == dickman::cli::kOutOfRange);
    CHECK(run({"correction", "--n", "10", "--m-range", "x"}).code == dickman::cli::kOutOfRange);
    CHECK(run({"pmf", "--n", "2", "--format", "xml"}).code == dickman::cli::kOutOfRange);
    CHECK(run({"asllt", "--u", "1", "--N", "1000000", "--replicas", "1000000"}).code ==
          dickman::cli::kResource);
    CHECK(run({"--help"}).code == dickman::cli::kOk);
  }
}
