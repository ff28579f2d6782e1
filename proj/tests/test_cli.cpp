#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using nlohmann::json;
namespace cli = convexchains::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("convexchains_test_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("count-exact JSON and CSV") {
  const Result j = run({"count-exact", "--n1", "2", "--n2", "2", "--json"});
  REQUIRE(j.code == cli::kExitOk);
  const json doc = json::parse(j.out);
  CHECK(doc["counts"] == json{{"1", "1"}, {"2", "3"}, {"3", "1"}});
  CHECK(doc["n1"] == 2);
  const Result c = run({"count-exact", "--n1", "2", "--n2", "2"});
  const auto l = lines(c.out);
  REQUIRE(l.size() == 5);
  CHECK(l[0] == "N,count");
  CHECK(l[3] == "2,3");
  // big integers survive as strings
  const json big = json::parse(run({"--json", "count-exact", "--n1", "30", "--n2", "30"}).out);
  CHECK(big["total"].is_string());
  CHECK(big["total"].get<std::string>().size() > 8);
}

TEST_CASE("constants rows") {
  const Result r = run({"constants", "--lambda", "1"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "lambda,delta,c,e,c_J,e_J");
  CHECK(l[1].rfind("1,0.900725,0.749320,2.702175,", 0) == 0);
  const Result s = run({"constants", "--sweep", "0.01,100,5"});
  CHECK(lines(s.out).size() == 6);
  CHECK(lines(s.out)[1].rfind("0.01,", 0) == 0);
  CHECK(lines(s.out)[5].rfind("100,", 0) == 0);
  const Result jk = run({"jarnik", "--json"});
  CHECK(json::parse(jk.out)["max_constant"].get<double>() == doctest::Approx(3 / (2 * std::cbrt(std::numbers::pi))).epsilon(1e-12));
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"count-exact", "--n1", "2"}).code == cli::kExitUsage);
  CHECK(run({"count-exact", "--n1", "2", "--n2", "2", "--bogus"}).code == cli::kExitUsage);
  CHECK(run({"count-exact", "--n1", "-2", "--n2", "2"}).code == cli::kExitDomain);
  CHECK(run({"count-exact", "--n1", "50", "--n2", "50"}).code == cli::kExitResource);
  CHECK(run({"calibrate", "--n", "100", "--c", "2"}).code == cli::kExitDomain);
  CHECK(run({"shape", "--L", "2.5"}).code == cli::kExitDomain);
  CHECK(run({"moments", "--z", "1.2"}).code == cli::kExitDomain);
  CHECK(run({"sample", "--z", "0.3", "--n1", "80", "--n2", "80", "--max-attempts", "100"}).code ==
        cli::kExitResource);
  const Result h = run({"--help"});
  CHECK(h.code == cli::kExitOk);
  CHECK(h.out.find("Exit codes") != std::string::npos);
  CHECK(run({"sample", "--help"}).code == cli::kExitOk);
}

TEST_CASE("sample output is reproducible and conditioned") {
  const std::vector<std::string> args{"sample", "--z", "0.7", "--n1", "12", "--n2", "12", "--seed", "5", "--json"};
  const Result a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json doc = json::parse(a.out);
  CHECK(doc["samples"][0]["endpoint"] == json{12, 12});
  const Result csv = run({"sample", "--z", "0.7", "--n1", "12", "--n2", "12", "--seed", "5"});
  const auto l = lines(csv.out);
  CHECK(l.front() == "0,0");
  CHECK(l.back() == "12,12");
  const Result many = run({"sample", "--z", "0.7", "--count", "3", "--seed", "1"});
  CHECK(lines(many.out)[0] == "sample,x,y");
  const Result cal = run({"sample", "--n", "50", "--s", "0.5", "--c", "1", "--refine", "--n1", "50", "--n2", "50",
                          "--window", "1", "--json"});
  CHECK(cal.code == 0);
}

TEST_CASE("estimates, moments, calibration, shapes, random model") {
  const Result e = run({"count-estimate", "--z", "0.3", "--n1", "2", "--n2", "2", "--vertices", "2", "--replicas",
                        "20000", "--json"});
  REQUIRE(e.code == 0);
  CHECK(json::parse(e.out)["estimate"].get<double>() == doctest::Approx(3.0).epsilon(0.15));
  const Result a = run({"count-estimate", "--auto", "--n1", "6", "--n2", "4", "--vertices", "3", "--json"});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["hits"].get<int>() > 0);
  const Result l = run({"count-estimate", "--z", "0.5", "--length", "5", "--vertices", "3", "--json"});
  REQUIRE(l.code == 0);
  CHECK(json::parse(l.out)["high"].get<double>() >= json::parse(l.out)["low"].get<double>());

  const Result m = run({"moments", "--z1", "0.8", "--z2", "0.7", "--lambda", "2", "--covariance", "--json"});
  REQUIRE(m.code == 0);
  CHECK(json::parse(m.out)["covariance"]["positive_semidefinite"] == true);

  const Result c = run({"calibrate", "--n", "1000", "--kind", "mixed", "--L", "1.8", "--json"});
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["family"]["branch"] == "alpha");

  const Result s = run({"shape", "--L", "1.7", "--points", "101"});
  REQUIRE(s.code == 0);
  CHECK(lines(s.out).size() == 102);
  CHECK(run({"shape", "--parabola", "--circle"}).code == cli::kExitUsage);

  const Result r = run({"random-model", "--k", "2", "--trials", "20000", "--n", "10", "--json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["target_exact"] == "1/12");
  const Result d = run({"dbound"});
  CHECK(d.out == "2.668\n");
}

TEST_CASE("--out and --manifest") {
  const auto out = temp_file("out.csv");
  const auto manifest = temp_file("manifest.jsonl");
  for (int i = 0; i < 2; ++i) {
    const Result r = run({"sample", "--z", "0.6", "--seed", "9", "--out", out.string(), "--manifest", manifest.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
  }
  std::ifstream f(out);
  std::string first;
  std::getline(f, first);
  CHECK(first == "0,0");
  std::ifstream m(manifest);
  std::vector<json> records;
  for (std::string line; std::getline(m, line);) records.push_back(json::parse(line));
  REQUIRE(records.size() == 2);
  CHECK(records[0]["command"] == "sample");
  CHECK(records[0]["seed"] == 9);
  CHECK(records[0]["parameters"]["--z"] == "0.6");
  CHECK(records[0]["params"]["kind"] == "endpoint");
  CHECK(records[0]["params"]["truncation_tolerance"] == 1e-12);
  CHECK(records[0].contains("attempts"));
  CHECK(records[0].contains("version"));
  CHECK(records[0].contains("wall_time_seconds"));
  // the recorded argv replays to the same output
  std::vector<std::string> argv = records[1]["argv"];
  const auto replay = temp_file("replay.csv");
  for (auto& a : argv) {
    if (a == out.string()) a = replay.string();
    if (a == manifest.string()) a = temp_file("m2.jsonl").string();
  }
  REQUIRE(run(argv).code == 0);
  std::ifstream f1(out), f2(replay);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {}), s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
}
