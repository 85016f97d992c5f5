#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ddestab/cli.hpp"

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ddestab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  return v;
}

const std::vector<std::string> kOnes{"--alpha", "1", "--delta", "1", "--l", "1", "--f", "1"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_CASE("eig") {
  const auto r = invoke(with({"eig", "--beta", "0", "--tau", "1"}, kOnes));
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "re,im,residual,structural,multiplicity");
  CHECK(l[1].rfind("-1,0,", 0) == 0);

  const auto b0 = invoke(with({"eig", "--beta", "1.5819767068693265", "--tau", "1", "--format", "json"}, kOnes));
  CHECK(b0.code == 0);
  const auto doc = nlohmann::json::parse(b0.out);
  CHECK(doc["schema_version"] == 1);
  bool zero = false;
  for (const auto& row : doc["rows"]) {
    zero = zero || (std::abs(row["re"].get<double>()) <= 1e-8 && std::abs(row["im"].get<double>()) <= 1e-8);
  }
  CHECK(zero);
}

TEST_CASE("usage and validation errors") {
  const auto missing = invoke({"eig", "--alpha", "1", "--beta", "1"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("Usage") != std::string::npos);
  CHECK(invoke({}).code == 2);
  CHECK(invoke(with({"classify", "--beta", "1", "--tau", "-1"}, kOnes)).code == 2);
  CHECK(invoke(with({"sweep", "--beta-range", "2:1"}, kOnes)).code == 2);
  CHECK(invoke(with({"sweep", "--grid", "5"}, kOnes)).code == 2);
  CHECK(invoke(with({"eig", "--beta", "1", "--tau", "1", "--format", "svg"}, kOnes)).code == 2);
  CHECK(invoke(with({"simulate", "--beta", "1", "--tau", "1", "--nx", "0"}, kOnes)).code == 2);
}

TEST_CASE("classify") {
  const auto r = invoke(with({"classify", "--beta", "1", "--tau", "1"}, kOnes));
  CHECK(r.code == 0);
  CHECK(lines(r.out).at(1).rfind("StableSteadyState,SpectralSearch,<", 0) == 0);
  CHECK(lines(invoke(with({"classify", "--beta", "-4", "--tau", "4"}, kOnes)).out).at(1).rfind(
            "LimitCycleOscillation", 0) == 0);
  CHECK(lines(invoke(with({"classify", "--beta", "0.5", "--tau", "0.2"}, kOnes)).out).at(1) ==
        "StableSteadyState,DecayCertificate,");
}

TEST_CASE("sweep csv, json and svg") {
  const std::vector<std::string> args =
      with({"sweep", "--beta-range=-5:5", "--tau-range", "0:10", "--grid", "4x3"}, kOnes);
  const auto csv = invoke(args);
  CHECK(csv.code == 0);
  const auto l = lines(csv.out);
  REQUIRE(l.size() == 13);
  CHECK(l[0] == "tau,beta,label,evidence,max_real_part,error");
  CHECK(l[1].rfind("0,-5,", 0) == 0);
  CHECK(l[4].rfind("10,-5,", 0) == 0);
  CHECK(l[12].rfind("10,5,LimitCycleOscillation", 0) == 0);
  CHECK(invoke(args).out == csv.out);

  const auto json = invoke(with(args, {"--format", "json"}));
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["rows"].size() == 12);
  CHECK(doc["rows"][0]["tau"] == 0.0);

  const auto svg = invoke(with(args, {"--format", "svg"}));
  CHECK(svg.code == 0);
  CHECK(svg.out.rfind("<svg", 0) == 0);
  CHECK(svg.out.find("<circle") != std::string::npos);
  CHECK(svg.out.find(">tau<") != std::string::npos);
  CHECK(svg.out.find(">beta<") != std::string::npos);
}

TEST_CASE("trace-r0") {
  const auto r = invoke(with({"trace-r0", "--tau-max", "10", "--steps", "500"}, kOnes));
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  CHECK(l[0] == "tau,omega,beta,residual");
  int horizontal = 0;
  for (std::size_t i = 1; i < l.size(); ++i) {
    if (l[i].find(",0,1.58197670686") != std::string::npos) ++horizontal;
  }
  CHECK(horizontal == 500);
}

TEST_CASE("simulate and certify") {
  const auto sim = invoke({"simulate", "--alpha", "1", "--beta", "0.5", "--delta", "1", "--l", "1", "--f", "1",
                           "--tau", "0.3", "--nx", "100", "--t-final", "200", "--gamma", "0.7408182206817179",
                           "--stride", "100", "--fit", "50:200"});
  CHECK(sim.code == 0);
  const auto l = lines(sim.out);
  CHECK(l[0] == "t,E,a_sq,c_l");
  CHECK(l.size() == 202);
  CHECK(sim.err.find("fitted decay rate") != std::string::npos);

  const auto cert = invoke({"certify", "--alpha", "1", "--beta", "0.5", "--delta", "1", "--l", "1", "--f", "1",
                            "--tau", "0.3"});
  CHECK(cert.code == 0);
  CHECK(lines(cert.out).at(1).rfind("Applicable,0.74081822068171", 0) == 0);
  const auto na = invoke({"certify", "--alpha", "1", "--beta", "1.5", "--delta", "1", "--l", "1", "--f", "1",
                          "--tau", "0"});
  CHECK(lines(na.out).at(1).rfind("NotApplicable", 0) == 0);
}
