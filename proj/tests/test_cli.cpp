#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ldopt/cli.hpp"
#include "ldopt/document.hpp"
#include "ldopt/error.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ldopt::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "ldopt-cli-tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

const char* kFivePoint = R"({
  "model": "logistic",
  "params": {"alpha": 0, "beta": 1},
  "region": [-2, 2],
  "support": [
    {"point": -1.5, "weight": 0.2},
    {"point": -0.3, "weight": 0.2},
    {"point": 0.4, "weight": 0.2},
    {"point": 1.1, "weight": 0.2},
    {"point": 1.9, "weight": 0.2}
  ]
}
)";

const char* kEmptyPoisson = R"({"model": "poisson-loglinear", "params": {"alpha": 0, "beta": 1},
 "region": [-5, 1], "support": []})";

}  // namespace

TEST_CASE("classify from flags") {
  const Outcome r = run({"classify", "--model", "poisson-loglinear", "--region", "-3", "3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "TypeII");
  CHECK(j["model"] == "poisson-loglinear");

  const Outcome bp = run({"classify", "--model", "cloglog", "--region", "-5", "5", "--breakpoints"});
  REQUIRE(bp.code == 0);
  const json jb = json::parse(bp.out);
  CHECK(jb["verdict"] == "Neither");
  REQUIRE(jb["breakpoints"].size() == 2);
  CHECK(jb["breakpoints"][0]["c"].get<double>() == doctest::Approx(0.049084081918110985).epsilon(1e-9));

  const Outcome inf = run({"classify", "--model", "logistic", "--region", "0", "inf"});
  REQUIRE(inf.code == 0);
  CHECK(json::parse(inf.out)["verdict"] == "TypeI");

  CHECK(run({"classify", "--model", "gompertz", "--region", "0", "1"}).code == 1);
  CHECK(run({"classify", "--model", "logistic", "--region", "2", "1"}).code == 1);
}

TEST_CASE("reduce a five point design") {
  const std::string path = write_temp("five.json", kFivePoint);
  const Outcome r = run({"reduce", path});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["support"].size() <= 2);
  CHECK(j["report"]["structure"] == "two-symmetric");
  CHECK(j["report"]["input_points"] == 5);
  CHECK(j["report"]["certificate"]["valid"] == true);
  CHECK(j["report"]["certificate"]["psd_margin"].get<double>() >= -1e-9);

  // The output is itself a valid input.
  const std::string again = write_temp("five-reduced.json", r.out);
  const Outcome twice = run({"reduce", again});
  REQUIRE(twice.code == 0);
  CHECK(json::parse(twice.out)["support"] == j["support"]);
}

TEST_CASE("dominate") {
  const std::string five = write_temp("five.json", kFivePoint);
  const Outcome same = run({"dominate", five, five});
  REQUIRE(same.code == 0);
  CHECK(json::parse(same.out)["verdict"] == "Equal");

  const Outcome reduced = run({"reduce", five});
  const std::string small = write_temp("five-small.json", reduced.out);
  const Outcome cmp = run({"dominate", small, five});
  REQUIRE(cmp.code == 0);
  const std::string v = json::parse(cmp.out)["verdict"];
  CHECK((v == "Dominates" || v == "Equal"));

  const std::string other = write_temp("poisson.json", kEmptyPoisson);
  CHECK(run({"dominate", five, other}).code == 1);
}

TEST_CASE("parse errors name the field and line") {
  std::string text = kFivePoint;
  text.replace(text.find("\"weight\": 0.2}\n  ]"), 14, "\"weight\": 0.2, \"extra\": 1}");
  const Outcome unknown = run({"reduce", write_temp("unknown.json", text)});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("support[4].extra") != std::string::npos);
  CHECK(unknown.err.find("line 10") != std::string::npos);

  std::string typed = kFivePoint;
  typed.replace(typed.find("0.4"), 3, "\"x\"");
  const Outcome wrong = run({"reduce", write_temp("typed.json", typed)});
  CHECK(wrong.code == 1);
  CHECK(wrong.err.find("support[2].point") != std::string::npos);
  CHECK(wrong.err.find("line 8") != std::string::npos);

  std::string broken = kFivePoint;
  broken.replace(broken.find("0.4,"), 4, "0.4,,");
  const Outcome syntax = run({"reduce", write_temp("syntax.json", broken)});
  CHECK(syntax.code == 1);
  CHECK(syntax.err.find("line 8") != std::string::npos);

  try {
    ldopt::parse_document(R"({"model": "logistic", "region": [0, 1], "support": []})");
    FAIL("missing params accepted");
  } catch (const ldopt::ParseError& e) {
    CHECK(e.field() == "params");
  }
  CHECK_THROWS_AS(ldopt::parse_document(R"({"model": "logistic", "params": {"alpha": 0, "beta": 0},
      "region": [0, 1], "support": []})"),
                  ldopt::ParseError);
  CHECK(run({"reduce", "/nonexistent/file.json"}).code == 1);
}

TEST_CASE("optimize output round trips through verify") {
  const std::string path = write_temp("poisson.json", kEmptyPoisson);
  const Outcome opt = run({"optimize", path, "--criterion", "D"});
  REQUIRE(opt.code == 0);
  const json j = json::parse(opt.out);
  REQUIRE(j["support"].size() == 2);
  CHECK(j["support"][0]["point"].get<double>() == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(j["support"][1]["point"] == 1.0);

  const Outcome ver = run({"verify", write_temp("poisson-opt.json", opt.out)});
  REQUIRE(ver.code == 0);
  const json v = json::parse(ver.out);
  CHECK(v["certified"] == true);
  const double a = j["report"]["criterion_value"], b = v["criterion_value"];
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));

  const Outcome again = run({"optimize", path, "--criterion", "D"});
  CHECK(again.out == opt.out);
}

TEST_CASE("augment") {
  const std::string path = write_temp("five.json", kFivePoint);
  const Outcome r = run({"augment", path, "--new-mass", "0.3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["report"]["new_mass"] == 0.3);
  CHECK(run({"augment", path, "--new-mass", "0"}).code == 1);
}

TEST_CASE("natural space input") {
  const std::string path = write_temp(
      "mm.json",
      R"({"model": "michaelis-menten", "params": {"alpha": 1, "beta": 1}, "space": "natural",
          "region": [0, "inf"], "support": []})");
  const Outcome r = run({"optimize", path});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["space"] == "canonical");
  REQUIRE(j["support"].size() == 2);
  CHECK(j["support"][0]["point"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(j["support"][1]["point"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pretty output and usage") {
  const Outcome p = run({"--pretty", "classify", "--model", "logistic", "--region", "0", "5"});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("TypeI") != std::string::npos);
  CHECK_FALSE(json::accept(p.out));

  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("unclassifiable regions exit with a domain error") {
  const std::string path = write_temp(
      "cloglog.json",
      R"({"model": "cloglog", "params": {"alpha": 0, "beta": 1}, "region": [-1, 1], "support": []})");
  const Outcome r = run({"optimize", path});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
}
