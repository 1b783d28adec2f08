#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cone/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cone::cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

json load_schema(const std::string& name) {
  std::ifstream in(std::string(CONE_SCHEMA_DIR) + "/" + name);
  REQUIRE(in);
  return json::parse(in);
}

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

// Checks the subset of JSON Schema the shipped schemas use: type, required,
// properties, items, enum and const.
void validate(const json& value, const json& schema, const std::string& path = "$") {
  CAPTURE(path);
  if (schema.contains("type")) {
    bool ok = false;
    if (schema["type"].is_array()) {
      for (const auto& t : schema["type"]) ok = ok || type_matches(value, t.get<std::string>());
    } else {
      ok = type_matches(value, schema["type"].get<std::string>());
    }
    CHECK(ok);
    if (!ok) return;
  }
  if (schema.contains("const")) CHECK(value == schema["const"]);
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == value;
    CHECK(found);
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) CHECK(value.contains(key.get<std::string>()));
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (value.contains(key)) validate(value[key], sub, path + "." + key);
    }
  }
  if (schema.contains("items") && value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      validate(value[i], schema["items"], path + "[" + std::to_string(i) + "]");
    }
  }
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::string data(const char* name) { return std::string(CONE_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("bounds reproduces the Binomial(4, 1/2) example") {
  const auto r = run({"bounds", "--graph", "td", "--d", "2", "--dist", "binomial:n=4,p=0.5"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  validate(j, load_schema("bounds.schema.json"));
  CHECK(std::fabs(j["rho"].get<double>() - 0.0635146) <= 1e-6);
  CHECK(std::fabs(j["psi"].get<double>() - 0.06350850) <= 1e-6);
  CHECK(std::fabs(j["lower"].get<double>() - 0.937435919) <= 1e-8);
  CHECK(std::fabs(j["upper"].get<double>() - 0.937435962) <= 1e-8);
  CHECK(j["verdict"] == "Survives");
  CHECK(j["dist"] == "binomial:n=4,p=0.5");
}

TEST_CASE("bounds on T_d^+ and CSV output") {
  const auto r = run({"bounds", "--graph", "tdplus", "--d", "2", "--dist", "bernoulli:p=0.7",
                      "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"graph", "d", "dist", "verdict", "mean_d_power_r",
                                            "rho", "psi", "lower", "upper"});
  CHECK(rows[1][0] == "tdplus");
  CHECK(rows[1][3] == "Survives");
  CHECK(std::stod(rows[1][7]) == doctest::Approx(4.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("divergent E[d^R] is reported as inf") {
  const auto r = run({"bounds", "--graph", "tdplus", "--d", "2", "--dist", "geometric:p=0.6"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  validate(j, load_schema("bounds.schema.json"));
  CHECK(j["mean_d_power_r"] == "inf");
  CHECK(j["verdict"] == "Survives");
}

TEST_CASE("numbers carry 10 significant digits") {
  CHECK(cone::cli::round_report(0.06351462987927618) == 0.06351462988);
  CHECK(cone::cli::round_report(0.25000000000000006) == 0.25);
  const auto r = run({"bounds", "--d", "2", "--dist", "binomial:n=4,p=0.5"});
  CHECK(r.out.find("\"rho\": 0.06351462988") != std::string::npos);
}

TEST_CASE("sweep verdicts flip at the Geometric thresholds") {
  const auto r = run({"sweep", "--graph", "tdplus", "--d", "2", "--dist", "geometric:p=?",
                      "--axis", "p:0.05:0.45:41", "--mode", "bounds"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 42);
  CHECK(rows[0] == std::vector<std::string>{"p", "verdict", "rho", "psi", "lower", "upper"});
  const double survive_edge = 1 - std::sqrt(0.5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p = std::stod(rows[i][0]);
    CAPTURE(p);
    const std::string expected = p <= 0.25 ? "DiesOut" : p <= survive_edge ? "Inconclusive" : "Survives";
    CHECK(rows[i][1] == expected);
  }
  CHECK(rows[21][0] == "0.25");
  CHECK(rows[21][1] == "DiesOut");
  CHECK(rows[22][1] == "Inconclusive");
}

TEST_CASE("sweep as JSON") {
  const auto r = run({"sweep", "--graph", "td", "--d", "3", "--dist", "binomial:n=2,p=?",
                      "--axis", "p:0.1:0.9:5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  validate(j, load_schema("sweep.schema.json"));
  REQUIRE(j["rows"].size() == 5);
  CHECK(j["rows"][2]["p"] == 0.5);
}

TEST_CASE("simulate reports a Wilson interval and is seed-deterministic") {
  const std::vector<std::string> args = {"simulate", "--graph", "td", "--d", "2", "--dist",
                                         "bernoulli:p=0.7", "--depth", "40", "--runs", "4000",
                                         "--seed", "1", "--node-cap", "2048"};
  auto with_threads = [&](const char* t) {
    auto a = args;
    a.push_back("--threads");
    a.push_back(t);
    return run(a);
  };
  const auto one = with_threads("1");
  const auto eight = with_threads("8");
  REQUIRE(one.code == 0);
  CHECK(one.out == eight.out);
  CHECK(run(args).out == one.out);
  const auto j = json::parse(one.out);
  validate(j, load_schema("simulate.schema.json"));
  CHECK(j["ci_low"].get<double>() <= 0.644898);
  CHECK(0.644898 <= j["ci_high"].get<double>());
  CHECK(j["generations"] == 160);
  CHECK(j["runs"] == 4000);
}

TEST_CASE("simulate with a depth-indexed environment") {
  const auto r = run({"simulate", "--graph", "tdplus", "--d", "2", "--env-file",
                      data("supercritical.env"), "--depth", "10", "--runs", "500",
                      "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size() == 14);
}

TEST_CASE("sweep in simulate mode") {
  const auto r = run({"sweep", "--graph", "tdplus", "--d", "2", "--dist", "geometric:p=?",
                      "--axis", "p:0.2:0.35:2", "--mode", "simulate", "--runs", "2000",
                      "--depth", "20", "--node-cap", "2048"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"p", "point", "ci_low", "ci_high", "n_runs", "cap_hits"});
  CHECK(std::stod(rows[1][3]) < 0.01);
  CHECK(std::stod(rows[2][2]) > 0.0);
}

TEST_CASE("hetero-check") {
  const auto r = run({"hetero-check", "--d", "2", "--env-file", data("alternating.env"),
                      "--n", "1", "--j-max", "9"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  validate(j, load_schema("hetero-check.schema.json"));
  CHECK(j["certified"] == false);
  CHECK(j["liminf"].get<double>() == doctest::Approx(0.4));
  CHECK(j.contains("note"));

  const auto sweep = run({"hetero-check", "--d", "2", "--env-file", data("skip_level.env"),
                          "--n-max", "4"});
  REQUIRE(sweep.code == 0);
  const auto js = json::parse(sweep.out);
  validate(js, load_schema("hetero-check.schema.json"));
  CHECK(js["first_certifying_n"] == 2);
  CHECK_FALSE(js.contains("note"));

  const auto none = run({"hetero-check", "--d", "2", "--env-file", data("alternating.env"),
                         "--n-max", "3"});
  REQUIRE(none.code == 0);
  const auto jn = json::parse(none.out);
  validate(jn, load_schema("hetero-check.schema.json"));
  CHECK(jn["first_certifying_n"].is_null());
}

TEST_CASE("usage errors exit 1 without a report") {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"frobnicate"},
      {"bounds", "--d", "2"},
      {"bounds", "--d", "1", "--dist", "bernoulli:p=0.5"},
      {"bounds", "--d", "2", "--dist", "geometric:p=1.5"},
      {"bounds", "--d", "2", "--dist", "bernoulli:p=1"},
      {"bounds", "--d", "2", "--dist", "bernoulli:p=0.5", "--bogus"},
      {"bounds", "--d", "2", "--dist", "bernoulli:p=0.5", "--graph", "ring"},
      {"simulate", "--d", "2"},
      {"simulate", "--d", "2", "--dist", "bernoulli:p=0.5", "--depth", "0"},
      {"simulate", "--d", "2", "--dist", "bernoulli:p=0.5", "--runs", "0"},
      {"sweep", "--d", "2", "--dist", "geometric:p=0.3", "--axis", "p:0:1:3"},
      {"sweep", "--d", "2", "--dist", "geometric:p=?", "--axis", "p:0.1:0.5"},
      {"sweep", "--d", "2", "--dist", "geometric:p=?", "--axis", "p:0.1:1.5:3"},
      {"hetero-check", "--d", "2", "--env-file", "/nonexistent/file.env"},
      {"hetero-check", "--d", "2", "--env-file", data("alternating.env"), "--j-max", "0"},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    CAPTURE(joined);
    const auto r = run(args);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
  // Dist problems print the grammar.
  CHECK(run({"bounds", "--d", "2", "--dist", "nope"}).err.find("family ':'") != std::string::npos);
}

TEST_CASE("short j-max horizon is a usage error") {
  const auto r = run({"hetero-check", "--d", "2", "--env-file", data("supercritical.env"),
                      "--j-max", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("j_max") != std::string::npos);
}

TEST_CASE("help exits 0") {
  const auto r = run({"bounds", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--dist") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("--output writes the report to a file") {
  const std::string path = "test_cli_output.json";
  std::remove(path.c_str());
  const auto r = run({"bounds", "--d", "2", "--dist", "bernoulli:p=0.7", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in);
  const auto j = json::parse(in);
  CHECK(j["command"] == "bounds");
  std::remove(path.c_str());
  const auto fail = run({"bounds", "--d", "2", "--dist", "bernoulli:p=0.7", "--output",
                         "/nonexistent/dir/out.json"});
  CHECK(fail.code == 2);
}

TEST_CASE("hetero-check CSV has one row per block length") {
  const auto r = run({"hetero-check", "--d", "2", "--env-file", data("skip_level.env"),
                      "--n-max", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"n", "j_max", "tail_start", "tail_period", "liminf", "certified"});
  CHECK(rows[1][4] == "0.2");
  CHECK(rows[1][5] == "false");
  CHECK(rows[2][0] == "2");
  CHECK(rows[2][5] == "true");
}
