#include <cmath>

#include "doctest.h"
#include "heis/experiments.hpp"

using namespace heis;

namespace {

int line_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.n = 2;
  c.lambda_min = -1.25;
  c.pq = {{0, 1}, {2, 2}};
  c.rumin_N = 11;
  c.tol.trace = 3e-6;
  c.suites = {"rumin", "sandbox"};
  const Json j = to_json(c);
  CHECK(config_from_json(j) == c);
  CHECK(to_json(config_from_json(j)).dump() == j.dump());
  CHECK(parse_config_text(j.dump(2)) == c);
  CHECK(config_from_json(to_json(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("key = value configs") {
  auto c = parse_config_text("# comment\nn = 2\nconvention = section2\nlevels = [0, 2]\ntolerances.trace = 2e-6\n");
  CHECK(c.n == 2);
  CHECK(c.convention == "section2");
  CHECK(c.levels == std::vector<int>{0, 2});
  CHECK(c.tol.trace == 2e-6);
  CHECK(line_of("n = 1\n\nN = 2\n") == 3);
  CHECK(line_of("n = 1\nbogus = 3\n") == 2);
  CHECK(line_of("n = 1\nthis line has no equals\n") == 2);
  CHECK(line_of("n = \"two\"\n") == 1);
  CHECK(line_of("tolerances.sandbox = 0\n") == 1);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(validate(c));
  auto field = [](ExperimentConfig x) {
    try {
      validate(x);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  c.lambda_min = 1.0;
  c.lambda_max = 0.0;
  CHECK(field(c) == "lambda_min");
  c = {};
  c.levels.clear();
  CHECK(field(c) == "levels");
  c = {};
  c.suites = {"thresholds", "thresholds"};
  CHECK(field(c) == "suites");
  c = {};
  c.convention = "other";
  CHECK(field(c) == "convention");
  c = {};
  c.tol_scale = 0.0;
  CHECK(field(c) == "tol_scale");
  c = {};
  c.pq = {{0, 2}};
  CHECK(field(c) == "pq");
  c = {};
  c.corrupt = "everything";
  CHECK(field(c) == "corrupt");
}

TEST_CASE("threshold scan") {
  ExperimentConfig c;
  auto s = run_thresholds(c);
  CHECK(s.passed());
  const auto& summary = s.tables.at(0);
  REQUIRE(summary.rows.size() == 8);
  for (const auto& row : summary.rows) {
    // brute check: the expected set is ±(1/2 + k)
    const double e = row[0].get<double>();
    CHECK(std::abs(std::abs(e) - std::round(std::abs(e) - 0.5) - 0.5) <= 1e-12);
    CHECK(std::abs(row[1].get<double>() - e) <= 0.01 + 1e-12);
  }
  // truncation stability: N and 2N find the same dips
  ExperimentConfig d = c;
  d.N = 2 * c.N;
  auto s2 = run_thresholds(d);
  CHECK(s2.passed());
  for (size_t i = 0; i < summary.rows.size(); ++i)
    CHECK(std::abs(summary.rows[i][1].get<double>() - s2.tables[0].rows[i][1].get<double>()) <= 0.01);
  // section2 doubles every threshold
  ExperimentConfig w = c;
  w.convention = "section2";
  auto sw = run_thresholds(w);
  CHECK(sw.passed());
  CHECK(std::abs(sw.tables[0].rows.back()[0].get<double>() - 7.0) <= 1e-12);
}

TEST_CASE("identities and fault injection") {
  ExperimentConfig c;
  auto ok = run_identities(c);
  CHECK(ok.passed());
  c.corrupt = "laplacian_weight";
  auto bad = run_identities(c);
  CHECK_FALSE(bad.passed());
  bool named = false;
  for (const auto& ch : bad.checks)
    if (ch.name == "rumin.laplacian_projection") named = !ch.passed;
  CHECK(named);
}

TEST_CASE("report determinism and exit contract") {
  ExperimentConfig c;
  c.suites = {"sandbox", "rumin"};
  c.sandbox_complexes = 10;
  const auto a = to_json(run_report(c)).dump(), b = to_json(run_report(c)).dump();
  CHECK(a == b);
  auto r = run_report(c);
  CHECK(r.passed());
  CHECK(r.failures().empty());
  c.seed = 8;
  CHECK(to_json(run_report(c)).dump() != a);
  SuiteResult s{"x", {}, {}};
  s.add("info", 5.0, 1.0, "<=", false);
  CHECK(s.passed());
  s.add("hard", 5.0, 1.0);
  CHECK_FALSE(s.passed());
  Table t{"t", {"a", "b"}, {Json::array({1, "x"})}};
  CHECK(to_csv(t) == "a,b\n1,x\n");
}
