#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "rellich/report.hpp"

using namespace rellich;

namespace {

std::string body(const RunReport& rep) {
  std::ostringstream os;
  write_csv(os, rep);
  const std::string s = os.str();
  return s.substr(s.find('\n') + 1);
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("paper-core suite passes and covers the catalog") {
  RunOptions ro;
  ro.parallel = 4;
  const auto suite = paper_core_suite();
  const auto rep = run_suite(suite, ro);
  CHECK(rep.all_pass());
  CHECK(rep.results.size() == suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) CHECK(rep.results[i].scenario_id == suite[i].id);
  for (const auto& e : identity_catalog()) {
    bool seen = false;
    for (const auto& s : suite) seen = seen || s.identity == e.id;
    CHECK_MESSAGE(seen, to_string(e.id));
  }
  CHECK(lines(body(rep)) == suite.size() + 1);
}

TEST_CASE("determinism: CSV body and digest do not depend on threads or time") {
  const auto suite = paper_core_suite();
  RunOptions one, many;
  many.parallel = 8;
  const auto a = run_suite(suite, one), b = run_suite(suite, many);
  CHECK(body(a) == body(b));
  CHECK(a.config_digest == b.config_digest);
  CHECK(config_digest(suite) == a.config_digest);
}

TEST_CASE("empty run") {
  const auto rep = run_suite({});
  CHECK(rep.all_pass());
  CHECK(rep.summary().total == 0);
  std::ostringstream os;
  write_csv(os, rep);
  CHECK(lines(os.str()) == 2);
}

TEST_CASE("JSON round trip reproduces the report") {
  const auto suite = paper_core_suite();
  const auto rep = run_suite(suite);
  const auto back = run_report_from_json(json::parse(to_json(rep).dump()));
  CHECK(back.results.size() == rep.results.size());
  for (std::size_t i = 0; i < rep.results.size(); ++i) CHECK(back.results[i].report == rep.results[i].report);
  CHECK(back.config_digest == rep.config_digest);
  CHECK(back.tool_version == rep.tool_version);
}

TEST_CASE("CSV numbers round-trip and fields are quoted when needed") {
  CHECK(std::stod(detail::g17(0.1)) == 0.1);
  CHECK(detail::g17(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(detail::csv_field("a,b") == "\"a,b\"");
  CHECK(detail::csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(detail::csv_field("plain") == "plain");
  std::ostringstream os;
  RunReport rep = run_suite({paper_core_suite().front()});
  write_csv(os, rep);
  const std::string s = os.str();
  CHECK(s.rfind("# rellich ", 0) == 0);
  CHECK(s.find(std::string(kCsvHeader)) != std::string::npos);
  CHECK(lines(s) == 3);
}

TEST_CASE("unwritable output path") {
  const auto rep = run_suite({});
  CHECK_THROWS(emit("/nonexistent-dir/report.csv", rep, Format::csv));
}

TEST_CASE("sweeps") {
  const auto base = default_base(IdentityId::norm_lower_bound);
  RunOptions ro;
  const auto res = sweep(base, "beta", {-0.99, -0.9, -0.7, -0.5}, ro);
  REQUIRE(res.points.size() == 4);
  CHECK(res.report.all_pass());
  // L(beta) increases as beta decreases toward -1.
  for (std::size_t i = 0; i + 1 < res.points.size(); ++i) CHECK(res.points[i].value > res.points[i + 1].value);
  const auto t = sweep(default_base(IdentityId::thm41), "beta", {-0.5, 0, 0.5}, ro);
  for (const auto& p : t.points) CHECK(p.value < 1e-6);
  // A single point reproduces run_suite on that scenario.
  const auto one = sweep(default_base(IdentityId::thm41), "beta", {0.25}, ro);
  const auto direct = run_suite(sweep_scenarios(default_base(IdentityId::thm41), "beta", {0.25}), ro);
  CHECK(one.report.results[0].report == direct.results[0].report);
  CHECK_THROWS_AS(sweep(base, "beta", {1.5}, ro), ConfigError);
  CHECK_THROWS_AS(sweep(base, "map.theta", {0.3}, ro), ConfigError);
  std::ostringstream os;
  write_plot(os, t, "beta");
  CHECK(lines(os.str()) == 4);
}
