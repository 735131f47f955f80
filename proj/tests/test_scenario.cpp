#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "rellich/scenario.hpp"

using namespace rellich;

namespace {

std::string field_of(const std::string& text) {
  try {
    (void)parse_scenarios(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("parse and run a minimal scenario") {
  const auto s = parse_scenarios(R"({"version": 1, "scenarios": [
    {"id": "a", "identity": "rellich_re", "map": {"family": "symmetric_cone", "beta": 0.5},
     "f": {"type": "indicator", "a": 0, "b": 1}}]})");
  REQUIRE(s.size() == 1);
  CHECK(s[0].id == "a");
  CHECK(s[0].identity == IdentityId::rellich_re);
  const auto r = run_scenario(s[0]);
  CHECK(r.pass);
}

TEST_CASE("bare arrays and empty lists are accepted") {
  CHECK(parse_scenarios("[]").empty());
  CHECK(parse_scenarios(R"({"version": 1, "scenarios": []})").empty());
}

TEST_CASE("diagnostics name the offending field") {
  // Wrapped documents prefix the path with "scenarios".
  CHECK(field_of(R"({"version": 1, "scenarios": [{"id": "x", "identity": "thm41", "beta": 1.5,
                     "f": {"type": "indicator", "a": 0, "b": 1}}]})") == "scenarios[0].beta");
  CHECK(field_of(R"([{"id": "x", "identity": "thm41", "beta": 1.5, "f": {"type": "indicator", "a": 0, "b": 1}}])") ==
        "[0].beta");
  CHECK(field_of(R"([{"id": "x", "identity": "thm41", "beta": 0.5, "f": {"type": "indicator", "a": 0, "b": 1},
                      "colour": 3}])") == "[0].colour");
  CHECK(field_of(R"([{"id": "x", "identity": "nope"}])") == "[0].identity");
  CHECK(field_of(R"([{"id": "x", "identity": "rellich_re", "map": {"family": "symmetric_cone", "beta": 3},
                      "f": {"type": "indicator", "a": 0, "b": 1}}])") == "[0].map");
  CHECK(field_of(R"([{"id": "x", "identity": "thm41", "beta": 0.5, "f": {"type": "sign"}}])") == "[0].f");
  const std::string dup = R"([{"id": "x", "identity": "thm41", "beta": 0.5, "f": {"type": "indicator", "a": 0, "b": 1}},
                              {"id": "x", "identity": "thm41", "beta": 0.0, "f": {"type": "indicator", "a": 0, "b": 1}}])";
  CHECK(field_of(dup) == "[1].id");
  // Syntax errors report a line and column.
  try {
    (void)parse_scenarios("[\n{\"id\": }");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("infinite tau maps reject the tau bounds") {
  CHECK(field_of(R"([{"id": "x", "identity": "bound_thm1_1", "map": {"family": "monotone_cone", "beta": 0.25, "theta": 0.5},
                      "f": {"type": "indicator", "a": 0, "b": 1}}])") == "[0].map");
}

TEST_CASE("serialised scenarios parse back to the same JSON") {
  const auto s = parse_scenarios(R"([
    {"id": "b", "identity": "bilinear_re", "map": {"family": "symmetric_cone", "beta": 0.3333333333333333}, "p": 3,
     "f": {"type": "indicator", "a": 0, "b": 1}, "g": {"type": "indicator", "a": 1, "b": 3}, "tolerance": 1e-7},
    {"id": "h", "identity": "hmw", "map": {"family": "helson_szego", "f2": {"type": "sign", "scale": 0.39269908169872414}},
     "f": {"type": "hat", "a": 0, "peak": 0.5, "b": 2}}])");
  for (const auto& sc : s) {
    const json j = to_json(sc);
    CHECK(to_json(parse_scenario(j)) == j);
  }
}

TEST_CASE("scenario errors become error reports") {
  Scenario s;
  s.id = "broken";
  s.identity = IdentityId::rellich_re;
  s.map = MapConfig{};
  s.map->family = ConformalMap::Family::symmetric_cone;
  s.map->beta = 0.5;
  s.f = TestFunction::indicator(0, 1);
  s.quadrature.max_subdivisions = 1;
  const auto r = run_scenario(s);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.error.empty());
}
