#pragma once

// Run reports: suite execution (parallel, ordered), JSON and CSV emission,
// the built-in "paper-core" suite and one-parameter sweeps.

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rellich/identities.hpp"
#include "rellich/scenario.hpp"

namespace rellich {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Status { pass, fail, error };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::error:
      return "error";
  }
  return "error";
}

inline Status status_of(const IdentityReport& r) {
  if (!r.error.empty()) return Status::error;
  return r.pass ? Status::pass : Status::fail;
}

struct ScenarioResult {
  std::string scenario_id;
  IdentityReport report;
  double wall_seconds = 0;
  friend bool operator==(const ScenarioResult&, const ScenarioResult&) = default;
};

struct Summary {
  std::size_t total = 0, pass = 0, fail = 0, error = 0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct RunReport {
  std::string tool_version{kToolVersion};
  std::string config_digest;
  std::string generated_at;  // not part of the digest
  std::vector<ScenarioResult> results;

  [[nodiscard]] Summary summary() const {
    Summary s;
    s.total = results.size();
    for (const auto& r : results) {
      switch (status_of(r.report)) {
        case Status::pass:
          ++s.pass;
          break;
        case Status::fail:
          ++s.fail;
          break;
        case Status::error:
          ++s.error;
          break;
      }
    }
    return s;
  }
  [[nodiscard]] bool all_pass() const { return summary().pass == results.size(); }
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

// ---------------------------------------------------------------- digest, time

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_digest(const std::vector<Scenario>& scenarios) {
  json j = json::array();
  for (const auto& s : scenarios) j.push_back(to_json(s));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(j.dump()));
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------- execution

/// Runs every scenario; `parallel` workers take scenarios by index, results
/// keep input order.
inline RunReport run_suite(const std::vector<Scenario>& scenarios, const RunOptions& ro = {}) {
  RunReport rep;
  rep.config_digest = config_digest(scenarios);
  rep.generated_at = utc_timestamp();
  rep.results.resize(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      IdentityReport r = run_scenario(scenarios[i], ro);
      const auto t1 = std::chrono::steady_clock::now();
      rep.results[i] = {scenarios[i].id, std::move(r), std::chrono::duration<double>(t1 - t0).count()};
    }
  };
  const int n = std::max(1, std::min<int>(ro.parallel, static_cast<int>(scenarios.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rep;
}

// ---------------------------------------------------------------- JSON

namespace detail {

// Non-finite numbers become the strings "nan", "inf", "-inf".
inline json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double num_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("not a number: " + s);
  }
  return j.get<double>();
}

}  // namespace detail

inline json to_json(const IdentityReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back({{"name", t.name}, {"value", detail::num(t.value)}, {"error", detail::num(t.error)}});
  return json{{"identity_id", std::string(to_string(r.id))},
              {"label", r.label},
              {"lhs", detail::num(r.lhs)},
              {"rhs", detail::num(r.rhs)},
              {"abs_residual", detail::num(r.abs_residual)},
              {"rel_residual", detail::num(r.rel_residual)},
              {"tolerance", detail::num(r.tolerance)},
              {"abs_floor", detail::num(r.abs_floor)},
              {"inequality", r.inequality},
              {"pass", r.pass},
              {"status", std::string(to_string(status_of(r)))},
              {"error", r.error},
              {"notes", r.notes},
              {"term_breakdown", terms}};
}

inline IdentityReport identity_report_from_json(const json& j) {
  IdentityReport r;
  const auto name = j.at("identity_id").get<std::string>();
  const auto id = identity_from_string(name);
  if (!id) throw std::invalid_argument("unknown identity " + name);
  r.id = *id;
  r.label = j.at("label").get<std::string>();
  r.lhs = detail::num_from(j.at("lhs"));
  r.rhs = detail::num_from(j.at("rhs"));
  r.abs_residual = detail::num_from(j.at("abs_residual"));
  r.rel_residual = detail::num_from(j.at("rel_residual"));
  r.tolerance = detail::num_from(j.at("tolerance"));
  r.abs_floor = detail::num_from(j.at("abs_floor"));
  r.inequality = j.at("inequality").get<bool>();
  r.pass = j.at("pass").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& t : j.at("term_breakdown"))
    r.terms.push_back({t.at("name").get<std::string>(), detail::num_from(t.at("value")), detail::num_from(t.at("error"))});
  return r;
}

inline json to_json(const RunReport& rep) {
  const auto s = rep.summary();
  json res = json::array();
  for (const auto& r : rep.results)
    res.push_back({{"scenario_id", r.scenario_id}, {"wall_seconds", r.wall_seconds}, {"report", to_json(r.report)}});
  return json{{"tool", "rellich"},
              {"tool_version", rep.tool_version},
              {"config_digest", rep.config_digest},
              {"generated_at", rep.generated_at},
              {"summary", {{"total", s.total}, {"pass", s.pass}, {"fail", s.fail}, {"error", s.error}}},
              {"results", res}};
}

inline RunReport run_report_from_json(const json& j) {
  RunReport rep;
  rep.tool_version = j.at("tool_version").get<std::string>();
  rep.config_digest = j.at("config_digest").get<std::string>();
  rep.generated_at = j.at("generated_at").get<std::string>();
  for (const auto& r : j.at("results"))
    rep.results.push_back({r.at("scenario_id").get<std::string>(), identity_report_from_json(r.at("report")),
                           r.at("wall_seconds").get<double>()});
  return rep;
}

// ---------------------------------------------------------------- CSV

namespace detail {

inline std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest text that parses back to v; used in generated ids.
inline std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace detail

inline constexpr std::string_view kCsvHeader =
    "scenario_id,identity_id,lhs,rhs,abs_residual,rel_residual,tolerance,pass";

/// First line is a `#` comment with the timestamp; the rest is deterministic.
inline void write_csv(std::ostream& os, const RunReport& rep) {
  os << "# rellich " << rep.tool_version << " generated " << rep.generated_at << " digest " << rep.config_digest
     << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : rep.results) {
    const auto& x = r.report;
    os << detail::csv_field(r.scenario_id) << ',' << to_string(x.id) << ',' << detail::g17(x.lhs) << ','
       << detail::g17(x.rhs) << ',' << detail::g17(x.abs_residual) << ',' << detail::g17(x.rel_residual) << ','
       << detail::g17(x.tolerance) << ',' << (x.pass ? "true" : "false") << '\n';
  }
}

inline void write_json(std::ostream& os, const RunReport& rep) { os << to_json(rep).dump(2) << '\n'; }

enum class Format { json, csv };

inline void emit(std::ostream& os, const RunReport& rep, Format f) {
  if (f == Format::csv) write_csv(os, rep);
  else write_json(os, rep);
}

/// Writes to `path`; throws std::runtime_error when the file cannot be written.
inline void emit(const std::string& path, const RunReport& rep, Format f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit(out, rep, f);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------- paper-core

namespace detail {

inline json ind(double a, double b, double c = 1) { return {{"type", "indicator"}, {"a", a}, {"b", b}, {"c", c}}; }

inline std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

inline constexpr std::string_view kPaperCoreVersion = "paper-core/1";

/// Every catalog identity on its default grid.
inline std::vector<Scenario> paper_core_suite() {
  using detail::ind;
  using detail::tag;
  json list = json::array();
  auto add = [&](json s) { list.push_back(std::move(s)); };

  struct NamedMap {
    std::string tag;
    json map;
  };
  const std::vector<NamedMap> maps{
      {"id", {{"family", "identity"}}},
      {"sym-0.5", {{"family", "symmetric_cone"}, {"beta", -0.5}}},
      {"sym+0.5", {{"family", "symmetric_cone"}, {"beta", 0.5}}},
      {"mono0.25-0.25", {{"family", "monotone_cone"}, {"beta", 0.25}, {"theta", 0.25}}},
      {"mono0.25-0.5", {{"family", "monotone_cone"}, {"beta", 0.25}, {"theta", 0.5}}},
  };
  const std::vector<std::pair<std::string, json>> fs{
      {"chi0_1", ind(0, 1)},
      {"chi-2_-1", ind(-2, -1)},
      {"chi0_1-chi1_2", {{"type", "indicators"}, {"terms", {{0, 1, 1}, {1, 2, -1}}}}},
  };
  for (const char* id : {"rellich_re", "rellich_im"})
    for (const auto& m : maps)
      for (const auto& [ft, f] : fs) add({{"id", std::string(id) + ":" + m.tag + ":" + ft}, {"identity", id}, {"map", m.map}, {"f", f}});

  const json hs_map{{"family", "helson_szego"},
                    {"f2", {{"type", "sign"}, {"scale", std::numbers::pi / 8}}},
                    {"k_mode", "numerical"}};
  for (const auto& m : maps) add({{"id", "hmw:" + m.tag + ":chi0_1"}, {"identity", "hmw"}, {"map", m.map}, {"f", ind(0, 1)}});
  add({{"id", "hmw:hs-pi/8:chi0_1"}, {"identity", "hmw"}, {"map", hs_map}, {"f", ind(0, 1)}});

  for (double b : {-0.5, 0.0, 0.5})
    for (std::size_t k : {0u, 2u})
      add({{"id", "thm41:" + tag(b) + ":" + fs[k].first}, {"identity", "thm41"}, {"beta", b}, {"f", fs[k].second}});

  for (auto [b, t] : std::vector<std::pair<double, double>>{{0.25, 0.25}, {0.25, 0.5}, {0.49, 0.49}})
    for (const char* id : {"moncones_re", "moncones_im"})
      add({{"id", std::string(id) + ":" + tag(b) + "-" + tag(t)}, {"identity", id}, {"beta", b}, {"theta", t}, {"f", ind(0, 1)}});

  const std::vector<std::pair<std::string, json>> limits{
      {"re_positive", ind(0, 1)}, {"re_negative", ind(-2, -1)}, {"im_positive", ind(1, 2)}, {"im_negative", ind(-2, -1)}};
  for (const auto& [c, f] : limits) add({{"id", "limit:" + c}, {"identity", "limit_identities"}, {"case", c}, {"f", f}});

  const json third{{"family", "symmetric_cone"}, {"beta", 1.0 / 3.0}};
  for (double p : {2.0, 3.0}) {
    for (const char* id : {"bilinear_re", "bilinear_im"})
      add({{"id", std::string(id) + ":p" + tag(p)}, {"identity", id}, {"map", third}, {"p", p}, {"f", ind(0, 1)}, {"g", ind(1, 3)}});
    for (const char* id : {"cor52_re", "cor52_im"})
      add({{"id", std::string(id) + ":p" + tag(p)}, {"identity", id}, {"beta", 1.0 / 3.0}, {"p", p}, {"f", ind(0, 1)}, {"g", ind(1, 3)}});
  }

  for (const auto& m : maps) {
    const bool mono = m.map.at("family") == "monotone_cone";
    for (const auto& [ft, f] : fs) {
      // theta = 1/2 makes Re(1/Phi') vanish on a half-line (tau = inf).
      const bool finite_tau = !(mono && m.map.at("theta") == 0.5);
      for (const char* id : {"bound_thm1_1", "bound_thm1_2", "hnorm_consistency"})
        if (finite_tau || std::string_view(id) == "bound_thm1_2") add({{"id", std::string(id) + ":" + m.tag + ":" + ft}, {"identity", id}, {"map", m.map}, {"f", f}});
      if (mono) add({{"id", "bound_mono:" + m.tag + ":" + ft}, {"identity", "bound_mono"}, {"map", m.map}, {"f", f}});
    }
  }
  add({{"id", "bound_a2est:0.5"}, {"identity", "bound_a2est"}, {"beta", 0.5}, {"f", ind(0, 1)}});
  add({{"id", "bound_a2cos:0.5"}, {"identity", "bound_a2cos"}, {"beta", 0.5}});

  for (double b : {-0.5, 0.5})
    for (double r : {1.0, 4.0})
      add({{"id", "norm_lower_bound:" + tag(b) + ":r" + tag(r)}, {"identity", "norm_lower_bound"}, {"beta", b}, {"r", r}});
  add({{"id", "norm_lower_bound:0:r1"}, {"identity", "norm_lower_bound"}, {"beta", 0.0}, {"r", 1.0}});

  for (std::size_t k : {0u, 2u, 3u})
    for (const char* e : {"e1", "e2"})
      add({{"id", "boundary_rellich:" + maps[k].tag + ":" + e}, {"identity", "boundary_rellich"}, {"map", maps[k].map},
           {"direction", e}, {"f", ind(0, 1)}});

  std::vector<Scenario> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_scenario(list[i], "paper-core[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<Scenario> builtin_suite(const std::string& name) {
  if (name == "paper-core") return paper_core_suite();
  throw ConfigError("--suite", "unknown suite '" + name + "'");
}

// ---------------------------------------------------------------- sweep

struct PlotPoint {
  double parameter;
  double value;
};

struct SweepResult {
  RunReport report;
  std::string quantity;
  std::vector<PlotPoint> points;
};

/// Default plotted quantity: L(beta) for norm_lower_bound, the measured
/// quotient for inequalities, the relative residual otherwise.
inline std::string default_quantity(IdentityId id) {
  if (id == IdentityId::norm_lower_bound) return "term:L";
  const auto& c = identity_catalog();
  for (const auto& e : c)
    if (e.id == id && e.inequality) return "lhs";
  return "rel_residual";
}

inline double quantity_of(const IdentityReport& r, const std::string& q) {
  if (q == "rel_residual") return r.rel_residual;
  if (q == "abs_residual") return r.abs_residual;
  if (q == "lhs") return r.lhs;
  if (q == "rhs") return r.rhs;
  if (q.rfind("term:", 0) == 0) {
    const Term* t = r.term(q.substr(5));
    return t ? t->value : std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("--quantity", "unknown quantity '" + q + "'");
}

/// Replaces the value at a dotted path ("beta", "map.theta") in the base
/// scenario for each grid value; each point is validated like a config entry.
inline std::vector<Scenario> sweep_scenarios(const Scenario& base, const std::string& parameter,
                                             const std::vector<double>& grid) {
  if (parameter.empty()) throw ConfigError("--param", "missing parameter name");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    json j = to_json(base);
    json* node = &j;
    std::string rest = parameter;
    for (std::size_t dot; (dot = rest.find('.')) != std::string::npos; rest = rest.substr(dot + 1)) {
      const std::string key = rest.substr(0, dot);
      if (!node->contains(key) || !(*node)[key].is_object()) throw ConfigError("--param", "no object '" + key + "' in the base scenario");
      node = &(*node)[key];
    }
    (*node)[rest] = grid[i];
    j["id"] = base.id + "@" + parameter + "=" + detail::shortest(grid[i]);
    out.push_back(parse_scenario(j, "sweep[" + std::to_string(i) + "]"));
  }
  return out;
}

inline SweepResult sweep(const Scenario& base, const std::string& parameter, const std::vector<double>& grid,
                         const RunOptions& ro = {}, std::string quantity = "") {
  if (quantity.empty()) quantity = default_quantity(base.identity);
  const auto scenarios = sweep_scenarios(base, parameter, grid);
  SweepResult s{run_suite(scenarios, ro), quantity, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) s.points.push_back({grid[i], quantity_of(s.report.results[i].report, quantity)});
  return s;
}

inline void write_plot(std::ostream& os, const SweepResult& s, const std::string& parameter) {
  os << "# " << parameter << ' ' << s.quantity << '\n';
  for (const auto& p : s.points) os << detail::g17(p.parameter) << ' ' << detail::g17(p.value) << '\n';
}

/// First scenario of the built-in suite with the given identity.
inline Scenario default_base(IdentityId id) {
  for (const auto& s : paper_core_suite())
    if (s.identity == id) return s;
  throw ConfigError("--identity", "no default scenario for " + std::string(to_string(id)));
}

}  // namespace rellich
