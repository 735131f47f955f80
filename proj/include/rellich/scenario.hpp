#pragma once

// Scenario configuration: one identity at one parameter point.  Parsing
// rejects unknown fields and checks preconditions before anything runs;
// every diagnostic names the offending field.

#include <json.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rellich/conformal.hpp"
#include "rellich/identities.hpp"
#include "rellich/neumann.hpp"
#include "rellich/test_function.hpp"

namespace rellich {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct MapConfig {
  ConformalMap::Family family = ConformalMap::Family::identity;
  double beta = 0;
  double theta = 0;
  StepFunction f2;
  ConformalMap::KMode k_mode = ConformalMap::KMode::numerical;

  [[nodiscard]] ConformalMap build(const quad::QuadratureSpec& spec = {}) const {
    switch (family) {
      case ConformalMap::Family::identity:
        return ConformalMap::identity();
      case ConformalMap::Family::symmetric_cone:
        return ConformalMap::symmetric_cone_beta(beta);
      case ConformalMap::Family::monotone_cone:
        return ConformalMap::monotone_cone_beta(beta, theta);
      case ConformalMap::Family::helson_szego:
        return ConformalMap::helson_szego(f2, k_mode, spec);
    }
    throw std::logic_error("unknown map family");
  }
  friend bool operator==(const MapConfig&, const MapConfig&) = default;
};

struct QuadOverrides {
  std::optional<double> rel_tol, abs_tol, tail_radius, grading_exponent;
  std::optional<int> max_subdivisions;

  [[nodiscard]] quad::QuadratureSpec apply(quad::QuadratureSpec s) const {
    if (rel_tol) s.rel_tol = *rel_tol;
    if (abs_tol) s.abs_tol = *abs_tol;
    if (tail_radius) s.tail_radius = *tail_radius;
    if (grading_exponent) s.grading_exponent = *grading_exponent;
    if (max_subdivisions) s.max_subdivisions = *max_subdivisions;
    return s;
  }
  [[nodiscard]] bool empty() const {
    return !rel_tol && !abs_tol && !tail_radius && !grading_exponent && !max_subdivisions;
  }
  friend bool operator==(const QuadOverrides&, const QuadOverrides&) = default;
};

struct Scenario {
  std::string id;
  IdentityId identity = IdentityId::rellich_re;
  std::optional<MapConfig> map;
  std::optional<double> beta, theta, p, r;
  std::optional<LimitCase> limit_case;
  std::optional<RellichDirection> direction;
  std::optional<TestFunction> f, g;
  QuadOverrides quadrature;
  std::optional<double> tolerance;
};

// Settings shared by every scenario of a run.
struct RunOptions {
  quad::QuadratureSpec spec{};
  std::optional<double> tolerance;  // --tol, overrides scenario values
  int parallel = 1;
};

// ---------------------------------------------------------------- names

inline std::string_view to_string(ConformalMap::Family f) {
  switch (f) {
    case ConformalMap::Family::identity:
      return "identity";
    case ConformalMap::Family::symmetric_cone:
      return "symmetric_cone";
    case ConformalMap::Family::monotone_cone:
      return "monotone_cone";
    case ConformalMap::Family::helson_szego:
      return "helson_szego";
  }
  return "unknown";
}

// ---------------------------------------------------------------- to_json

inline json to_json(const StepFunction& s) { return json{{"type", "step"}, {"breaks", s.breaks()}, {"values", s.values()}}; }

inline json to_json(const TestFunction& f) {
  switch (f.kind()) {
    case TestFunction::Kind::step:
      return to_json(f.steps());
    case TestFunction::Kind::hat: {
      const auto& h = f.hat();
      return json{{"type", "hat"}, {"a", h.a}, {"peak", h.peak}, {"b", h.b}, {"height", h.height}};
    }
    case TestFunction::Kind::bump: {
      const auto& b = f.bump();
      return json{{"type", "bump"}, {"a", b.a}, {"b", b.b}, {"height", b.height}};
    }
    case TestFunction::Kind::custom:
      break;
  }
  throw std::invalid_argument("custom test functions cannot be serialized");
}

inline json to_json(const MapConfig& m) {
  json j{{"family", std::string(to_string(m.family))}};
  switch (m.family) {
    case ConformalMap::Family::identity:
      break;
    case ConformalMap::Family::symmetric_cone:
      j["beta"] = m.beta;
      break;
    case ConformalMap::Family::monotone_cone:
      j["beta"] = m.beta;
      j["theta"] = m.theta;
      break;
    case ConformalMap::Family::helson_szego:
      j["f2"] = to_json(m.f2);
      j["k_mode"] = m.k_mode == ConformalMap::KMode::numerical ? "numerical" : "closed_form";
      break;
  }
  return j;
}

inline json to_json(const Scenario& s) {
  json j{{"id", s.id}, {"identity", std::string(to_string(s.identity))}};
  if (s.map) j["map"] = to_json(*s.map);
  if (s.beta) j["beta"] = *s.beta;
  if (s.theta) j["theta"] = *s.theta;
  if (s.p) j["p"] = *s.p;
  if (s.r) j["r"] = *s.r;
  if (s.limit_case) j["case"] = std::string(to_string(*s.limit_case));
  if (s.direction) j["direction"] = std::string(to_string(*s.direction));
  if (s.f) j["f"] = to_json(*s.f);
  if (s.g) j["g"] = to_json(*s.g);
  if (!s.quadrature.empty()) {
    json q = json::object();
    const auto& o = s.quadrature;
    if (o.rel_tol) q["rel_tol"] = *o.rel_tol;
    if (o.abs_tol) q["abs_tol"] = *o.abs_tol;
    if (o.tail_radius) q["tail_radius"] = *o.tail_radius;
    if (o.grading_exponent) q["grading_exponent"] = *o.grading_exponent;
    if (o.max_subdivisions) q["max_subdivisions"] = *o.max_subdivisions;
    j["quadrature"] = q;
  }
  if (s.tolerance) j["tolerance"] = *s.tolerance;
  return j;
}

// ---------------------------------------------------------------- parsing

namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(join(path, k), "unknown field");
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

inline std::optional<double> opt_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) return std::nullopt;
  return number(j.at(key), join(path, key));
}

inline std::string string_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required field");
  if (!j.at(key).is_string()) throw ConfigError(join(path, key), "expected a string");
  return j.at(key).get<std::string>();
}

inline std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

// Step functions: {"type":"step","breaks":[..],"values":[..]},
// {"type":"indicator","a","b","c"}, {"type":"indicators","terms":[[a,b,c],..]},
// {"type":"sign","scale"}, {"type":"zero"}.
inline StepFunction parse_step(const json& j, const std::string& path) {
  const std::string type = string_field(j, "type", path);
  try {
    if (type == "step") {
      only_keys(j, path, {"type", "breaks", "values"});
      if (!j.contains("breaks") || !j.contains("values")) throw ConfigError(path, "step needs breaks and values");
      return StepFunction(number_list(j.at("breaks"), join(path, "breaks")), number_list(j.at("values"), join(path, "values")));
    }
    if (type == "indicator") {
      only_keys(j, path, {"type", "a", "b", "c"});
      const auto a = opt_number(j, "a", path), b = opt_number(j, "b", path);
      if (!a || !b) throw ConfigError(path, "indicator needs a and b");
      return StepFunction::indicator(*a, *b, opt_number(j, "c", path).value_or(1));
    }
    if (type == "indicators") {
      only_keys(j, path, {"type", "terms"});
      if (!j.contains("terms") || !j.at("terms").is_array()) throw ConfigError(join(path, "terms"), "expected an array");
      std::vector<StepFunction::Term> terms;
      const auto& t = j.at("terms");
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string tp = join(path, "terms") + "[" + std::to_string(i) + "]";
        const auto v = number_list(t[i], tp);
        if (v.size() != 2 && v.size() != 3) throw ConfigError(tp, "expected [a, b] or [a, b, c]");
        terms.push_back({v[0], v[1], v.size() == 3 ? v[2] : 1.0});
      }
      return StepFunction::from_indicators(terms);
    }
    if (type == "sign") {
      only_keys(j, path, {"type", "scale"});
      return StepFunction::sign(opt_number(j, "scale", path).value_or(1));
    }
    if (type == "zero") {
      only_keys(j, path, {"type"});
      return StepFunction{};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "type"), "unknown step type '" + type + "'");
}

inline TestFunction parse_function(const json& j, const std::string& path) {
  const std::string type = string_field(j, "type", path);
  try {
    if (type == "hat") {
      only_keys(j, path, {"type", "a", "peak", "b", "height"});
      const auto a = opt_number(j, "a", path), pk = opt_number(j, "peak", path), b = opt_number(j, "b", path);
      if (!a || !pk || !b) throw ConfigError(path, "hat needs a, peak and b");
      return Hat{*a, *pk, *b, opt_number(j, "height", path).value_or(1)};
    }
    if (type == "bump") {
      only_keys(j, path, {"type", "a", "b", "height"});
      const auto a = opt_number(j, "a", path), b = opt_number(j, "b", path);
      if (!a || !b) throw ConfigError(path, "bump needs a and b");
      return Bump{*a, *b, opt_number(j, "height", path).value_or(1)};
    }
    if (type == "sign") throw ConfigError(path, "test functions must have compact support");
    return parse_step(j, path);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

inline MapConfig parse_map(const json& j, const std::string& path) {
  MapConfig m;
  const std::string fam = string_field(j, "family", path);
  if (fam == "identity") {
    only_keys(j, path, {"family"});
    m.family = ConformalMap::Family::identity;
  } else if (fam == "symmetric_cone") {
    only_keys(j, path, {"family", "beta"});
    m.family = ConformalMap::Family::symmetric_cone;
    m.beta = opt_number(j, "beta", path).value_or(0);
  } else if (fam == "monotone_cone") {
    only_keys(j, path, {"family", "beta", "theta"});
    m.family = ConformalMap::Family::monotone_cone;
    m.beta = opt_number(j, "beta", path).value_or(0);
    m.theta = opt_number(j, "theta", path).value_or(0);
  } else if (fam == "helson_szego") {
    only_keys(j, path, {"family", "f2", "k_mode"});
    m.family = ConformalMap::Family::helson_szego;
    if (!j.contains("f2")) throw ConfigError(join(path, "f2"), "missing required field");
    m.f2 = parse_step(j.at("f2"), join(path, "f2"));
    if (j.contains("k_mode")) {
      const auto k = string_field(j, "k_mode", path);
      if (k == "numerical") m.k_mode = ConformalMap::KMode::numerical;
      else if (k == "closed_form") m.k_mode = ConformalMap::KMode::closed_form;
      else throw ConfigError(join(path, "k_mode"), "expected 'numerical' or 'closed_form'");
    }
  } else {
    throw ConfigError(join(path, "family"), "unknown map family '" + fam + "'");
  }
  return m;
}

inline bool needs_map(IdentityId id) {
  switch (id) {
    case IdentityId::rellich_re:
    case IdentityId::rellich_im:
    case IdentityId::hmw:
    case IdentityId::bilinear_re:
    case IdentityId::bilinear_im:
    case IdentityId::bound_thm1_1:
    case IdentityId::bound_thm1_2:
    case IdentityId::bound_mono:
    case IdentityId::hnorm_consistency:
    case IdentityId::boundary_rellich:
      return true;
    default:
      return false;
  }
}

inline bool needs_f(IdentityId id) { return id != IdentityId::bound_a2cos && id != IdentityId::norm_lower_bound; }

inline bool needs_beta(IdentityId id) {
  switch (id) {
    case IdentityId::thm41:
    case IdentityId::moncones_re:
    case IdentityId::moncones_im:
    case IdentityId::cor52_re:
    case IdentityId::cor52_im:
    case IdentityId::bound_a2est:
    case IdentityId::bound_a2cos:
    case IdentityId::norm_lower_bound:
      return true;
    default:
      return false;
  }
}

inline bool is_bilinear(IdentityId id) {
  return id == IdentityId::bilinear_re || id == IdentityId::bilinear_im || id == IdentityId::cor52_re ||
         id == IdentityId::cor52_im;
}

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

}  // namespace detail

/// Preconditions of the target operation; throws ConfigError naming a field.
inline void validate(const Scenario& s, const std::string& path = "") {
  using detail::join;
  using detail::require;
  const IdentityId id = s.identity;
  const std::string name(to_string(id));
  require(!s.id.empty(), join(path, "id"), "must be a non-empty string");
  if (detail::needs_map(id)) {
    require(s.map.has_value(), join(path, "map"), name + " needs a map");
    try {
      const auto m = s.map->build();
      if (id == IdentityId::bound_mono) require(m.monotone(), join(path, "map"), "bound_mono needs a monotone map");
      if (id == IdentityId::bound_thm1_1 || id == IdentityId::hnorm_consistency)
        require(std::isfinite(m.tau()), join(path, "map"), name + " needs tau < inf: Re(1/Phi') is not a weight here");
      if (id == IdentityId::boundary_rellich)
        require(!numerical_k(m), join(path, "map.k_mode"), "boundary_rellich needs closed-form boundary data");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(join(path, "map"), e.what());
    }
  }
  if (detail::needs_f(id)) require(s.f.has_value(), join(path, "f"), name + " needs a test function f");
  if (detail::needs_beta(id)) {
    require(s.beta.has_value(), join(path, "beta"), name + " needs beta");
    require(*s.beta > -1 && *s.beta < 1, join(path, "beta"), name + " needs beta in (-1, 1)");
  }
  if (id == IdentityId::moncones_re || id == IdentityId::moncones_im) {
    require(s.theta.has_value(), join(path, "theta"), name + " needs theta");
    try {
      (void)ConformalMap::monotone_cone_beta(*s.beta, *s.theta);
    } catch (const std::exception& e) {
      throw ConfigError(join(path, "theta"), e.what());
    }
  }
  if (detail::is_bilinear(id)) {
    require(s.g.has_value(), join(path, "g"), name + " needs a second test function g");
    require(s.p.has_value(), join(path, "p"), name + " needs p");
    require(*s.p > 1, join(path, "p"), name + " needs p in (1, inf)");
    if (id == IdentityId::bilinear_re || id == IdentityId::bilinear_im) {
      const auto guard = bilinear_guard(s.map->build(), *s.p);
      require(guard.holds, join(path, "p"), "weight outside A_p: " + guard.detail);
    }
  }
  if (id == IdentityId::limit_identities) {
    require(s.limit_case.has_value(), join(path, "case"), "limit_identities needs case");
    const auto S = s.f->support();
    const bool positive = *s.limit_case == LimitCase::re_positive || *s.limit_case == LimitCase::im_positive;
    require(positive ? S.lo >= 0 : S.hi <= 0, join(path, "f"),
            positive ? "case needs supp f in [0, inf)" : "case needs supp f in (-inf, 0]");
  }
  if (id == IdentityId::norm_lower_bound) {
    require(s.r.has_value(), join(path, "r"), "norm_lower_bound needs r");
    require(*s.r > 0, join(path, "r"), "r must be positive");
  }
  if (id == IdentityId::boundary_rellich) {
    require(s.direction.has_value(), join(path, "direction"), "boundary_rellich needs direction e1 or e2");
    require(s.f->kind() == TestFunction::Kind::step, join(path, "f"),
            "boundary_rellich needs an indicator combination");
  }
  if (s.tolerance) require(*s.tolerance > 0, join(path, "tolerance"), "must be positive");
  try {
    s.quadrature.apply({}).validate();
  } catch (const std::exception& e) {
    throw ConfigError(join(path, "quadrature"), e.what());
  }
}

inline Scenario parse_scenario(const json& j, const std::string& path = "") {
  using detail::join;
  detail::only_keys(j, path,
                    {"id", "identity", "map", "beta", "theta", "p", "r", "case", "direction", "f", "g", "quadrature",
                     "tolerance"});
  Scenario s;
  s.id = detail::string_field(j, "id", path);
  const auto idname = detail::string_field(j, "identity", path);
  const auto id = identity_from_string(idname);
  if (!id) throw ConfigError(join(path, "identity"), "unknown identity '" + idname + "'");
  s.identity = *id;
  if (j.contains("map")) s.map = detail::parse_map(j.at("map"), join(path, "map"));
  s.beta = detail::opt_number(j, "beta", path);
  s.theta = detail::opt_number(j, "theta", path);
  s.p = detail::opt_number(j, "p", path);
  s.r = detail::opt_number(j, "r", path);
  s.tolerance = detail::opt_number(j, "tolerance", path);
  if (j.contains("case")) {
    const auto c = detail::string_field(j, "case", path);
    s.limit_case = limit_case_from_string(c);
    if (!s.limit_case) throw ConfigError(join(path, "case"), "unknown limit case '" + c + "'");
  }
  if (j.contains("direction")) {
    const auto d = detail::string_field(j, "direction", path);
    if (d == "e1") s.direction = RellichDirection::e1;
    else if (d == "e2") s.direction = RellichDirection::e2;
    else throw ConfigError(join(path, "direction"), "expected 'e1' or 'e2'");
  }
  if (j.contains("f")) s.f = detail::parse_function(j.at("f"), join(path, "f"));
  if (j.contains("g")) s.g = detail::parse_function(j.at("g"), join(path, "g"));
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    const auto qp = join(path, "quadrature");
    detail::only_keys(q, qp, {"rel_tol", "abs_tol", "tail_radius", "grading_exponent", "max_subdivisions"});
    s.quadrature.rel_tol = detail::opt_number(q, "rel_tol", qp);
    s.quadrature.abs_tol = detail::opt_number(q, "abs_tol", qp);
    s.quadrature.tail_radius = detail::opt_number(q, "tail_radius", qp);
    s.quadrature.grading_exponent = detail::opt_number(q, "grading_exponent", qp);
    if (q.contains("max_subdivisions")) {
      const auto& m = q.at("max_subdivisions");
      if (!m.is_number_integer()) throw ConfigError(join(qp, "max_subdivisions"), "expected an integer");
      s.quadrature.max_subdivisions = m.get<int>();
    }
  }
  validate(s, path);
  return s;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// A scenario file is {"scenarios": [...]} (optionally with "version") or a bare array.
inline std::vector<Scenario> parse_scenarios(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": invalid JSON (" << e.what() << ")";
    throw ConfigError("", os.str());
  }
  const json* list = &doc;
  std::string base = "";
  if (doc.is_object()) {
    detail::only_keys(doc, "", {"version", "scenarios"});
    if (!doc.contains("scenarios")) throw ConfigError("scenarios", "missing required field");
    list = &doc.at("scenarios");
    base = "scenarios";
  }
  if (!list->is_array()) throw ConfigError(base, "expected an array of scenarios");
  std::vector<Scenario> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = base + "[" + std::to_string(i) + "]";
    out.push_back(parse_scenario((*list)[i], path));
    if (!ids.insert(out.back().id).second) throw ConfigError(path + ".id", "duplicate scenario id '" + out.back().id + "'");
  }
  return out;
}

// ---------------------------------------------------------------- execution

namespace detail {

inline IdentityReport pick(const std::vector<IdentityReport>& rs, IdentityId id) {
  for (const auto& r : rs)
    if (r.id == id) return r;
  throw std::logic_error("verifier produced no " + std::string(to_string(id)) + " report");
}

}  // namespace detail

/// Runs one scenario; failures inside the verifier are reported, not thrown.
inline IdentityReport run_scenario(const Scenario& s, const RunOptions& ro = {}) {
  VerifyOptions opt;
  opt.spec = s.quadrature.apply(ro.spec);
  if (s.tolerance) opt.tolerance = *s.tolerance;
  if (ro.tolerance) opt.tolerance = *ro.tolerance;
  const IdentityId id = s.identity;
  try {
    const std::optional<ConformalMap> map = s.map ? std::optional(s.map->build(opt.spec)) : std::nullopt;
    switch (id) {
      case IdentityId::rellich_re:
      case IdentityId::rellich_im: {
        auto [a, b] = verify_rellich(*map, *s.f, opt);
        return id == IdentityId::rellich_re ? a : b;
      }
      case IdentityId::hmw:
        return verify_hmw(*map, *s.f, opt);
      case IdentityId::thm41:
        return verify_thm41(*s.beta, *s.f, opt);
      case IdentityId::moncones_re:
      case IdentityId::moncones_im: {
        auto [a, b] = verify_moncones(*s.beta, *s.theta, *s.f, opt);
        return id == IdentityId::moncones_re ? a : b;
      }
      case IdentityId::limit_identities:
        return verify_limit_identities(*s.limit_case, *s.f, opt);
      case IdentityId::bilinear_re:
      case IdentityId::bilinear_im: {
        auto [a, b] = verify_bilinear(*map, *s.f, *s.g, *s.p, opt);
        return id == IdentityId::bilinear_re ? a : b;
      }
      case IdentityId::cor52_re:
      case IdentityId::cor52_im: {
        auto [a, b] = verify_cor52(*s.beta, *s.f, *s.g, *s.p, opt);
        return id == IdentityId::cor52_re ? a : b;
      }
      case IdentityId::bound_thm1_1:
      case IdentityId::bound_thm1_2:
      case IdentityId::bound_mono:
      case IdentityId::hnorm_consistency:
        return detail::pick(verify_bounds(*map, {*s.f}, opt), id);
      case IdentityId::bound_a2est:
        return verify_a2est(*s.beta, *s.f, opt);
      case IdentityId::bound_a2cos:
        return verify_a2cos(*s.beta, {}, opt);
      case IdentityId::norm_lower_bound:
        return verify_norm_lower_bound(*s.beta, *s.r, opt);
      case IdentityId::boundary_rellich:
        return verify_boundary_rellich(*map, *s.f, *s.direction, opt);
    }
    throw std::logic_error("unhandled identity");
  } catch (const std::exception& e) {
    IdentityReport r;
    r.id = id;
    r.label = s.id;
    r.tolerance = opt.tolerance;
    r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
    r.error = e.what();
    finalize(r);
    return r;
  }
}

}  // namespace rellich
