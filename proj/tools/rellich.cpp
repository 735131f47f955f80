// rellich: command-line driver for the identity checks.
// Exit status: 0 all pass, 1 any failure or error, 2 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rellich/hilbert.hpp"
#include "rellich/neumann.hpp"
#include "rellich/report.hpp"
#include "rellich/scenario.hpp"
#include "rellich/spectral.hpp"
#include "rellich/weights.hpp"

namespace {

using namespace rellich;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string config;
  std::string suite;
  std::string format = "json";
  std::string out;
  std::optional<double> tol;
  int parallel = 1;
};

void add_common(CLI::App* app, Common& c, bool suite) {
  app->add_option("--config", c.config, "scenario file (JSON)");
  if (suite) app->add_option("--suite", c.suite, "built-in suite")->check(CLI::IsMember({"paper-core"}));
  app->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "report path (default: stdout)");
  app->add_option("--tol", c.tol, "tolerance for every scenario")->check(CLI::PositiveNumber);
  app->add_option("--parallel", c.parallel, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
}

RunOptions run_options(const Common& c) {
  RunOptions ro;
  ro.tolerance = c.tol;
  ro.parallel = c.parallel == 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : c.parallel;
  if (const char* env = std::getenv("RELLICH_TAIL_RADIUS")) {
    char* end = nullptr;
    const double r = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(r > 0)) throw ConfigError("RELLICH_TAIL_RADIUS", "expected a positive number");
    ro.spec.tail_radius = r;
  }
  return ro;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Format format_of(const Common& c) { return c.format == "csv" ? Format::csv : Format::json; }

void write_report(const Common& c, const RunReport& rep) {
  if (c.out.empty()) emit(std::cout, rep, format_of(c));
  else emit(c.out, rep, format_of(c));
}

void print_summary(const RunReport& rep) {
  const auto s = rep.summary();
  std::cerr << "rellich: " << s.pass << " pass, " << s.fail << " fail, " << s.error << " error of " << s.total
            << " scenario(s)\n";
  for (const auto& r : rep.results)
    if (!r.report.pass)
      std::cerr << "  " << to_string(status_of(r.report)) << ": " << r.scenario_id
                << (r.report.error.empty() ? "" : " (" + r.report.error + ")") << '\n';
}

// "a:b" or "a:b:c" is the indicator c chi_(a,b); anything else is a JSON descriptor.
json descriptor(const std::string& s) {
  if (!s.empty() && s.front() != '{') {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ':')) {
      char* end = nullptr;
      const double x = std::strtod(part.c_str(), &end);
      if (part.empty() || *end != '\0') throw ConfigError("--f", "expected a:b[:c] or a JSON descriptor");
      v.push_back(x);
    }
    if (v.size() != 2 && v.size() != 3) throw ConfigError("--f", "expected a:b[:c] or a JSON descriptor");
    return {{"type", "indicator"}, {"a", v[0]}, {"b", v[1]}, {"c", v.size() == 3 ? v[2] : 1.0}};
  }
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw ConfigError("--f", std::string("invalid JSON: ") + e.what());
  }
}

std::string g17(double v) { return detail::g17(v); }

int cmd_verify(const Common& c) {
  if (c.config.empty() == c.suite.empty()) throw ConfigError("--config", "give exactly one of --config or --suite");
  const auto scenarios = c.suite.empty() ? parse_scenarios(read_file(c.config)) : builtin_suite(c.suite);
  const auto rep = run_suite(scenarios, run_options(c));
  write_report(c, rep);
  print_summary(rep);
  return rep.all_pass() ? kExitPass : kExitFail;
}

std::vector<double> parse_grid(const std::vector<std::string>& items) {
  std::vector<double> g;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      char* end = nullptr;
      const double v = std::strtod(part.c_str(), &end);
      if (part.empty() || *end != '\0') throw ConfigError("--grid", "not a number: '" + part + "'");
      g.push_back(v);
    }
  }
  if (g.empty()) throw ConfigError("--grid", "empty grid");
  return g;
}

int cmd_sweep(const Common& c, const std::string& identity, const std::string& param,
              const std::vector<std::string>& grid, const std::string& plot, const std::string& quantity) {
  const auto id = identity_from_string(identity);
  if (!id) throw ConfigError("--identity", "unknown identity '" + identity + "'");
  Scenario base;
  if (!c.config.empty()) {
    const auto list = parse_scenarios(read_file(c.config));
    bool found = false;
    for (const auto& s : list)
      if (s.identity == *id) {
        base = s;
        found = true;
        break;
      }
    if (!found) throw ConfigError("--config", "no scenario with identity " + identity);
  } else {
    base = default_base(*id);
  }
  const auto res = sweep(base, param, parse_grid(grid), run_options(c), quantity);
  write_report(c, res.report);
  if (!plot.empty()) {
    std::ofstream out(plot);
    if (!out) throw std::runtime_error("cannot open '" + plot + "' for writing");
    write_plot(out, res, param);
  } else {
    write_plot(std::cerr, res, param);
  }
  print_summary(res.report);
  return res.report.all_pass() ? kExitPass : kExitFail;
}

int cmd_hilbert(const std::string& fdesc, const std::vector<double>& xs, const std::string& op,
                const std::string& method) {
  const RunOptions ro = run_options({});
  std::cout << "# x " << op << " method error_estimate\n";
  if (op == "K") {
    const StepFunction f = detail::parse_step(descriptor(fdesc), "--f");
    for (double x : xs) {
      if (method == "closed" || (method == "auto")) std::cout << g17(x) << ' ' << g17(k_closed(f, x)) << " closed 0\n";
      if (method == "pv" || method == "all") {
        const auto k = k_transform(f, x, ro.spec);
        std::cout << g17(x) << ' ' << g17(k.value) << " quadrature " << g17(k.error_estimate) << '\n';
      }
    }
    return kExitPass;
  }
  const TestFunction f = detail::parse_function(descriptor(fdesc), "--f");
  for (double x : xs) {
    const bool closed = f.has_closed_hilbert() && (method == "closed" || method == "auto" || method == "all");
    if (closed) std::cout << g17(x) << ' ' << g17(hilbert_closed(f, x)) << " closed 0\n";
    if (method == "pv" || method == "all" || (method == "auto" && !f.has_closed_hilbert())) {
      const auto h = hilbert_pv(f, x, ro.spec);
      std::cout << g17(x) << ' ' << g17(h.value) << " pv " << g17(h.error_estimate) << '\n';
    }
    if (method == "spectral" || method == "all") {
      const auto S = f.support();
      const double L = 8 * std::max({1.0, std::fabs(S.lo), std::fabs(S.hi), std::fabs(x)});
      const auto s = spectral_oracle(f, L, std::size_t{1} << 18);
      std::cout << g17(x) << ' ' << g17(s.at(x)) << " spectral nan\n";
    }
  }
  return kExitPass;
}

int cmd_neumann(const std::string& fdesc, double x, int kmax, bool as_json) {
  const TestFunction f = detail::parse_function(descriptor(fdesc), "--f");
  const auto t = trace_check(f, x, dyadic_heights(kmax));
  if (as_json) {
    json rows = json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"y", r.y}, {"dx", r.dx}, {"dy", r.dy}, {"err_dx", r.err_dx}, {"err_dy", r.err_dy}});
    json j{{"x", t.x}, {"hf", t.hf}, {"f", t.f}, {"rows", rows}, {"pass", t.pass}, {"note", t.note}};
    j["order_dx"] = t.order_dx ? json(*t.order_dx) : json(nullptr);
    j["order_dy"] = t.order_dy ? json(*t.order_dy) : json(nullptr);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "# x = " << g17(x) << "  Hf(x) = " << g17(t.hf) << "  f(x) = " << g17(t.f) << '\n';
    std::cout << "# y dx dy |dx+Hf| |dy+f|\n";
    for (const auto& r : t.rows)
      std::cout << g17(r.y) << ' ' << g17(r.dx) << ' ' << g17(r.dy) << ' ' << g17(r.err_dx) << ' ' << g17(r.err_dy) << '\n';
    std::cout << "# order dx " << (t.order_dx ? g17(*t.order_dx) : "n/a") << ", dy "
              << (t.order_dy ? g17(*t.order_dy) : "n/a") << '\n';
    std::cout << "# " << (t.pass ? "pass" : "fail") << (t.note.empty() ? "" : ": " + t.note) << '\n';
  }
  return t.pass ? kExitPass : kExitFail;
}

int cmd_ap(const std::string& weight, double beta, double theta, double p, const ApGrid& grid, double s) {
  Weight w = Weight::constant();
  if (weight == "power") {
    w = Weight::power(beta);
  } else if (weight == "symmetric_cone") {
    w = Weight::from_map(ConformalMap::symmetric_cone_beta(beta), s);
  } else if (weight == "monotone_cone") {
    w = Weight::from_map(ConformalMap::monotone_cone_beta(beta, theta), s);
  } else if (weight != "constant") {
    throw ConfigError("--weight", "unknown weight '" + weight + "'");
  }
  const auto est = ap_constant(w, p, grid, run_options({}).spec);
  std::cout << "weight " << w.label() << "\np " << g17(p) << "\nestimate " << g17(est.value) << "\nargmax "
            << g17(est.argmax.lo) << ' ' << g17(est.argmax.hi) << "\nintervals " << est.intervals << "\ngrid "
            << est.grid_spec << "\n# grid maximum: a lower bound for the A_p constant\n";
  return kExitPass;
}

int cmd_hs(const std::string& f1, const std::string& f2) {
  const HSPair pair(detail::parse_step(descriptor(f1), "--f1"), detail::parse_step(descriptor(f2), "--f2"));
  std::cout << "osc_f1 " << g17(pair.osc_f1) << "\nsup_f2 " << g17(pair.sup_f2_norm) << "\nhs_bound "
            << g17(hs_bound(pair)) << "\na2_cos_bound " << g17(a2_cos_bound(pair.sup_f2_norm)) << "\nchain_constant "
            << g17(a2est_chain_constant(pair)) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of weighted Rellich identities for the Hilbert transform"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common verify_c;
  auto* verify = app.add_subcommand("verify", "run a scenario file or a built-in suite");
  add_common(verify, verify_c, true);

  Common sweep_c;
  std::string sw_identity, sw_param, sw_plot, sw_quantity;
  std::vector<std::string> sw_grid;
  auto* sw = app.add_subcommand("sweep", "run one identity over a parameter grid");
  add_common(sw, sweep_c, false);
  sw->add_option("--identity", sw_identity, "catalog identity")->required();
  sw->add_option("--param", sw_param, "dotted parameter path, e.g. beta or map.theta")->required();
  sw->add_option("--grid", sw_grid, "comma-separated values")->required();
  sw->add_option("--plot", sw_plot, "two-column plot-data file (default: stderr)");
  sw->add_option("--quantity", sw_quantity, "rel_residual, abs_residual, lhs, rhs or term:NAME");

  std::string h_f, h_op = "H", h_method = "auto";
  std::vector<double> h_x;
  auto* hil = app.add_subcommand("hilbert", "point values of Hf or Kf");
  hil->add_option("--f", h_f, "a:b[:c] indicator or JSON descriptor")->required();
  hil->add_option("--x", h_x, "evaluation points")->required();
  hil->add_option("--operator", h_op, "H or K")->check(CLI::IsMember({"H", "K"}));
  hil->add_option("--method", h_method, "evaluation method")->check(CLI::IsMember({"auto", "closed", "pv", "spectral", "all"}));

  std::string n_f;
  double n_x = 0;
  int n_kmax = 12;
  std::string n_format = "table";
  auto* neu = app.add_subcommand("neumann", "trace convergence of grad u_f toward (-Hf, -f)");
  neu->add_option("--f", n_f, "a:b[:c] indicator or JSON descriptor")->required();
  neu->add_option("--x", n_x, "boundary point")->required();
  neu->add_option("--kmax", n_kmax, "heights 2^-k, k = 1..kmax")->check(CLI::Range(2, 40));
  neu->add_option("--format", n_format, "output format")->check(CLI::IsMember({"table", "json"}));

  std::string a_weight = "power";
  double a_beta = 0.5, a_theta = 0, a_p = 2, a_s = -1;
  ApGrid a_grid;
  auto* ap = app.add_subcommand("ap", "A_p constant on the dyadic interval grid");
  ap->add_option("--weight", a_weight, "power, symmetric_cone, monotone_cone or constant");
  ap->add_option("--beta", a_beta, "exponent / cone parameter");
  ap->add_option("--theta", a_theta, "monotone cone rotation");
  ap->add_option("--p", a_p, "exponent p > 1");
  ap->add_option("--s", a_s, "map weights use |Phi'|^s");
  ap->add_option("--j-min", a_grid.j_min);
  ap->add_option("--j-max", a_grid.j_max);
  ap->add_option("--k-min", a_grid.k_min);
  ap->add_option("--k-max", a_grid.k_max);

  std::string hs_f1 = R"({"type":"zero"})", hs_f2;
  auto* hs = app.add_subcommand("hs", "Helson-Szego constants for w = exp(f1 + K f2)");
  hs->add_option("--f1", hs_f1, "step function f1 (JSON descriptor or a:b[:c])");
  hs->add_option("--f2", hs_f2, "step function f2 with sup |f2| < pi/2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(verify_c);
    if (*sw) return cmd_sweep(sweep_c, sw_identity, sw_param, sw_grid, sw_plot, sw_quantity);
    if (*hil) return cmd_hilbert(h_f, h_x, h_op, h_method);
    if (*neu) return cmd_neumann(n_f, n_x, n_kmax, n_format == "json");
    if (*ap) return cmd_ap(a_weight, a_beta, a_theta, a_p, a_grid, a_s);
    if (*hs) return cmd_hs(hs_f1, hs_f2);
  } catch (const ConfigError& e) {
    std::cerr << "rellich: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "rellich: error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitFail;
}
