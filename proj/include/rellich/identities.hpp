#pragma once

// Residual engine: each identity or inequality is a pair of functionals of
// (map or weight, f[, g]) assembled from separately integrated terms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rellich/conformal.hpp"
#include "rellich/hilbert.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/test_function.hpp"
#include "rellich/weights.hpp"

namespace rellich {

enum class IdentityId {
  rellich_re,
  rellich_im,
  hmw,
  thm41,
  moncones_re,
  moncones_im,
  limit_identities,
  bilinear_re,
  bilinear_im,
  cor52_re,
  cor52_im,
  bound_thm1_1,
  bound_thm1_2,
  bound_mono,
  bound_a2est,
  bound_a2cos,
  hnorm_consistency,
  norm_lower_bound,
  boundary_rellich,
};

struct CatalogEntry {
  IdentityId id;
  std::string_view name;
  std::string_view statement;
  bool inequality;
};

inline const std::vector<CatalogEntry>& identity_catalog() {
  static const std::vector<CatalogEntry> c{
      {IdentityId::rellich_re, "rellich_re", "int (Hf)^2 Re(1/Phi') = int f^2 Re(1/Phi') - 2 int f Hf Im(1/Phi')", false},
      {IdentityId::rellich_im, "rellich_im", "int (Hf)^2 Im(1/Phi') = int f^2 Im(1/Phi') + 2 int f Hf Re(1/Phi')", false},
      {IdentityId::hmw, "hmw", "int (f + iHf)^2 Phi' = 0", false},
      {IdentityId::thm41, "thm41", "int (Hf)^2 |x|^b = int f^2 |x|^b + 2 cot((1-b)pi/2) int f Hf sgn(x) |x|^b", false},
      {IdentityId::moncones_re, "moncones_re", "int (Hf)^2 a1 |x|^b = int f^2 a1 |x|^b + 2 int f Hf a2 |x|^b", false},
      {IdentityId::moncones_im, "moncones_im", "int (Hf)^2 a2 |x|^b = int f^2 a2 |x|^b - 2 int f Hf a1 |x|^b", false},
      {IdentityId::limit_identities, "limit_identities", "half-line identities with weight |x|^{1/2}", false},
      {IdentityId::bilinear_re, "bilinear_re", "int (HfHg - fg) Re(1/Phi') = -int (fHg + gHf) Im(1/Phi')", false},
      {IdentityId::bilinear_im, "bilinear_im", "int (HfHg - fg) Im(1/Phi') = int (fHg + gHf) Re(1/Phi')", false},
      {IdentityId::cor52_re, "cor52_re", "int (HfHg - fg) |x|^b = cot((1-b)pi/2) int (fHg + gHf) sgn(x) |x|^b", false},
      {IdentityId::cor52_im, "cor52_im", "int (HfHg - fg) sgn(x) |x|^b = -tan((1-b)pi/2) int (fHg + gHf) |x|^b", false},
      {IdentityId::bound_thm1_1, "bound_thm1_1", "int (Hf)^2 Re(1/Phi') <= phi(tau^2) int f^2 Re(1/Phi')", true},
      {IdentityId::bound_thm1_2, "bound_thm1_2", "int (Hf)^2 |Phi'|^-1 <= (2+sqrt3) phi(tau^2) int f^2 |Phi'|^-1", true},
      {IdentityId::bound_mono, "bound_mono", "int (Hf)^2 |Phi'|^-1 <= sqrt2 phi(sqrt2) int f^2 |Phi'|^-1 (monotone)", true},
      {IdentityId::bound_a2est, "bound_a2est", "int (Hf)^2 w <= e^{osc f1} (2+sqrt3) phi(tan^2 ||f2||) int f^2 w", true},
      {IdentityId::bound_a2cos, "bound_a2cos", "[e^{K f2}]_{A_2} <= sec^2 ||f2||", true},
      {IdentityId::hnorm_consistency, "hnorm_consistency", "|1 - 2 int f Hf Im(1/Phi')| <= phi(tau^2) for unit f", true},
      {IdentityId::norm_lower_bound, "norm_lower_bound", "||H chi_(0,r)||^2_{|x|^b} = r^{1+b}/(1+b) L(b)", false},
      {IdentityId::boundary_rellich, "boundary_rellich", "int |grad u|^2 (e.nu) dsigma = 2 int d_nu u (e.grad u) dsigma", false},
  };
  return c;
}

inline std::string_view to_string(IdentityId id) {
  for (const auto& e : identity_catalog())
    if (e.id == id) return e.name;
  return "unknown";
}

inline std::optional<IdentityId> identity_from_string(std::string_view s) {
  for (const auto& e : identity_catalog())
    if (e.name == s) return e.id;
  return std::nullopt;
}

namespace detail {
// Equality for report values: NaN matches NaN so that reports of failed
// terms compare equal after a round trip.
inline bool same_value(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }
}  // namespace detail

struct Term {
  std::string name;
  double value = 0;
  double error = 0;
  friend bool operator==(const Term& a, const Term& b) {
    return a.name == b.name && detail::same_value(a.value, b.value) && detail::same_value(a.error, b.error);
  }
};

struct IdentityReport {
  IdentityId id = IdentityId::rellich_re;
  std::string label;  // case or parameter tag
  double lhs = 0;
  double rhs = 0;
  double abs_residual = 0;
  double rel_residual = 0;
  double tolerance = 1e-6;
  double abs_floor = 0;
  bool inequality = false;
  bool pass = false;
  std::vector<Term> terms;
  std::vector<std::string> notes;
  std::string error;  // set when a term failed

  [[nodiscard]] const Term* term(std::string_view name) const {
    for (const auto& t : terms)
      if (t.name == name) return &t;
    return nullptr;
  }
  [[nodiscard]] double term_value(std::string_view name) const {
    const Term* t = term(name);
    if (!t) throw std::out_of_range("no term " + std::string(name));
    return t->value;
  }

  friend bool operator==(const IdentityReport& a, const IdentityReport& b) {
    using detail::same_value;
    return a.id == b.id && a.label == b.label && same_value(a.lhs, b.lhs) && same_value(a.rhs, b.rhs) &&
           same_value(a.abs_residual, b.abs_residual) && same_value(a.rel_residual, b.rel_residual) &&
           same_value(a.tolerance, b.tolerance) && same_value(a.abs_floor, b.abs_floor) &&
           a.inequality == b.inequality && a.pass == b.pass && a.terms == b.terms && a.notes == b.notes &&
           a.error == b.error;
  }
};

// Fills residuals and the verdict.  Equalities pass when rel <= tol or
// abs <= abs_floor; inequalities pass when lhs <= rhs (1 + tol), or when
// rhs = +inf and lhs is finite.
inline void finalize(IdentityReport& r) {
  r.abs_residual = std::fabs(r.lhs - r.rhs);
  r.rel_residual = r.abs_residual / std::max({std::fabs(r.lhs), std::fabs(r.rhs), 1e-300});
  if (r.error.empty() && r.inequality && std::isfinite(r.lhs) && r.rhs == std::numeric_limits<double>::infinity()) {
    r.pass = true;
    r.abs_residual = r.rel_residual = 0;
    r.notes.push_back("constant is infinite: the bound is vacuous");
    return;
  }
  if (!r.error.empty() || !std::isfinite(r.lhs) || !std::isfinite(r.rhs)) {
    r.pass = false;
    return;
  }
  if (r.inequality)
    r.pass = r.lhs <= r.rhs * (1 + r.tolerance);
  else
    r.pass = r.rel_residual <= r.tolerance || r.abs_residual <= r.abs_floor;
}

// abs_floor = tol times the largest term magnitude.
inline void set_term_floor(IdentityReport& r) {
  double s = 0;
  for (const auto& t : r.terms) s = std::max(s, std::fabs(t.value));
  r.abs_floor = r.tolerance * s;
}

// Companion identities share one scale, so an identity whose terms all
// vanish (Im(1/Phi') = 0) is judged against its partner's magnitude.
inline void set_pair_floor(IdentityReport& a, IdentityReport& b) {
  set_term_floor(a);
  set_term_floor(b);
  a.abs_floor = b.abs_floor = std::max(a.abs_floor, b.abs_floor);
}

struct VerifyOptions {
  quad::QuadratureSpec spec{};
  double tolerance = 1e-6;
  double k_tolerance = 1e-5;  // maps whose K is evaluated numerically
  bool auto_degenerate = true;
};

/// |beta| > 0.9 or theta pi within 0.05 rad of pi/2 (theta = 1/2 itself has no blow-up).
inline bool near_degenerate(double beta, double theta = 0) {
  return std::fabs(beta) > 0.9 || (theta > 0.484 && theta < 0.5);
}

inline bool near_degenerate(const ConformalMap& m) {
  switch (m.family()) {
    case ConformalMap::Family::symmetric_cone:
      return near_degenerate(m.beta());
    case ConformalMap::Family::monotone_cone:
      return near_degenerate(m.beta(), m.theta());
    default:
      return false;
  }
}

// Spec and tolerance after the near-degenerate adjustment.
struct Effective {
  quad::QuadratureSpec spec;
  double tolerance;
  bool degenerate;
};

inline Effective effective(const VerifyOptions& o, bool degenerate, bool numerical_k) {
  Effective e{o.spec, numerical_k ? std::max(o.tolerance, o.k_tolerance) : o.tolerance, false};
  // Numerically evaluated K carries noise at the inner tolerance; the outer
  // integrals cannot resolve below it.
  if (numerical_k) e.spec.rel_tol = std::max(e.spec.rel_tol, 100 * o.spec.rel_tol);
  if (o.auto_degenerate && degenerate) {
    e.spec = o.spec.tightened(100);
    e.tolerance = std::max(e.tolerance, 1e-5);
    e.degenerate = true;
  }
  return e;
}

namespace detail {

// One singularity per location, the strongest grading wins.
inline std::vector<quad::Singularity> merge_singularities(std::vector<quad::Singularity> in) {
  std::map<double, quad::Singularity> by;
  for (const auto& s : in) {
    auto it = by.find(s.location);
    if (it == by.end()) {
      by.emplace(s.location, s);
      continue;
    }
    auto& cur = it->second;
    auto rank = [](const quad::Singularity& x) {
      if (x.kind == quad::SingularityKind::power && x.exponent < 0) return 3;
      if (x.kind != quad::SingularityKind::jump) return 2;
      return 1;
    };
    if (rank(s) > rank(cur) || (rank(s) == 3 && rank(cur) == 3 && s.exponent < cur.exponent)) cur = s;
  }
  std::vector<quad::Singularity> out;
  for (auto& [x, s] : by) {
    if (s.kind == quad::SingularityKind::power && s.exponent >= 0) s = quad::Singularity::log_at(x);
    out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// f together with Hf; closed form for steps, principal-value quadrature otherwise.
class HilbertPair {
 public:
  HilbertPair(TestFunction f, const quad::QuadratureSpec& spec) : f_(std::move(f)), spec_(spec) {}

  [[nodiscard]] double f(double x) const { return f_(x); }
  [[nodiscard]] double hf(double x) const {
    if (f_.has_closed_hilbert()) return hilbert_closed(f_.steps(), x);
    return hilbert_pv(f_, x, spec_).value;
  }
  [[nodiscard]] const TestFunction& fn() const { return f_; }
  [[nodiscard]] quad::Domain support() const { return f_.support(); }

 private:
  TestFunction f_;
  quad::QuadratureSpec spec_;
};

/// Integrates named terms, collecting failures instead of throwing.
class TermIntegrator {
 public:
  TermIntegrator(std::vector<quad::Singularity> sings, quad::QuadratureSpec spec)
      : sings_(detail::merge_singularities(std::move(sings))), spec_(spec) {}

  template <class F>
  double add(IdentityReport& r, const std::string& name, F&& integrand, const quad::Domain& dom) const {
    if (!(dom.lo < dom.hi)) {
      r.terms.push_back({name, 0, 0});
      return 0;
    }
    try {
      const auto q = quad::integrate(integrand, dom, std::span<const quad::Singularity>(sings_), spec_);
      r.terms.push_back({name, q.value, q.error});
      return q.value;
    } catch (const std::exception& e) {
      if (r.error.empty()) r.error = name + ": " + e.what();
      r.terms.push_back({name, std::numeric_limits<double>::quiet_NaN(), 0});
      return std::numeric_limits<double>::quiet_NaN();
    }
  }

  [[nodiscard]] const quad::QuadratureSpec& spec() const { return spec_; }

 private:
  std::vector<quad::Singularity> sings_;
  quad::QuadratureSpec spec_;
};

inline std::vector<quad::Singularity> singularities_of(const ConformalMap& m, const TestFunction& f) {
  auto s = f.singularities();
  const auto ms = m.singularities();
  s.insert(s.end(), ms.begin(), ms.end());
  return s;
}

inline std::vector<quad::Singularity> power_weight_singularities(double beta, const TestFunction& f) {
  auto s = f.singularities();
  if (beta < 0) s.push_back(quad::Singularity::power_at(0, beta));
  else s.push_back(quad::Singularity::log_at(0));
  return s;
}

inline bool numerical_k(const ConformalMap& m) {
  return m.family() == ConformalMap::Family::helson_szego && m.k_mode() == ConformalMap::KMode::numerical;
}

inline quad::Domain positive_part(const quad::Domain& d) { return {std::max(d.lo, 0.0), d.hi}; }
inline quad::Domain negative_part(const quad::Domain& d) { return {d.lo, std::min(d.hi, 0.0)}; }

/// Both Rellich identities for (map, f).
inline std::pair<IdentityReport, IdentityReport> verify_rellich(const ConformalMap& map, const TestFunction& f,
                                                                const VerifyOptions& opt = {}) {
  const auto eff = effective(opt, near_degenerate(map), numerical_k(map));
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(singularities_of(map, f), eff.spec);
  const auto R = quad::Domain::real_line();
  const auto S = hp.support();
  auto re = [&](double x) { return map.boundary_data(x).re_inv; };
  auto im = [&](double x) { return map.boundary_data(x).im_inv; };

  IdentityReport a, b;
  a.id = IdentityId::rellich_re;
  b.id = IdentityId::rellich_im;
  a.label = b.label = map.describe() + " f=" + f.describe();
  a.tolerance = b.tolerance = eff.tolerance;

  const double hh_re = ti.add(a, "HH_re", [&](double x) { const double h = hp.hf(x); return h * h * re(x); }, R);
  const double ff_re = ti.add(a, "ff_re", [&](double x) { const double v = hp.f(x); return v * v * re(x); }, S);
  const double fh_im = ti.add(a, "fH_im", [&](double x) { return hp.f(x) * hp.hf(x) * im(x); }, S);
  a.lhs = hh_re;
  a.rhs = ff_re - 2 * fh_im;

  const double hh_im = ti.add(b, "HH_im", [&](double x) { const double h = hp.hf(x); return h * h * im(x); }, R);
  const double ff_im = ti.add(b, "ff_im", [&](double x) { const double v = hp.f(x); return v * v * im(x); }, S);
  const double fh_re = ti.add(b, "fH_re", [&](double x) { return hp.f(x) * hp.hf(x) * re(x); }, S);
  b.lhs = hh_im;
  b.rhs = ff_im + 2 * fh_re;

  set_pair_floor(a, b);
  for (auto* r : {&a, &b}) {
    if (eff.degenerate) r->notes.push_back("near-degenerate parameters: spec tightened 100x");
    finalize(*r);
  }
  return {a, b};
}

/// Power-weight identity with cot((1 - beta) pi / 2).
inline IdentityReport verify_thm41(double beta, const TestFunction& f, const VerifyOptions& opt = {}) {
  if (!(beta > -1 && beta < 1)) throw std::domain_error("thm41 needs beta in (-1, 1)");
  const auto eff = effective(opt, near_degenerate(beta), false);
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(power_weight_singularities(beta, f), eff.spec);
  auto w = [beta](double x) { return std::pow(std::fabs(x), beta); };
  IdentityReport r;
  r.id = IdentityId::thm41;
  std::ostringstream os;
  os.precision(17);
  os << "beta=" << beta << " f=" << f.describe();
  r.label = os.str();
  r.tolerance = eff.tolerance;
  const double hh = ti.add(r, "HH_w", [&](double x) { const double h = hp.hf(x); return h * h * w(x); },
                           quad::Domain::real_line());
  const double ff = ti.add(r, "ff_w", [&](double x) { const double v = hp.f(x); return v * v * w(x); }, hp.support());
  const double fhs = ti.add(r, "fH_sgn_w", [&](double x) { return hp.f(x) * hp.hf(x) * sgn(x) * w(x); }, hp.support());
  const double c = cone_cot(beta);
  r.terms.push_back({"cot", c, 0});
  r.lhs = hh;
  r.rhs = ff + 2 * c * fhs;
  if (std::fabs(beta) > 0.95) r.notes.push_back("|beta| > 0.95: cot factor near its blow-up");
  if (eff.degenerate) r.notes.push_back("near-degenerate parameters: spec tightened 100x");
  set_term_floor(r);
  finalize(r);
  return r;
}

// Half-line pieces of the weighted integrals used by the monotone-cone identities.
struct HalfLineTerms {
  double hh_pos, hh_neg, ff_pos, ff_neg, fh_pos, fh_neg;
};

inline HalfLineTerms half_line_terms(IdentityReport& r, const HilbertPair& hp, const TermIntegrator& ti, double beta) {
  auto w = [beta](double x) { return std::pow(std::fabs(x), beta); };
  const auto S = hp.support();
  auto hh = [&](double x) { const double h = hp.hf(x); return h * h * w(x); };
  auto ff = [&](double x) { const double v = hp.f(x); return v * v * w(x); };
  auto fh = [&](double x) { return hp.f(x) * hp.hf(x) * w(x); };
  HalfLineTerms t{};
  t.hh_pos = ti.add(r, "HH_w+", hh, quad::Domain::right_half(0));
  t.hh_neg = ti.add(r, "HH_w-", hh, quad::Domain::left_half(0));
  t.ff_pos = ti.add(r, "ff_w+", ff, positive_part(S));
  t.ff_neg = ti.add(r, "ff_w-", ff, negative_part(S));
  t.fh_pos = ti.add(r, "fH_w+", fh, positive_part(S));
  t.fh_neg = ti.add(r, "fH_w-", fh, negative_part(S));
  return t;
}

/// Monotone-cone identities with a1, a2; theta = beta gives the corollary form.
inline std::pair<IdentityReport, IdentityReport> verify_moncones(double beta, double theta, const TestFunction& f,
                                                                 const VerifyOptions& opt = {}) {
  const auto map = ConformalMap::monotone_cone_beta(beta, theta);
  const auto eff = effective(opt, near_degenerate(beta, theta), false);
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(power_weight_singularities(beta, f), eff.spec);
  IdentityReport a, b;
  a.id = IdentityId::moncones_re;
  b.id = IdentityId::moncones_im;
  a.label = b.label = map.describe() + " f=" + f.describe();
  a.tolerance = b.tolerance = eff.tolerance;
  const auto t = half_line_terms(a, hp, ti, beta);
  b.terms = a.terms;
  const double a1p = map.a1(1), a1n = map.a1(-1), a2p = map.a2(1), a2n = map.a2(-1);
  for (auto* r : {&a, &b}) {
    r->terms.push_back({"a1(+1)", a1p, 0});
    r->terms.push_back({"a1(-1)", a1n, 0});
    r->terms.push_back({"a2(+1)", a2p, 0});
    r->terms.push_back({"a2(-1)", a2n, 0});
  }
  b.error = a.error;
  a.lhs = a1p * t.hh_pos + a1n * t.hh_neg;
  a.rhs = a1p * t.ff_pos + a1n * t.ff_neg + 2 * (a2p * t.fh_pos + a2n * t.fh_neg);
  b.lhs = a2p * t.hh_pos + a2n * t.hh_neg;
  b.rhs = a2p * t.ff_pos + a2n * t.ff_neg - 2 * (a1p * t.fh_pos + a1n * t.fh_neg);
  set_pair_floor(a, b);
  for (auto* r : {&a, &b}) {
    if (eff.degenerate) r->notes.push_back("near-degenerate parameters: spec tightened 100x");
    finalize(*r);
  }
  return {a, b};
}

// The four half-line identities at weight |x|^{1/2}.
enum class LimitCase {
  re_positive,  // supp f in [0, inf):  int_{-inf}^0 (Hf)^2 w = 2 int_0^inf f Hf w
  re_negative,  // supp f in (-inf, 0]: int_{-inf}^0 (Hf)^2 w = int_{-inf}^0 f^2 w
  im_positive,  // supp f in [0, inf):  int_0^inf (Hf)^2 w = int_0^inf f^2 w
  im_negative,  // supp f in (-inf, 0]: int_0^inf (Hf)^2 w = -2 int_{-inf}^0 f Hf w
};

inline std::string_view to_string(LimitCase c) {
  switch (c) {
    case LimitCase::re_positive: return "re_positive";
    case LimitCase::re_negative: return "re_negative";
    case LimitCase::im_positive: return "im_positive";
    case LimitCase::im_negative: return "im_negative";
  }
  return "";
}

inline std::optional<LimitCase> limit_case_from_string(std::string_view s) {
  for (auto c : {LimitCase::re_positive, LimitCase::re_negative, LimitCase::im_positive, LimitCase::im_negative})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

inline IdentityReport verify_limit_identities(LimitCase c, const TestFunction& f, const VerifyOptions& opt = {}) {
  const auto S = f.support();
  const bool positive = c == LimitCase::re_positive || c == LimitCase::im_positive;
  if (positive && S.lo < 0) throw std::domain_error("limit identity needs supp f in [0, inf)");
  if (!positive && S.hi > 0) throw std::domain_error("limit identity needs supp f in (-inf, 0]");
  const auto eff = effective(opt, false, false);
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(power_weight_singularities(0.5, f), eff.spec);
  IdentityReport r;
  r.id = IdentityId::limit_identities;
  r.label = std::string(to_string(c)) + " f=" + f.describe();
  r.tolerance = eff.tolerance;
  auto w = [](double x) { return std::sqrt(std::fabs(x)); };
  auto hh = [&](double x) { const double h = hp.hf(x); return h * h * w(x); };
  auto ff = [&](double x) { const double v = hp.f(x); return v * v * w(x); };
  auto fh = [&](double x) { return hp.f(x) * hp.hf(x) * w(x); };
  switch (c) {
    case LimitCase::re_positive:
      r.lhs = ti.add(r, "HH_w-", hh, quad::Domain::left_half(0));
      r.rhs = 2 * ti.add(r, "fH_w+", fh, S);
      break;
    case LimitCase::re_negative:
      r.lhs = ti.add(r, "HH_w-", hh, quad::Domain::left_half(0));
      r.rhs = ti.add(r, "ff_w-", ff, S);
      break;
    case LimitCase::im_positive:
      r.lhs = ti.add(r, "HH_w+", hh, quad::Domain::right_half(0));
      r.rhs = ti.add(r, "ff_w+", ff, S);
      break;
    case LimitCase::im_negative:
      r.lhs = ti.add(r, "HH_w+", hh, quad::Domain::right_half(0));
      r.rhs = -2 * ti.add(r, "fH_w-", fh, S);
      break;
  }
  set_term_floor(r);
  finalize(r);
  return r;
}

// Membership guard for |Phi'| in A_p and A_p': local exponents e of |Phi'|
// (at 0, breakpoints and infinity) must satisfy -1 < e < min(p, p') - 1.
struct ApGuard {
  bool holds = true;
  bool borderline = false;
  std::string detail;
};

inline ApGuard bilinear_guard(const ConformalMap& map, double p) {
  const double pp = p / (p - 1);
  const double upper = std::min(p, pp) - 1;
  std::vector<double> ex;
  if (map.is_cone()) ex.push_back(-map.beta());
  if (map.family() == ConformalMap::Family::helson_szego) {
    const auto& b = map.f2().breaks();
    const auto& v = map.f2().values();
    for (std::size_t k = 0; k < b.size(); ++k) ex.push_back((v[k + 1] - v[k]) / std::numbers::pi);
    ex.push_back((v.back() - v.front()) / std::numbers::pi);
  }
  ApGuard g;
  std::ostringstream os;
  os.precision(6);
  for (double e : ex) {
    if (!(e > -1 && e < upper)) g.holds = false;
    if (std::fabs(e + 1) < 1e-9 || std::fabs(e - upper) < 1e-9) g.borderline = true;
    os << e << ' ';
  }
  g.detail = "local exponents of |Phi'|: " + os.str() + "need (-1, " + std::to_string(upper) + ")";
  return g;
}

/// Bilinear identities for (map, f, g) with exponent p.
inline std::pair<IdentityReport, IdentityReport> verify_bilinear(const ConformalMap& map, const TestFunction& f,
                                                                 const TestFunction& g, double p,
                                                                 const VerifyOptions& opt = {}) {
  if (!(p > 1) || !std::isfinite(p)) throw std::domain_error("bilinear identities need p in (1, inf)");
  const auto eff = effective(opt, near_degenerate(map), numerical_k(map));
  const HilbertPair hf(f, eff.spec), hg(g, eff.spec);
  auto sings = singularities_of(map, f);
  const auto gs = g.singularities();
  sings.insert(sings.end(), gs.begin(), gs.end());
  const TermIntegrator ti(std::move(sings), eff.spec);
  const auto R = quad::Domain::real_line();
  const auto Sf = hf.support(), Sg = hg.support();
  const quad::Domain Sfg{std::max(Sf.lo, Sg.lo), std::min(Sf.hi, Sg.hi)};
  auto re = [&](double x) { return map.boundary_data(x).re_inv; };
  auto im = [&](double x) { return map.boundary_data(x).im_inv; };

  IdentityReport a, b;
  a.id = IdentityId::bilinear_re;
  b.id = IdentityId::bilinear_im;
  std::ostringstream os;
  os.precision(17);
  os << map.describe() << " f=" << f.describe() << " g=" << g.describe() << " p=" << p;
  a.label = b.label = os.str();
  a.tolerance = b.tolerance = eff.tolerance;

  const double hh_re = ti.add(a, "HH_re", [&](double x) { return hf.hf(x) * hg.hf(x) * re(x); }, R);
  const double fg_re = ti.add(a, "fg_re", [&](double x) { return hf.f(x) * hg.f(x) * re(x); }, Sfg);
  const double fhg_im = ti.add(a, "fHg_im", [&](double x) { return hf.f(x) * hg.hf(x) * im(x); }, Sf);
  const double ghf_im = ti.add(a, "gHf_im", [&](double x) { return hg.f(x) * hf.hf(x) * im(x); }, Sg);
  a.lhs = hh_re - fg_re;
  a.rhs = -(fhg_im + ghf_im);

  const double hh_im = ti.add(b, "HH_im", [&](double x) { return hf.hf(x) * hg.hf(x) * im(x); }, R);
  const double fg_im = ti.add(b, "fg_im", [&](double x) { return hf.f(x) * hg.f(x) * im(x); }, Sfg);
  const double fhg_re = ti.add(b, "fHg_re", [&](double x) { return hf.f(x) * hg.hf(x) * re(x); }, Sf);
  const double ghf_re = ti.add(b, "gHf_re", [&](double x) { return hg.f(x) * hf.hf(x) * re(x); }, Sg);
  b.lhs = hh_im - fg_im;
  b.rhs = fhg_re + ghf_re;

  const auto guard = bilinear_guard(map, p);
  for (auto* r : {&a, &b}) {
    if (!guard.holds) r->notes.push_back("A_p and A_p' membership of |Phi'| not guaranteed: " + guard.detail);
    if (guard.borderline) r->notes.push_back("borderline A_p exponent: " + guard.detail);
    if (eff.degenerate) r->notes.push_back("near-degenerate parameters: spec tightened 100x");
  }
  set_pair_floor(a, b);
  finalize(a);
  finalize(b);
  return {a, b};
}

/// Bilinear identities for the power weight |x|^beta.
inline std::pair<IdentityReport, IdentityReport> verify_cor52(double beta, const TestFunction& f,
                                                              const TestFunction& g, double p,
                                                              const VerifyOptions& opt = {}) {
  if (!(beta > -1 && beta < 1)) throw std::domain_error("cor52 needs beta in (-1, 1)");
  if (!(p > 1) || !std::isfinite(p)) throw std::domain_error("cor52 needs p in (1, inf)");
  const auto eff = effective(opt, near_degenerate(beta), false);
  const HilbertPair hf(f, eff.spec), hg(g, eff.spec);
  auto sings = power_weight_singularities(beta, f);
  const auto gs = g.singularities();
  sings.insert(sings.end(), gs.begin(), gs.end());
  const TermIntegrator ti(std::move(sings), eff.spec);
  const auto R = quad::Domain::real_line();
  const auto Sf = hf.support(), Sg = hg.support();
  const quad::Domain Sfg{std::max(Sf.lo, Sg.lo), std::min(Sf.hi, Sg.hi)};
  auto w = [beta](double x) { return std::pow(std::fabs(x), beta); };
  auto ws = [beta](double x) { return sgn(x) * std::pow(std::fabs(x), beta); };

  IdentityReport a, b;
  a.id = IdentityId::cor52_re;
  b.id = IdentityId::cor52_im;
  std::ostringstream os;
  os.precision(17);
  os << "beta=" << beta << " f=" << f.describe() << " g=" << g.describe() << " p=" << p;
  a.label = b.label = os.str();
  a.tolerance = b.tolerance = eff.tolerance;
  const double c = cone_cot(beta);

  const double hh = ti.add(a, "HH_w", [&](double x) { return hf.hf(x) * hg.hf(x) * w(x); }, R);
  const double fg = ti.add(a, "fg_w", [&](double x) { return hf.f(x) * hg.f(x) * w(x); }, Sfg);
  const double fhg_s = ti.add(a, "fHg_sgn_w", [&](double x) { return hf.f(x) * hg.hf(x) * ws(x); }, Sf);
  const double ghf_s = ti.add(a, "gHf_sgn_w", [&](double x) { return hg.f(x) * hf.hf(x) * ws(x); }, Sg);
  a.terms.push_back({"cot", c, 0});
  a.lhs = hh - fg;
  a.rhs = c * (fhg_s + ghf_s);

  const double hh_s = ti.add(b, "HH_sgn_w", [&](double x) { return hf.hf(x) * hg.hf(x) * ws(x); }, R);
  const double fg_s = ti.add(b, "fg_sgn_w", [&](double x) { return hf.f(x) * hg.f(x) * ws(x); }, Sfg);
  const double fhg = ti.add(b, "fHg_w", [&](double x) { return hf.f(x) * hg.hf(x) * w(x); }, Sf);
  const double ghf = ti.add(b, "gHf_w", [&](double x) { return hg.f(x) * hf.hf(x) * w(x); }, Sg);
  b.terms.push_back({"cot", c, 0});
  b.lhs = hh_s - fg_s;
  if (c != 0) {
    b.rhs = -(fhg + ghf) / c;  // tan = 1 / cot
  } else {
    // tan is infinite at beta = 0; the identity then says int (fHg + gHf) = 0.
    b.rhs = b.lhs - (fhg + ghf);
    b.notes.push_back("beta = 0: checked in the form int (fHg + gHf) = 0");
  }

  for (auto* r : {&a, &b}) {
    // Weighted norms in L^p(|x|^{beta(p-1)}) and L^p'(|x|^{beta(p'-1)}) need integrability at 0.
    const double pp = p / (p - 1);
    if (!(beta * (p - 1) > -1 && beta * (pp - 1) > -1))
      r->notes.push_back("f or g may lie outside L^p(|x|^{beta(p-1)}) or L^p'(|x|^{beta(p'-1)})");
    if (eff.degenerate) r->notes.push_back("near-degenerate parameters: spec tightened 100x");
  }
  set_pair_floor(a, b);
  finalize(a);
  finalize(b);
  return {a, b};
}

/// Complex identity int (f + iHf)^2 Phi' = 0; lhs = |value|, rhs = 0, absolute tolerance.
inline IdentityReport verify_hmw(const ConformalMap& map, const TestFunction& f, const VerifyOptions& opt = {}) {
  const auto eff = effective(opt, near_degenerate(map), numerical_k(map));
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(singularities_of(map, f), eff.spec);
  const auto R = quad::Domain::real_line();
  const auto S = hp.support();
  auto dre = [&](double x) { return map.boundary_derivative(x).real(); };
  auto dim = [&](double x) { return map.boundary_derivative(x).imag(); };
  IdentityReport r;
  r.id = IdentityId::hmw;
  r.label = map.describe() + " f=" + f.describe();
  r.tolerance = eff.tolerance;
  const double hh_r = ti.add(r, "HH_ReD", [&](double x) { const double h = hp.hf(x); return h * h * dre(x); }, R);
  const double ff_r = ti.add(r, "ff_ReD", [&](double x) { const double v = hp.f(x); return v * v * dre(x); }, S);
  const double fh_i = ti.add(r, "fH_ImD", [&](double x) { return hp.f(x) * hp.hf(x) * dim(x); }, S);
  const double hh_i = ti.add(r, "HH_ImD", [&](double x) { const double h = hp.hf(x); return h * h * dim(x); }, R);
  const double ff_i = ti.add(r, "ff_ImD", [&](double x) { const double v = hp.f(x); return v * v * dim(x); }, S);
  const double fh_r = ti.add(r, "fH_ReD", [&](double x) { return hp.f(x) * hp.hf(x) * dre(x); }, S);
  const double vr = ff_r - hh_r - 2 * fh_i;
  const double vi = ff_i - hh_i + 2 * fh_r;
  r.terms.push_back({"Re value", vr, 0});
  r.terms.push_back({"Im value", vi, 0});
  r.lhs = std::hypot(vr, vi);
  r.rhs = 0;
  r.abs_floor = r.tolerance;
  if (eff.degenerate) r.notes.push_back("near-degenerate parameters: spec tightened 100x");
  finalize(r);
  return r;
}

// Rayleigh quotient terms for the weighted bounds.
struct Rayleigh {
  double hh, ff;
  [[nodiscard]] double ratio() const { return hh / ff; }
};

inline Rayleigh rayleigh(IdentityReport& r, const HilbertPair& hp, const TermIntegrator& ti,
                         const std::function<double(double)>& w, const std::string& tag) {
  const double hh = ti.add(r, "HH_" + tag, [&](double x) { const double h = hp.hf(x); return h * h * w(x); },
                           quad::Domain::real_line());
  const double ff = ti.add(r, "ff_" + tag, [&](double x) { const double v = hp.f(x); return v * v * w(x); },
                           hp.support());
  return {hh, ff};
}

inline constexpr double kBoundSlack = 1e-9;

/// Inequality reports for one map and a family of test functions:
/// thm1_1, thm1_2, the monotone bound when applicable, and the
/// |1 - 2 <f, Hf Im(1/Phi')> / <f, f Re(1/Phi')>| consistency quantity.
inline std::vector<IdentityReport> verify_bounds(const ConformalMap& map, const std::vector<TestFunction>& family,
                                                 const VerifyOptions& opt = {}) {
  const auto eff = effective(opt, near_degenerate(map), numerical_k(map));
  const auto c = bound_constants(map);
  std::vector<IdentityReport> out;
  double best_lower = 0;
  for (const auto& f : family) {
    const HilbertPair hp(f, eff.spec);
    const TermIntegrator ti(singularities_of(map, f), eff.spec);
    const std::string label = map.describe() + " f=" + f.describe();
    auto re = [&](double x) { return map.boundary_data(x).re_inv; };
    auto im = [&](double x) { return map.boundary_data(x).im_inv; };
    auto inv_mod = [&](double x) { return 1 / map.boundary_data(x).mod; };

    IdentityReport b2;
    b2.id = IdentityId::bound_thm1_2;
    b2.label = label;
    b2.inequality = true;
    b2.tolerance = kBoundSlack;
    const auto q2 = rayleigh(b2, hp, ti, inv_mod, "invmod");
    b2.lhs = q2.ratio();
    b2.rhs = c.bound_mod;
    b2.terms.push_back({"tau", c.tau, 0});
    finalize(b2);
    const std::string inv_mod_error = b2.error;

    // With tau = inf, Re(1/Phi') vanishes on a half-line and is no weight:
    // the bounds through it are not formed.
    std::optional<IdentityReport> b1_opt, hn_opt;
    if (!c.tau_infinite) {
      IdentityReport b1;
      b1.id = IdentityId::bound_thm1_1;
      b1.label = label;
      b1.inequality = true;
      b1.tolerance = kBoundSlack;
      const auto q1 = rayleigh(b1, hp, ti, re, "re");
      b1.lhs = q1.ratio();
      b1.rhs = c.bound_re;
      b1.terms.push_back({"tau", c.tau, 0});
      finalize(b1);

      IdentityReport hn;
      hn.id = IdentityId::hnorm_consistency;
      hn.label = label;
      hn.inequality = true;
      hn.tolerance = kBoundSlack;
      hn.terms.push_back({"ff_re", q1.ff, 0});
      const double fh_im = ti.add(hn, "fH_im", [&](double x) { return hp.f(x) * hp.hf(x) * im(x); }, hp.support());
      const double quotient = std::fabs(1 - 2 * fh_im / q1.ff);
      hn.terms.push_back({"rayleigh_re", q1.ratio(), 0});
      hn.lhs = quotient;
      hn.rhs = c.bound_re;
      best_lower = std::max(best_lower, quotient);
      finalize(hn);
      b1_opt = std::move(b1);
      hn_opt = std::move(hn);
    }

    if (b1_opt) out.push_back(std::move(*b1_opt));
    out.push_back(std::move(b2));
    if (map.monotone()) {
      IdentityReport bm;
      bm.id = IdentityId::bound_mono;
      bm.label = label;
      bm.inequality = true;
      bm.tolerance = kBoundSlack;
      bm.terms = {{"HH_invmod", q2.hh, 0}, {"ff_invmod", q2.ff, 0}};
      bm.lhs = q2.ratio();
      bm.rhs = c.bound_mono;
      bm.error = inv_mod_error;
      finalize(bm);
      out.push_back(std::move(bm));
    }
    if (hn_opt) out.push_back(std::move(*hn_opt));
  }
  for (auto& r : out)
    if (r.id == IdentityId::hnorm_consistency) {
      r.terms.push_back({"family_lower_bound", best_lower, 0});
      r.notes.push_back("family maximum is a lower bound for the squared norm, not the norm");
    }
  return out;
}

/// Helson-Szego chain for w = |x|^beta with (f1, f2) = (0, (beta pi / 2) sgn).
inline IdentityReport verify_a2est(double beta, const TestFunction& f, const VerifyOptions& opt = {}) {
  if (!(beta > -1 && beta < 1)) throw std::domain_error("a2est needs beta in (-1, 1)");
  const auto eff = effective(opt, near_degenerate(beta), false);
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(power_weight_singularities(beta, f), eff.spec);
  const HSPair pair(StepFunction::constant(0), StepFunction::sign(beta * std::numbers::pi / 2));
  IdentityReport r;
  r.id = IdentityId::bound_a2est;
  std::ostringstream os;
  os.precision(17);
  os << "beta=" << beta << " f=" << f.describe();
  r.label = os.str();
  r.inequality = true;
  r.tolerance = kBoundSlack;
  const auto q = rayleigh(r, hp, ti, [beta](double x) { return std::pow(std::fabs(x), beta); }, "w");
  r.lhs = q.ratio();
  r.rhs = a2est_chain_constant(pair);
  finalize(r);
  return r;
}

/// [|x|^beta]_{A_2} on the grid against sec^2(beta pi / 2); also checks the estimate is >= 1.
inline IdentityReport verify_a2cos(double beta, const ApGrid& grid = {}, const VerifyOptions& opt = {}) {
  IdentityReport r;
  r.id = IdentityId::bound_a2cos;
  std::ostringstream os;
  os.precision(17);
  os << "beta=" << beta;
  r.label = os.str();
  r.inequality = true;
  r.tolerance = kBoundSlack;
  try {
    const auto est = ap_constant(Weight::power(beta), 2, grid, opt.spec);
    r.lhs = est.value;
    r.terms.push_back({"argmax_lo", est.argmax.lo, 0});
    r.terms.push_back({"argmax_hi", est.argmax.hi, 0});
    r.notes.push_back("grid maximum is a lower bound for [w]_{A_2}: " + est.grid_spec);
    if (est.value < 1) r.error = "A_2 estimate below 1";
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.rhs = a2_cos_bound(std::fabs(beta) * std::numbers::pi / 2);
  finalize(r);
  return r;
}

namespace detail {

// ln|sigma e^s - b| = (s or ln|b|) + corr, kept apart so that the common
// s cancels exactly in differences.
struct LogAbsDiff {
  bool uses_s;
  double base;  // ln|b| when !uses_s
  double corr;
};

inline LogAbsDiff log_abs_diff(double sigma, double s, double b) {
  if (b == 0) return {true, 0, 0};
  const double lb = std::log(std::fabs(b));
  const double sb = b > 0 ? 1 : -1;
  if (s < lb) return {false, lb, std::log1p(-sigma * sb * std::exp(s - lb))};
  return {true, 0, std::log1p(-sigma * sb * std::exp(lb - s))};
}

// pi Hf(sigma e^s) for a compact step function.
inline double hilbert_log_coordinate(const StepFunction& f, double sigma, double s) {
  const auto& b = f.breaks();
  const auto& v = f.values();
  double acc = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (v[i + 1] == 0) continue;
    const auto l = log_abs_diff(sigma, s, b[i]), r = log_abs_diff(sigma, s, b[i + 1]);
    const double base = l.uses_s == r.uses_s ? (l.uses_s ? 0 : l.base - r.base) : (l.uses_s ? s - r.base : l.base - s);
    acc += v[i + 1] * (base + (l.corr - r.corr));
  }
  return acc;
}

}  // namespace detail

/// ||H chi_(0,r)||^2 in L^2(|x|^beta) against (r^{1+beta}/(1+beta)) L(beta).
///
/// The norm is integrated on each half-line in s = ln|x|, where
/// |x|^{1+beta} (Hf)^2 decays exponentially at both ends; near beta = -1 most
/// of the mass sits at |x| far below the double range, out of reach in x.
inline IdentityReport verify_norm_lower_bound(double beta, double r_len, const VerifyOptions& opt = {}) {
  if (!(beta > -1 && beta < 1)) throw std::domain_error("norm_lower_bound check needs beta in (-1, 1)");
  if (!(r_len > 0)) throw std::domain_error("norm_lower_bound check needs r > 0");
  const auto eff = effective(opt, near_degenerate(beta), false);
  const StepFunction f = StepFunction::indicator(0, r_len);
  IdentityReport r;
  r.id = IdentityId::norm_lower_bound;
  std::ostringstream os;
  os.precision(17);
  os << "beta=" << beta << " r=" << r_len;
  r.label = os.str();
  r.tolerance = std::max(eff.tolerance, 1e-5);
  const double lr = std::log(r_len);
  const std::vector<quad::Singularity> sp{quad::Singularity::log_at(lr)}, sn;
  const TermIntegrator tp(sp, eff.spec), tn(sn, eff.spec);
  auto half = [&](double sigma) {
    return [&f, sigma, beta](double s) {
      const double h = detail::hilbert_log_coordinate(f, sigma, s) * std::numbers::inv_pi;
      if (h == 0) return 0.0;
      return std::exp(2 * std::log(std::fabs(h)) + (1 + beta) * s);
    };
  };
  const double hp = tp.add(r, "HH_w+", half(1), quad::Domain::real_line());
  const double hn = tn.add(r, "HH_w-", half(-1), quad::Domain::real_line());
  const double hh = hp + hn;
  const double ff_exact = std::pow(r_len, 1 + beta) / (1 + beta);
  const auto L = norm_lower_bound(beta, eff.spec);
  r.terms.push_back({"ff_exact", ff_exact, 0});
  r.terms.push_back({"I", L.integral, L.integral_error});
  r.terms.push_back({"L", L.value, 0});
  r.terms.push_back({"ratio", hh / ff_exact, 0});
  r.lhs = hh;
  r.rhs = ff_exact * L.value;
  for (const auto& w : L.warnings) r.notes.push_back(w);
  set_term_floor(r);
  finalize(r);
  return r;
}

}  // namespace rellich
