#pragma once

// Neumann problem in the upper half-plane:
//   u_f(x, y) = -(1/pi) int log(sqrt((x - t)^2 + y^2) / (1 + |t|)) f(t) dt,
// its gradient (-Q_y * f, -P_y * f), vertical traces toward (-Hf, -f), and
// the boundary Rellich identity pulled back from the image domain to R.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rellich/conformal.hpp"
#include "rellich/hilbert.hpp"
#include "rellich/identities.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/test_function.hpp"

namespace rellich {

struct HalfPlanePoint {
  double x = 0;
  double y = 1;

  HalfPlanePoint() = default;
  HalfPlanePoint(double x_, double y_) : x(x_), y(y_) {
    if (!(y > 0) || !std::isfinite(x) || !std::isfinite(y))
      throw std::domain_error("HalfPlanePoint needs finite x and y > 0");
  }
};

struct GradientField {
  enum class Method { convolution_quadrature, closed_form };
  double dx = 0;  // -(Q_y * f)(x)
  double dy = 0;  // -(P_y * f)(x)
  Method method = Method::convolution_quadrature;
};

namespace detail {

// Break points of f plus splits at x +- y 2^k that resolve the kernel peak
// of width y around t = x.
inline std::vector<quad::Singularity> half_plane_splits(const TestFunction& f, const HalfPlanePoint& p) {
  std::vector<quad::Singularity> s;
  for (double b : f.breakpoints()) s.push_back(quad::Singularity::jump_at(b));
  const auto supp = f.support();
  const double span = std::isfinite(supp.hi - supp.lo) ? std::max(std::fabs(supp.lo - p.x), std::fabs(supp.hi - p.x))
                                                        : 1e6;
  if (supp.interior(p.x)) s.push_back(quad::Singularity::jump_at(p.x));
  for (double r = p.y; r < span; r *= 2)
    for (double t : {p.x - r, p.x + r})
      if (supp.interior(t)) s.push_back(quad::Singularity::jump_at(t));
  return s;
}

template <class K>
double convolve(const TestFunction& f, const HalfPlanePoint& p, K&& kernel, const quad::QuadratureSpec& spec) {
  if (f.is_zero()) return 0;
  const auto s = half_plane_splits(f, p);
  auto g = [&](double t) {
    const double v = f(t);
    return v == 0 ? 0.0 : v * kernel(t);
  };
  return quad::integrate(g, f.support(), std::span<const quad::Singularity>(s), spec).value;
}

}  // namespace detail

inline double u_f(const TestFunction& f, const HalfPlanePoint& p, const quad::QuadratureSpec& spec = {}) {
  auto k = [&](double t) {
    const double d = std::hypot(p.x - t, p.y);
    return std::log(d) - std::log1p(std::fabs(t));
  };
  return -std::numbers::inv_pi * detail::convolve(f, p, k, spec);
}

inline GradientField gradient(const TestFunction& f, const HalfPlanePoint& p, const quad::QuadratureSpec& spec = {}) {
  auto q = [&](double t) {
    const double d = p.x - t;
    return d / (d * d + p.y * p.y);
  };
  auto pk = [&](double t) {
    const double d = p.x - t;
    return p.y / (d * d + p.y * p.y);
  };
  return {-std::numbers::inv_pi * detail::convolve(f, p, q, spec),
          -std::numbers::inv_pi * detail::convolve(f, p, pk, spec), GradientField::Method::convolution_quadrature};
}

/// Step functions: per piece [l, r) with value v,
/// Q part (v/2) ln(((x-l)^2 + y^2) / ((x-r)^2 + y^2)), P part v (atan((x-l)/y) - atan((x-r)/y)).
inline GradientField gradient_closed(const StepFunction& f, const HalfPlanePoint& p) {
  if (!f.compact()) throw std::invalid_argument("gradient_closed needs compact support");
  const auto& b = f.breaks();
  const auto& v = f.values();
  long double qx = 0, py = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double c = v[i + 1];
    if (c == 0) continue;
    const double dl = p.x - b[i], dr = p.x - b[i + 1];
    qx += 0.5 * c * std::log((dl * dl + p.y * p.y) / (dr * dr + p.y * p.y));
    py += c * (std::atan(dl / p.y) - std::atan(dr / p.y));
  }
  const long double ip = std::numbers::inv_pi_v<long double>;
  return {static_cast<double>(-ip * qx), static_cast<double>(-ip * py), GradientField::Method::closed_form};
}

// Spec for finite-difference stencils: values must be converged to
// roundoff before they are differenced.
inline quad::QuadratureSpec stencil_spec(quad::QuadratureSpec s = {}) {
  s.rel_tol = std::min(s.rel_tol, 1e-15);
  s.abs_tol = std::min(s.abs_tol, 1e-17);
  s.max_subdivisions = std::max(s.max_subdivisions, 20000);
  return s;
}

/// Five-point Laplacian of u_f at p with step h.
inline double laplacian_residual(const TestFunction& f, const HalfPlanePoint& p, double h,
                                 const quad::QuadratureSpec& spec = stencil_spec()) {
  if (!(h > 0 && h < p.y)) throw std::domain_error("laplacian stencil must stay in the upper half-plane");
  auto u = [&](double x, double y) { return u_f(f, HalfPlanePoint(x, y), spec); };
  const double c = u(p.x, p.y);
  return (u(p.x + h, p.y) + u(p.x - h, p.y) + u(p.x, p.y + h) + u(p.x, p.y - h) - 4 * c) / (h * h);
}

/// Central differences of u_f.
inline GradientField gradient_fd(const TestFunction& f, const HalfPlanePoint& p, double h,
                                 const quad::QuadratureSpec& spec = stencil_spec()) {
  if (!(h > 0 && h < p.y)) throw std::domain_error("difference stencil must stay in the upper half-plane");
  auto u = [&](double x, double y) { return u_f(f, HalfPlanePoint(x, y), spec); };
  return {(u(p.x + h, p.y) - u(p.x - h, p.y)) / (2 * h), (u(p.x, p.y + h) - u(p.x, p.y - h)) / (2 * h),
          GradientField::Method::convolution_quadrature};
}

/// |d_x(-P_y * f) - d_y(-Q_y * f)| by central differences of the convolutions.
inline double cauchy_riemann_residual(const TestFunction& f, const HalfPlanePoint& p, double h,
                                      const quad::QuadratureSpec& spec = stencil_spec()) {
  if (!(h > 0 && h < p.y)) throw std::domain_error("difference stencil must stay in the upper half-plane");
  auto g = [&](double x, double y) { return gradient(f, HalfPlanePoint(x, y), spec); };
  const double dxdy = (g(p.x + h, p.y).dy - g(p.x - h, p.y).dy) / (2 * h);
  const double dydx = (g(p.x, p.y + h).dx - g(p.x, p.y - h).dx) / (2 * h);
  return std::fabs(dxdy - dydx);
}

struct TraceRow {
  double y = 0;
  double dx = 0;
  double dy = 0;
  double err_dx = 0;  // |dx + Hf(x)|
  double err_dy = 0;  // |dy + f(x)|
};

struct TraceReport {
  double x = 0;
  double hf = 0;
  double f = 0;
  std::vector<TraceRow> rows;
  // Least-squares slope of log err against log y over rows with err above
  // roundoff; nullopt when fewer than two such rows remain.
  std::optional<double> order_dx, order_dy;
  bool pass = false;
  std::string note;
};

inline std::vector<double> dyadic_heights(int kmax = 12) {
  std::vector<double> y;
  for (int k = 1; k <= kmax; ++k) y.push_back(std::ldexp(1.0, -k));
  return y;
}

namespace detail {

inline std::optional<double> fitted_order(const std::vector<TraceRow>& rows, double TraceRow::*err, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rows) {
    const double e = r.*err;
    if (!(e > floor)) continue;
    const double lx = std::log(r.y), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (den == 0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

// Non-increasing over the last `n` rows; errors at roundoff level count as settled.
inline bool decreasing_tail(const std::vector<TraceRow>& rows, double TraceRow::*err, std::size_t n, double floor) {
  if (rows.size() < n) return false;
  for (std::size_t i = rows.size() - n + 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].*err, b = rows[i].*err;
    if (b <= floor) continue;
    if (!(b < a)) return false;
  }
  return true;
}

}  // namespace detail

/// Vertical approach (x, y) -> (x, 0) of grad u_f toward (-Hf(x), -f(x)).
inline TraceReport trace_check(const TestFunction& f, double x, const std::vector<double>& ys = dyadic_heights(),
                               const quad::QuadratureSpec& spec = stencil_spec()) {
  for (double b : f.breakpoints())
    if (x == b) throw std::domain_error("trace_check: x must not be a break point of f");
  TraceReport rep;
  rep.x = x;
  rep.f = f(x);
  rep.hf = f.is_zero() ? 0.0 : f.has_closed_hilbert() ? hilbert_closed(f.steps(), x) : hilbert_pv(f, x, spec).value;
  for (double y : ys) {
    const auto g = gradient(f, HalfPlanePoint(x, y), spec);
    rep.rows.push_back({y, g.dx, g.dy, std::fabs(g.dx + rep.hf), std::fabs(g.dy + rep.f)});
  }
  const double floor = 1e-12 * std::max({1.0, std::fabs(rep.hf), std::fabs(rep.f)});
  rep.order_dx = detail::fitted_order(rep.rows, &TraceRow::err_dx, floor);
  rep.order_dy = detail::fitted_order(rep.rows, &TraceRow::err_dy, floor);
  if (rep.rows.empty()) {
    rep.note = "empty height sequence";
    return rep;
  }
  const auto& last = rep.rows.back();
  const bool small = last.err_dx < 1e-3 && last.err_dy < 1e-3;
  const bool dec = detail::decreasing_tail(rep.rows, &TraceRow::err_dx, 4, floor) &&
                   detail::decreasing_tail(rep.rows, &TraceRow::err_dy, 4, floor);
  rep.pass = small && dec;
  if (!small) rep.note = "trace error at the smallest height is not below 1e-3";
  else if (!dec) rep.note = "trace error is not decreasing over the last four heights";
  return rep;
}

/// Constant direction e for the boundary identity.
enum class RellichDirection { e1, e2 };  // e1 = (1, 0), e2 = (0, 1)

inline std::string_view to_string(RellichDirection e) { return e == RellichDirection::e1 ? "e1" : "e2"; }

/// int_{dOmega} |grad v|^2 (e.nu) dsigma = 2 int_{dOmega} g (e.grad v) dsigma with v = u_f o Psi,
/// evaluated on R through z = Phi(x), dsigma = |Phi'(x)| dx.
///
/// On the boundary grad v = Hf a + f b with a = (-Re(1/Phi'), Im(1/Phi')),
/// b = (-Im(1/Phi'), -Re(1/Phi')), and nu = (Phi2', -Phi1') / |Phi'|.  The
/// Neumann datum g = grad v . nu is formed from these vectors, not assumed.
/// Terms: HH_nu and ff_nu split the left side (a . b = 0), fH_e and ff_e the
/// right side; grad_sq = int |grad v|^2 dsigma bounds both sides and sets
/// the absolute floor.  For e2 they equal -HH_re, -ff_re, 2 fH_im, -2 ff_re of the
/// rellich_re report; for e1, -HH_im, -ff_im, -2 fH_re, -2 ff_im.
inline IdentityReport verify_boundary_rellich(const ConformalMap& map, const TestFunction& f, RellichDirection dir,
                                              const VerifyOptions& opt = {}) {
  const auto eff = effective(opt, near_degenerate(map), numerical_k(map));
  const HilbertPair hp(f, eff.spec);
  const TermIntegrator ti(singularities_of(map, f), eff.spec);
  const auto R = quad::Domain::real_line();
  const auto S = hp.support();
  const double e1 = dir == RellichDirection::e1 ? 1 : 0, e2 = 1 - e1;

  struct Local {
    double ax, ay, bx, by;  // a, b as above
    double nux, nuy;
    double jac;             // |Phi'|
  };
  auto local = [&](double x) {
    const auto bd = map.boundary_data(x);
    const std::complex<double> d = map.boundary_derivative(x);
    const double m = std::abs(d);
    return Local{-bd.re_inv, bd.im_inv, -bd.im_inv, -bd.re_inv, d.imag() / m, -d.real() / m, m};
  };
  auto e_dot = [&](double vx, double vy) { return e1 * vx + e2 * vy; };

  IdentityReport r;
  r.id = IdentityId::boundary_rellich;
  r.label = map.describe() + " f=" + f.describe() + " e=" + std::string(to_string(dir));
  r.tolerance = eff.tolerance;

  const double hh = ti.add(r, "HH_nu", [&](double x) {
    const double h = hp.hf(x);
    const auto L = local(x);
    return h * h * (L.ax * L.ax + L.ay * L.ay) * e_dot(L.nux, L.nuy) * L.jac;
  }, R);
  const double ff = ti.add(r, "ff_nu", [&](double x) {
    const double v = hp.f(x);
    const auto L = local(x);
    return v * v * (L.bx * L.bx + L.by * L.by) * e_dot(L.nux, L.nuy) * L.jac;
  }, S);
  // g vanishes off supp f: grad v . nu = Hf (a . nu) + f (b . nu) and a . nu = 0.
  auto datum = [&](double x, const Local& L) {
    return hp.hf(x) * (L.ax * L.nux + L.ay * L.nuy) + hp.f(x) * (L.bx * L.nux + L.by * L.nuy);
  };
  const double fh = ti.add(r, "fH_e", [&](double x) {
    const auto L = local(x);
    return 2 * datum(x, L) * hp.hf(x) * e_dot(L.ax, L.ay) * L.jac;
  }, S);
  const double f2 = ti.add(r, "ff_e", [&](double x) {
    const auto L = local(x);
    return 2 * datum(x, L) * hp.f(x) * e_dot(L.bx, L.by) * L.jac;
  }, S);
  ti.add(r, "grad_sq", [&](double x) {
    const double h = hp.hf(x), v = hp.f(x);
    const auto L = local(x);
    return (h * h * (L.ax * L.ax + L.ay * L.ay) + v * v * (L.bx * L.bx + L.by * L.by)) * L.jac;
  }, R);
  r.lhs = hh + ff;
  r.rhs = fh + f2;
  set_term_floor(r);
  if (eff.degenerate) r.notes.push_back("near-degenerate parameters: spec tightened 100x");
  finalize(r);
  return r;
}

/// Largest |boundary term - expected rellich term| over the four pairings
/// listed at verify_boundary_rellich.
inline double pullback_term_mismatch(const IdentityReport& boundary, const IdentityReport& rellich,
                                     RellichDirection dir) {
  const bool e2 = dir == RellichDirection::e2;
  const char* hh = e2 ? "HH_re" : "HH_im";
  const char* ff = e2 ? "ff_re" : "ff_im";
  const char* fh = e2 ? "fH_im" : "fH_re";
  const double sfh = e2 ? 2 : -2;
  double m = 0;
  m = std::max(m, std::fabs(boundary.term_value("HH_nu") + rellich.term_value(hh)));
  m = std::max(m, std::fabs(boundary.term_value("ff_nu") + rellich.term_value(ff)));
  m = std::max(m, std::fabs(boundary.term_value("fH_e") - sfh * rellich.term_value(fh)));
  m = std::max(m, std::fabs(boundary.term_value("ff_e") + 2 * rellich.term_value(ff)));
  return m;
}

}  // namespace rellich
