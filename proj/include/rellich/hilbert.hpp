#pragma once

// Hilbert transform Hf(x) = (1/pi) p.v. int f(y) / (x - y) dy and its
// compensated version K for bounded functions.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rellich/quadrature.hpp"
#include "rellich/test_function.hpp"

namespace rellich {

class LogSingularityError : public std::domain_error {
 public:
  explicit LogSingularityError(double x)
      : std::domain_error("Hilbert transform has a log singularity at x = " + std::to_string(x)), x_(x) {}
  [[nodiscard]] double where() const { return x_; }

 private:
  double x_;
};

struct HilbertEvaluation {
  enum class Method { closed_form, pv_quadrature, spectral_oracle };
  double value = 0;
  Method method = Method::closed_form;
  double error_estimate = 0;
};

namespace detail {

// ln(|x - a| / |x - b|), accurate when x is far from both points.
inline double log_ratio(double x, double a, double b) {
  const double xa = x - a, xb = x - b;
  const double q = (b - a) / xb;  // (x - a)/(x - b) = 1 + q
  if (std::fabs(q) < 0.5) return std::log1p(q);
  return std::log(std::fabs(xa) / std::fabs(xb));
}

// ln max(1, |t|) = int_0^t chi_{|s|>1} / s ds.
inline double compensator(double t) { return std::log(std::max(1.0, std::fabs(t))); }

}  // namespace detail

/// Closed-form Hf for compactly supported step functions:
/// sum_i v_i (1/pi) ln(|x - b_i| / |x - b_{i+1}|).
inline double hilbert_closed(const StepFunction& f, double x) {
  if (!f.compact()) throw std::invalid_argument("hilbert_closed needs a compactly supported step function");
  const auto& b = f.breaks();
  const auto& v = f.values();
  long double acc = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (x == b[i] || x == b[i + 1]) throw LogSingularityError(x);
    if (v[i + 1] != 0) acc += v[i + 1] * detail::log_ratio(x, b[i], b[i + 1]);
  }
  return static_cast<double>(acc / std::numbers::pi_v<long double>);
}

inline double hilbert_closed(const TestFunction& f, double x) {
  if (!f.has_closed_hilbert()) throw std::invalid_argument("closed-form Hilbert transform needs a step function");
  return hilbert_closed(f.steps(), x);
}

/// Hf(x) by principal-value quadrature over the support of f.
inline HilbertEvaluation hilbert_pv(const TestFunction& f, double x, const quad::QuadratureSpec& spec) {
  using quad::Domain;
  if (f.is_zero()) return {0, HilbertEvaluation::Method::pv_quadrature, 0};
  for (double j : f.jump_points())
    if (x == j) throw std::domain_error("hilbert_pv: x is a jump point of f");
  const Domain supp = f.support();
  std::vector<quad::Singularity> sings;
  for (double p : f.breakpoints()) sings.push_back(quad::Singularity::jump_at(p));
  auto fn = [&f](double y) { return f(y); };
  quad::QuadResult r;
  if (supp.interior(x)) {
    r = quad::integrate_pv(fn, x, supp, std::span<const quad::Singularity>(sings), spec);
  } else if (supp.contains(x)) {
    // x is a finite end of the support where f is continuous.
    Domain wide{supp.lo - 1, supp.hi + 1};
    r = quad::integrate_pv(fn, x, wide, std::span<const quad::Singularity>(sings), spec);
  } else {
    auto kernel = [&](double y) { return f(y) / (x - y); };
    r = quad::integrate(kernel, supp, std::span<const quad::Singularity>(sings), spec);
  }
  return {r.value / std::numbers::pi, HilbertEvaluation::Method::pv_quadrature, r.error / std::numbers::pi};
}

/// H applied to a general integrable function given as a callable with
/// declared singularities, by principal value over `dom`.
template <class F>
HilbertEvaluation hilbert_pv(F&& fn, double x, const quad::Domain& dom, std::span<const quad::Singularity> sings,
                             const quad::QuadratureSpec& spec) {
  quad::QuadResult r;
  if (dom.interior(x)) {
    r = quad::integrate_pv(fn, x, dom, sings, spec);
  } else {
    auto kernel = [&](double y) { return fn(y) / (x - y); };
    r = quad::integrate(kernel, dom, sings, spec);
  }
  return {r.value / std::numbers::pi, HilbertEvaluation::Method::pv_quadrature, r.error / std::numbers::pi};
}

// A bounded function for K: callable plus the points where it jumps.
struct BoundedFunction {
  std::function<double(double)> fn;
  std::vector<double> breakpoints;

  BoundedFunction() = default;
  BoundedFunction(std::function<double(double)> f, std::vector<double> b) : fn(std::move(f)), breakpoints(std::move(b)) {}
  BoundedFunction(const StepFunction& s)  // NOLINT(google-explicit-constructor)
      : fn([s](double x) { return s(x); }), breakpoints(s.breaks()) {}
};

struct KEvaluation {
  double value = 0;
  double error_estimate = 0;
  // Magnitude of the contribution from |y| > tail_radius: what a symmetric
  // truncation at that radius would discard.
  double truncation_tail = 0;
  bool slow_decay = false;
};

/// Kf(x) = (1/pi) p.v. int f(y) (1/(x - y) + chi_{|y|>1}(y) / y) dy.
///
/// On |y| <= A = 2 max(1, |x|) the singular part is a principal value; for
/// |y| > A the compensated kernel x / (y (x - y)) is absolutely integrable
/// and is integrated out to infinity.
inline KEvaluation k_transform(const BoundedFunction& f, double x, const quad::QuadratureSpec& spec) {
  using quad::Domain;
  using quad::Singularity;
  for (double b : f.breakpoints)
    if (b == x) throw std::domain_error("k_transform: x is a jump point of f");
  const double A = 2 * std::max(1.0, std::fabs(x));
  const double R = std::max(spec.tail_radius, 2 * A);

  std::vector<Singularity> inner_s{Singularity::jump_at(-1), Singularity::jump_at(1)};
  std::vector<Singularity> left_s, right_s, far_l, far_r;
  for (double b : f.breakpoints) {
    if (b > -A && b < A) inner_s.push_back(Singularity::jump_at(b));
    if (b <= -A) left_s.push_back(Singularity::jump_at(b));
    if (b >= A) right_s.push_back(Singularity::jump_at(b));
  }
  // Geometric splits for the x/y layer of the compensated kernel on |y| > 1.
  auto near_break = [&](double y) {
    for (double b : f.breakpoints)
      if (std::fabs(b - y) < 1e-3 * std::fabs(y)) return true;
    return false;
  };
  for (int k = 1; std::ldexp(1.0, k) < A; ++k)
    for (double y : {-std::ldexp(1.0, k), std::ldexp(1.0, k)})
      if (std::fabs(y - x) > 1e-3 * std::fabs(y) && !near_break(y)) inner_s.push_back(Singularity::jump_at(y));
  auto num = [&](double y) {
    const double fy = f.fn(y);
    return std::fabs(y) > 1 ? fy * (1 + (x - y) / y) : fy;
  };
  auto outer = [&](double y) { return f.fn(y) * x / (y * (x - y)); };

  const auto in = quad::integrate_pv(num, x, Domain::interval(-A, A), std::span<const Singularity>(inner_s), spec);
  const auto lo = quad::integrate(outer, Domain::left_half(-A), std::span<const Singularity>(left_s), spec);
  const auto hi = quad::integrate(outer, Domain::right_half(A), std::span<const Singularity>(right_s), spec);

  // What truncation at R would drop.
  for (const auto& s : left_s)
    if (s.location < -R) far_l.push_back(s);
  for (const auto& s : right_s)
    if (s.location > R) far_r.push_back(s);
  const auto tl = quad::integrate(outer, Domain::left_half(-R), std::span<const Singularity>(far_l), spec);
  const auto tr = quad::integrate(outer, Domain::right_half(R), std::span<const Singularity>(far_r), spec);

  KEvaluation k;
  constexpr double inv_pi = std::numbers::inv_pi;
  k.value = (in.value + lo.value + hi.value) * inv_pi;
  k.error_estimate = (in.error + lo.error + hi.error) * inv_pi;
  k.truncation_tail = std::fabs(tl.value + tr.value) * inv_pi;
  k.slow_decay = k.truncation_tail > std::max(spec.abs_tol, spec.rel_tol * std::fabs(k.value));
  return k;
}

/// Closed-form K for step functions (tails may be nonzero):
/// each piece [l, r) with value v contributes
/// (v/pi) [(ln|x - l| - ln max(1,|l|)) - (ln|x - r| - ln max(1,|r|))],
/// with the bracket for an infinite end omitted.
inline double k_closed(const StepFunction& f, double x) {
  const auto& b = f.breaks();
  const auto& v = f.values();
  auto end_term = [x](double t) {
    if (x == t) throw LogSingularityError(x);
    return std::log(std::fabs(x - t)) - detail::compensator(t);
  };
  long double acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    const bool has_l = i > 0, has_r = i < b.size();
    double term = 0;
    if (has_l && has_r) {
      if (x == b[i - 1] || x == b[i]) throw LogSingularityError(x);
      term = detail::log_ratio(x, b[i - 1], b[i]) - detail::compensator(b[i - 1]) + detail::compensator(b[i]);
    } else if (has_l) {
      term = end_term(b[i - 1]);
    } else if (has_r) {
      term = -end_term(b[i]);
    }
    acc += v[i] * term;
  }
  return static_cast<double>(acc / std::numbers::pi_v<long double>);
}

}  // namespace rellich
