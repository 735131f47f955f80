#pragma once

// Weights, the A_p functional on a dyadic interval grid, Helson-Szego
// constants, phi(s) and the explicit constants of the weighted bounds.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rellich/conformal.hpp"
#include "rellich/hilbert.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/test_function.hpp"

namespace rellich {

/// phi(s) = inf_{0<e<1} (e + s) / ((1 - e) e) = 1 + 2s + 2 sqrt(s^2 + s).
inline double phi(double s) {
  if (!(s >= 0)) throw std::domain_error("phi needs s >= 0");
  if (std::isinf(s)) return s;
  return 1 + 2 * s + 2 * std::sqrt(s * s + s);
}

// Minimiser of (e + s)/((1 - e) e); zero at s = 0.
inline double phi_minimizer(double s) {
  if (!(s >= 0)) throw std::domain_error("phi needs s >= 0");
  // -s + sqrt(s^2 + s) = s / (s + sqrt(s^2 + s)), the second form avoids cancellation.
  return s == 0 ? 0.0 : s / (s + std::sqrt(s * s + s));
}

inline double phi_objective(double eps, double s) { return (eps + s) / ((1 - eps) * eps); }

/// min of the phi objective over n equispaced e in [1e-4, 1 - 1e-4].
inline double phi_grid_inf(double s, int n = 10000) {
  if (!(s >= 0)) throw std::domain_error("phi needs s >= 0");
  const double lo = 1e-4, hi = 1 - 1e-4;
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double e = lo + (hi - lo) * k / (n - 1);
    m = std::min(m, phi_objective(e, s));
  }
  return m;
}

class Weight {
 public:
  enum class Kind { constant, power, hs, from_map };

  static Weight constant(double c = 1) {
    if (!(c > 0)) throw std::invalid_argument("constant weight must be positive");
    Weight w(Kind::constant, [c](double) { return c; });
    w.label_ = "constant";
    return w;
  }

  // |x|^beta; outside (-1, 1) the weight is kept but flagged as not A_2.
  static Weight power(double beta) {
    Weight w(Kind::power, [beta](double x) { return std::pow(std::fabs(x), beta); });
    w.beta_ = beta;
    w.power_points_ = {{0.0, beta}};
    w.a2_ = beta > -1 && beta < 1;
    std::ostringstream os;
    os.precision(17);
    os << "|x|^" << beta;
    w.label_ = os.str();
    return w;
  }

  // e^{f1 + K f2} with step f1, f2.
  static Weight hs(const StepFunction& f1, const StepFunction& f2) {
    if (!(f2.sup_norm() < std::numbers::pi / 2)) throw std::domain_error("hs weight needs ||f2||_inf < pi/2");
    Weight w(Kind::hs, [f1, f2](double x) { return std::exp(f1(x) + k_closed(f2, x)); });
    const auto& b = f2.breaks();
    const auto& v = f2.values();
    for (std::size_t k = 0; k < b.size(); ++k) w.power_points_.push_back({b[k], (v[k + 1] - v[k]) / std::numbers::pi});
    for (double x : f1.breaks()) w.jumps_.push_back(x);
    w.label_ = "hs";
    return w;
  }

  // |Phi'|^s.
  static Weight from_map(const ConformalMap& map, double s) {
    Weight w(Kind::from_map, [map, s](double x) { return std::pow(map.boundary_data(x).mod, s); });
    if (map.is_cone()) w.power_points_ = {{0.0, -map.beta() * s}};
    if (map.family() == ConformalMap::Family::helson_szego) {
      const auto& b = map.f2().breaks();
      const auto& v = map.f2().values();
      for (std::size_t k = 0; k < b.size(); ++k)
        w.power_points_.push_back({b[k], s * (v[k + 1] - v[k]) / std::numbers::pi});
    }
    std::ostringstream os;
    os << "|Phi'|^" << s << " for " << map.describe();
    w.label_ = os.str();
    return w;
  }

  double operator()(double x) const { return fn_(x); }

  /// w^q.
  [[nodiscard]] Weight powered(double q) const {
    Weight w = *this;
    auto f = fn_;
    w.fn_ = [f, q](double x) { return std::pow(f(x), q); };
    for (auto& p : w.power_points_) p.exponent *= q;
    w.beta_ *= q;
    w.a2_ = kind_ == Kind::power ? (w.beta_ > -1 && w.beta_ < 1) : a2_;
    std::ostringstream os;
    os << '(' << label_ << ")^" << q;
    w.label_ = os.str();
    return w;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] bool a2_flag() const { return a2_; }
  [[nodiscard]] const std::string& label() const { return label_; }

  struct PowerPoint {
    double location;
    double exponent;  // w ~ |x - location|^exponent
  };
  [[nodiscard]] const std::vector<PowerPoint>& power_points() const { return power_points_; }

  /// Average of w over (a, b); throws if w is not integrable there.
  [[nodiscard]] double average(double a, double b, const quad::QuadratureSpec& spec) const {
    std::vector<quad::Singularity> s;
    for (const auto& p : power_points_) {
      if (p.location < a || p.location > b) continue;
      if (!(p.exponent > -1)) {
        std::ostringstream os;
        os << "weight " << label_ << " is not locally integrable near " << p.location;
        throw std::domain_error(os.str());
      }
      if (p.exponent != 0) s.push_back(quad::Singularity::power_at(p.location, p.exponent));
    }
    for (double x : jumps_)
      if (x > a && x < b) s.push_back(quad::Singularity::jump_at(x));
    const auto r = quad::integrate(fn_, quad::Domain::interval(a, b), std::span<const quad::Singularity>(s), spec);
    return r.value / (b - a);
  }

 private:
  Weight(Kind k, std::function<double(double)> fn) : kind_(k), fn_(std::move(fn)) {}

  Kind kind_;
  std::function<double(double)> fn_;
  double beta_ = 0;
  bool a2_ = true;
  std::vector<PowerPoint> power_points_;
  std::vector<double> jumps_;
  std::string label_;
};

struct HSPair {
  StepFunction f1;
  StepFunction f2;
  double osc_f1 = 0;
  double sup_f2_norm = 0;

  HSPair(StepFunction a, StepFunction b) : f1(std::move(a)), f2(std::move(b)) {
    osc_f1 = f1.sup() - f1.inf();
    sup_f2_norm = f2.sup_norm();
    if (!(sup_f2_norm < std::numbers::pi / 2)) throw std::domain_error("HSPair needs ||f2||_inf < pi/2");
  }
  [[nodiscard]] Weight weight() const { return Weight::hs(f1, f2); }
};

/// sqrt(e^{osc f1} sec^2 ||f2||): a witnessed upper bound for [w]_{A_2(HS)}.
inline double hs_bound(const HSPair& p) {
  if (!(p.sup_f2_norm < std::numbers::pi / 2)) throw std::domain_error("hs_bound needs ||f2||_inf < pi/2");
  return std::exp(p.osc_f1 / 2) / std::cos(p.sup_f2_norm);
}

/// sec^2 ||f2||, the A_2 bound for e^{K f2}.
inline double a2_cos_bound(double sup_f2_norm) {
  const double c = std::cos(sup_f2_norm);
  return 1 / (c * c);
}

/// e^{osc f1} (2 + sqrt 3) phi(tan^2 ||f2||).
inline double a2est_chain_constant(const HSPair& p) {
  const double t = std::tan(p.sup_f2_norm);
  return std::exp(p.osc_f1) * (2 + std::sqrt(3.0)) * phi(t * t);
}

struct ApGrid {
  int j_min = -20, j_max = 20;  // centres 0, +-2^j
  int k_min = -20, k_max = 20;  // lengths 2^k
  bool half_intervals = true;   // (0, 2^k)

  [[nodiscard]] std::vector<quad::Domain> intervals() const {
    std::vector<double> centres{0.0};
    for (int j = j_min; j <= j_max; ++j) {
      centres.push_back(std::ldexp(1.0, j));
      centres.push_back(-std::ldexp(1.0, j));
    }
    std::vector<quad::Domain> out;
    for (double c : centres)
      for (int k = k_min; k <= k_max; ++k) {
        const double h = std::ldexp(1.0, k - 1);
        out.push_back({c - h, c + h});
      }
    if (half_intervals)
      for (int k = k_min; k <= k_max; ++k) out.push_back({0.0, std::ldexp(1.0, k)});
    return out;
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os << "dyadic centres {0, +-2^j : j in [" << j_min << ", " << j_max << "]}, lengths 2^k, k in [" << k_min
       << ", " << k_max << "]" << (half_intervals ? ", plus (0, 2^k)" : "");
    return os.str();
  }
};

struct ApEstimate {
  double value = 1;  // grid maximum: a lower bound for [w]_{A_p}
  double p = 2;
  quad::Domain argmax{0, 0};
  std::string grid_spec;
  std::size_t intervals = 0;
  bool lower_bound = true;
};

/// A_p functional of w on I: avg_I w * (avg_I w^{1-p'})^{p-1}.
inline double ap_functional(const Weight& w, const Weight& dual, double p, const quad::Domain& I,
                            const quad::QuadratureSpec& spec) {
  const double a = w.average(I.lo, I.hi, spec);
  const double d = dual.average(I.lo, I.hi, spec);
  return a * std::pow(d, p - 1);
}

/// Maximum of the A_p functional over the grid; ties keep the interval
/// that comes first in (lo, hi) order.
inline ApEstimate ap_constant(const Weight& w, double p, const ApGrid& grid = {},
                              const quad::QuadratureSpec& spec = {}) {
  if (!(p > 1) || !std::isfinite(p)) throw std::domain_error("ap_constant needs p in (1, inf)");
  const double pp = p / (p - 1);
  const Weight dual = w.powered(1 - pp);
  ApEstimate est;
  est.p = p;
  est.grid_spec = grid.describe();
  double best = -1;
  for (const auto& I : grid.intervals()) {
    const double v = ap_functional(w, dual, p, I, spec);
    ++est.intervals;
    const bool tie_first = v == best && (I.lo < est.argmax.lo || (I.lo == est.argmax.lo && I.hi < est.argmax.hi));
    if (v > best || tie_first) {
      best = v;
      est.argmax = I;
    }
  }
  // Holder gives [w]_{A_p} >= 1; the floor removes rounding below it.
  est.value = std::max(1.0, best);
  return est;
}

struct BoundConstants {
  double tau = 0;
  double bound_re = 1;    // phi(tau^2)
  double bound_mod = 1;   // (2 + sqrt 3) phi(tau^2)
  double bound_mono = std::numeric_limits<double>::quiet_NaN();  // sqrt2 phi(sqrt2), monotone maps only
  bool tau_infinite = false;
};

inline double monotone_constant() { return std::numbers::sqrt2 * phi(std::numbers::sqrt2); }

inline BoundConstants bound_constants(const ConformalMap& map) {
  BoundConstants c;
  c.tau = map.tau();
  if (!std::isfinite(c.tau)) {
    c.tau_infinite = true;
    c.bound_re = c.bound_mod = std::numeric_limits<double>::infinity();
  } else {
    c.bound_re = phi(c.tau * c.tau);
    c.bound_mod = (2 + std::sqrt(3.0)) * c.bound_re;
  }
  if (map.monotone()) c.bound_mono = monotone_constant();
  return c;
}

struct NormLowerBound {
  double beta = 0;
  double integral = 0;  // I(beta) = int_1^inf x^{-2-beta} ln(x - 1) dx
  double value = 1;     // L(beta)
  double integral_error = 0;
  std::vector<std::string> warnings;
};

/// cot((1 - beta) pi / 2), exact zero at beta = 0.
inline double cone_cot(double beta) {
  const double t = (1 - beta) / 2;
  return detail::cos_pi(t) / detail::sin_pi(t);
}

/// Lower bound L(beta) for ||H||^2 on L^2(|x|^beta) from the indicators of (0, r).
///
/// With x = e^s and a = 1 + beta,
///   I = int_0^inf e^{-a s} (s + log1p(-e^{-s})) ds = 1/a^2 + int_0^inf e^{-a s} log1p(-e^{-s}) ds,
/// so the slowly decaying part is exact and the quadrature sees e^{-(a+1)s} decay.
inline NormLowerBound norm_lower_bound(double beta, const quad::QuadratureSpec& spec = {}) {
  if (!(beta > -1 && beta < 1)) throw std::domain_error("norm_lower_bound needs beta in (-1, 1)");
  NormLowerBound out;
  out.beta = beta;
  if (std::fabs(beta) > 0.95) out.warnings.push_back("|beta| > 0.95: cot factor near its blow-up");
  const double a = 1 + beta;
  auto g = [a](double s) { return std::exp(-a * s) * std::log1p(-std::exp(-s)); };
  const auto r = quad::integrate(g, quad::Domain::right_half(0), {quad::Singularity::log_at(0)}, spec);
  out.integral = 1 / (a * a) + r.value;
  out.integral_error = r.error;
  out.value = 1 - 2 * a / std::numbers::pi * cone_cot(beta) * out.integral;
  return out;
}

}  // namespace rellich
