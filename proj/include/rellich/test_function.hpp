#pragma once

// Real-valued test functions f with support and singularity metadata.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rellich/quadrature.hpp"

namespace rellich {

/// sgn with sgn(0) = 0.
inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Piecewise constant function: values[i] on [breaks[i-1], breaks[i]), with
// values.front() on (-inf, breaks[0]) and values.back() on [breaks.back(), inf).
class StepFunction {
 public:
  StepFunction() : values_{0.0} {}

  StepFunction(std::vector<double> breaks, std::vector<double> values)
      : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (values_.size() != breaks_.size() + 1)
      throw std::invalid_argument("StepFunction: need one more value than breakpoints");
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (!std::isfinite(breaks_[i]) || (i > 0 && !(breaks_[i - 1] < breaks_[i])))
        throw std::invalid_argument("StepFunction: breakpoints must be finite and strictly increasing");
    }
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("StepFunction: values must be finite");
  }

  // Sum of c * chi_[a, b) terms.
  struct Term {
    double a, b, c;
  };

  static StepFunction from_indicators(const std::vector<Term>& terms) {
    std::vector<double> pts;
    for (const auto& t : terms) {
      if (!(t.a < t.b) || !std::isfinite(t.a) || !std::isfinite(t.b))
        throw std::invalid_argument("indicator needs finite a < b");
      pts.push_back(t.a);
      pts.push_back(t.b);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> vals(pts.size() + 1, 0.0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double mid = 0.5 * (pts[i] + pts[i + 1]);
      double v = 0;
      for (const auto& t : terms)
        if (mid >= t.a && mid < t.b) v += t.c;
      vals[i + 1] = v;
    }
    return StepFunction(pts, vals).simplified();
  }

  static StepFunction indicator(double a, double b, double c = 1) { return from_indicators({{a, b, c}}); }
  static StepFunction sign(double scale = 1) { return StepFunction({0.0}, {-scale, scale}); }
  static StepFunction constant(double c) { return StepFunction({}, {c}); }

  double operator()(double x) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
  }

  [[nodiscard]] const std::vector<double>& breaks() const { return breaks_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] bool compact() const { return values_.front() == 0 && values_.back() == 0; }
  [[nodiscard]] double sup_norm() const {
    double m = 0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
  }
  [[nodiscard]] double sup() const { return *std::max_element(values_.begin(), values_.end()); }
  [[nodiscard]] double inf() const { return *std::min_element(values_.begin(), values_.end()); }

  // Drops breakpoints where the value does not change.
  [[nodiscard]] StepFunction simplified() const {
    std::vector<double> b, v{values_.front()};
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (values_[i + 1] != v.back()) {
        b.push_back(breaks_[i]);
        v.push_back(values_[i + 1]);
      }
    }
    return StepFunction(std::move(b), std::move(v));
  }

  // x -> f(lambda x).
  [[nodiscard]] StepFunction dilated(double lambda) const {
    if (!(lambda > 0)) throw std::invalid_argument("dilation factor must be positive");
    std::vector<double> b(breaks_);
    for (double& x : b) x /= lambda;
    return {std::move(b), values_};
  }

  [[nodiscard]] StepFunction scaled(double c) const {
    std::vector<double> v(values_);
    for (double& y : v) y *= c;
    return {breaks_, std::move(v)};
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

struct Hat {
  double a, peak, b;
  double height = 1;
};

// height * exp(1 - 1 / (1 - t^2)) with t the position rescaled to (-1, 1).
struct Bump {
  double a, b;
  double height = 1;
};

struct CustomFunction {
  std::function<double(double)> fn;
  quad::Domain support;
  std::vector<double> breakpoints;
  std::string label = "custom";
};

class TestFunction {
 public:
  enum class Kind { step, hat, bump, custom };

  TestFunction() : rep_(StepFunction{}) {}
  TestFunction(StepFunction s) : rep_(std::move(s)) {  // NOLINT(google-explicit-constructor)
    if (!std::get<StepFunction>(rep_).compact())
      throw std::invalid_argument("TestFunction: step functions must have compact support");
  }
  TestFunction(Hat h) : rep_(h) {  // NOLINT(google-explicit-constructor)
    if (!(h.a < h.peak && h.peak < h.b)) throw std::invalid_argument("hat needs a < peak < b");
  }
  TestFunction(Bump b) : rep_(b) {  // NOLINT(google-explicit-constructor)
    if (!(b.a < b.b)) throw std::invalid_argument("bump needs a < b");
  }
  TestFunction(CustomFunction c) : rep_(std::move(c)) {  // NOLINT(google-explicit-constructor)
    auto& cf = std::get<CustomFunction>(rep_);
    if (!cf.fn) throw std::invalid_argument("custom test function needs a callable");
    std::sort(cf.breakpoints.begin(), cf.breakpoints.end());
  }

  static TestFunction indicator(double a, double b, double c = 1) { return StepFunction::indicator(a, b, c); }
  static TestFunction indicators(const std::vector<StepFunction::Term>& t) {
    return StepFunction::from_indicators(t);
  }

  [[nodiscard]] Kind kind() const { return static_cast<Kind>(rep_.index()); }
  [[nodiscard]] bool has_closed_hilbert() const { return kind() == Kind::step; }
  [[nodiscard]] const StepFunction& steps() const { return std::get<StepFunction>(rep_); }
  [[nodiscard]] const Hat& hat() const { return std::get<Hat>(rep_); }
  [[nodiscard]] const Bump& bump() const { return std::get<Bump>(rep_); }

  double operator()(double x) const {
    return std::visit(
        [x](const auto& r) -> double {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, StepFunction>) {
            return r(x);
          } else if constexpr (std::is_same_v<T, Hat>) {
            if (x <= r.a || x >= r.b) return 0.0;
            return x < r.peak ? r.height * (x - r.a) / (r.peak - r.a) : r.height * (r.b - x) / (r.b - r.peak);
          } else if constexpr (std::is_same_v<T, Bump>) {
            if (x <= r.a || x >= r.b) return 0.0;
            const double t = (2 * x - r.a - r.b) / (r.b - r.a);
            return r.height * std::exp(1 - 1 / (1 - t * t));
          } else {
            return r.fn(x);
          }
        },
        rep_);
  }

  [[nodiscard]] quad::Domain support() const {
    return std::visit(
        [](const auto& r) -> quad::Domain {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, StepFunction>) {
            if (r.breaks().empty()) return {0, 0};
            return {r.breaks().front(), r.breaks().back()};
          } else if constexpr (std::is_same_v<T, Hat> || std::is_same_v<T, Bump>) {
            return {r.a, r.b};
          } else {
            return r.support;
          }
        },
        rep_);
  }

  [[nodiscard]] bool is_zero() const {
    return kind() == Kind::step && steps().breaks().empty() && steps().values().front() == 0;
  }

  /// Points where f itself is discontinuous.
  [[nodiscard]] std::vector<double> jump_points() const {
    if (kind() == Kind::step) return steps().breaks();
    if (kind() == Kind::custom) return std::get<CustomFunction>(rep_).breakpoints;
    return {};
  }

  /// Points where f is not smooth (jumps and kinks); quadrature splits there.
  [[nodiscard]] std::vector<double> breakpoints() const {
    switch (kind()) {
      case Kind::step:
        return steps().breaks();
      case Kind::hat: {
        const auto& h = std::get<Hat>(rep_);
        return {h.a, h.peak, h.b};
      }
      case Kind::bump: {
        const auto& b = std::get<Bump>(rep_);
        return {b.a, b.b};
      }
      case Kind::custom:
        return std::get<CustomFunction>(rep_).breakpoints;
    }
    return {};
  }

  /// Points where Hf has a logarithmic singularity (the jumps of f).
  [[nodiscard]] std::vector<double> hilbert_log_points() const { return jump_points(); }

  /// Singularities to declare when integrating expressions in f and Hf:
  /// log at every jump (for Hf and its square), plain splits at kinks.
  [[nodiscard]] std::vector<quad::Singularity> singularities() const {
    std::vector<quad::Singularity> s;
    const auto jumps = jump_points();
    for (double x : breakpoints()) {
      const bool jump = std::find(jumps.begin(), jumps.end(), x) != jumps.end();
      s.push_back(jump ? quad::Singularity::log_at(x) : quad::Singularity::jump_at(x));
    }
    return s;
  }

  // x -> f(lambda x); defined for step functions.
  [[nodiscard]] TestFunction dilated(double lambda) const {
    if (kind() != Kind::step) throw std::invalid_argument("dilation is implemented for step functions");
    return steps().dilated(lambda);
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind()) {
      case Kind::step: {
        const auto& s = steps();
        os << "step[";
        for (std::size_t i = 0; i + 1 < s.values().size(); ++i) {
          if (i > 0) {
            os << ' ' << s.values()[i] << ' ';
          }
          os << s.breaks()[i];
        }
        os << ']';
        break;
      }
      case Kind::hat: {
        const auto& h = std::get<Hat>(rep_);
        os << "hat(" << h.a << ',' << h.peak << ',' << h.b << ';' << h.height << ')';
        break;
      }
      case Kind::bump: {
        const auto& b = std::get<Bump>(rep_);
        os << "bump(" << b.a << ',' << b.b << ';' << b.height << ')';
        break;
      }
      case Kind::custom:
        os << std::get<CustomFunction>(rep_).label;
        break;
    }
    return os.str();
  }

 private:
  std::variant<StepFunction, Hat, Bump, CustomFunction> rep_;
};

}  // namespace rellich
