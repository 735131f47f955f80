#pragma once

// Conformal maps Phi from the upper half-plane onto graph Lipschitz domains,
// with closed-form boundary data of Phi' on the real line:
//
//   identity           Phi(z) = z
//   symmetric cone     Phi(z) = e^{i(1-alpha)pi/2} z^alpha,  alpha in (0, 2)
//   monotone cone      Phi(z) = e^{i theta pi} z^alpha,      alpha in (1/2, 1), theta in [1-alpha, 1/2]
//   Helson-Szego       Phi'(x) = e^{K f2(x)} e^{-i f2(x)},   f2 a step function, ||f2|| < pi/2
//
// Powers use the branch cut {iy : y <= 0}.  For the cones beta = 1 - alpha.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rellich/hilbert.hpp"
#include "rellich/quadrature.hpp"
#include "rellich/test_function.hpp"

namespace rellich {

using Complex = std::complex<double>;

namespace detail {

// sin(pi t) and cos(pi t), exact at multiples of 1/2.
inline double sin_pi(double t) {
  double r = std::fmod(t, 2.0);
  if (r < 0) r += 2;
  if (r == 0 || r == 1) return 0;
  if (r == 0.5) return 1;
  if (r == 1.5) return -1;
  return std::sin(std::numbers::pi * r);
}
inline double cos_pi(double t) { return sin_pi(t + 0.5); }

// tan(pi t), exact at multiples of 1/4.
inline double tan_pi(double t) {
  double r = std::fmod(t, 1.0);
  if (r < 0) r += 1;
  if (r == 0) return 0;
  if (r == 0.25) return 1;
  if (r == 0.75) return -1;
  if (r == 0.5) return std::numeric_limits<double>::infinity();
  return sin_pi(r) / cos_pi(r);
}

// Argument with the branch cut along the negative imaginary axis: (-pi/2, 3pi/2].
inline double arg_cut_down(Complex z) {
  double a = std::atan2(z.imag(), z.real());
  if (z.imag() == 0 && z.real() < 0) return std::numbers::pi;
  if (a <= -std::numbers::pi / 2) a += 2 * std::numbers::pi;
  return a;
}

inline Complex pow_cut_down(Complex z, double alpha) {
  if (z == Complex(0, 0)) return {0, 0};
  const double r = std::abs(z), a = arg_cut_down(z);
  return std::polar(std::pow(r, alpha), alpha * a);
}

}  // namespace detail

struct BoundaryData {
  double re_inv = 0;  // Re(1/Phi')
  double im_inv = 0;  // Im(1/Phi')
  double mod = 0;     // |Phi'|
  double arg = 0;     // Arg Phi' in (-pi, pi]
  double tau = 0;     // tan ||Arg Phi'||_inf, a property of the map
};

class MapError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConformalMap {
 public:
  enum class Family { identity, symmetric_cone, monotone_cone, helson_szego };
  enum class KMode { numerical, closed_form };

  static ConformalMap identity() { return ConformalMap(Family::identity); }

  static ConformalMap symmetric_cone(double alpha) {
    if (!(alpha > 0 && alpha < 2)) throw MapError("symmetric cone needs alpha in (0, 2)");
    ConformalMap m(Family::symmetric_cone);
    m.alpha_ = alpha;
    m.rotation_ = (1 - alpha) / 2;
    return m;
  }
  static ConformalMap symmetric_cone_beta(double beta) { return symmetric_cone(1 - beta); }

  static ConformalMap monotone_cone(double alpha, double theta) {
    if (!(alpha > 0.5 && alpha < 1)) throw MapError("monotone cone needs alpha in (1/2, 1)");
    if (!(theta >= 1 - alpha && theta <= 0.5)) throw MapError("monotone cone needs theta in [1 - alpha, 1/2]");
    ConformalMap m(Family::monotone_cone);
    m.alpha_ = alpha;
    m.rotation_ = theta;
    return m;
  }
  static ConformalMap monotone_cone_beta(double beta, double theta) {
    if (!(beta > 0 && beta < 0.5)) throw MapError("monotone cone needs beta in (0, 1/2)");
    if (!(theta >= beta && theta <= 0.5)) throw MapError("monotone cone needs theta in [beta, 1/2]");
    ConformalMap m(Family::monotone_cone);
    m.alpha_ = 1 - beta;
    m.rotation_ = theta;
    return m;
  }

  static ConformalMap helson_szego(StepFunction f2, KMode mode = KMode::numerical,
                                   quad::QuadratureSpec spec = {}) {
    if (!(f2.sup_norm() < std::numbers::pi / 2)) throw MapError("Helson-Szego map needs ||f2||_inf < pi/2");
    ConformalMap m(Family::helson_szego);
    m.f2_ = f2.simplified();
    m.kmode_ = mode;
    m.spec_ = spec;
    return m;
  }

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double beta() const { return 1 - alpha_; }
  // Rotation of the cone in units of pi: (1 - alpha)/2 or theta.
  [[nodiscard]] double theta() const { return rotation_; }
  [[nodiscard]] const StepFunction& f2() const { return f2_; }
  [[nodiscard]] KMode k_mode() const { return kmode_; }
  [[nodiscard]] const quad::QuadratureSpec& k_spec() const { return spec_; }
  [[nodiscard]] bool is_cone() const { return family_ == Family::symmetric_cone || family_ == Family::monotone_cone; }

  // ||Arg Phi'||_inf in units of pi, from the parameters.
  [[nodiscard]] double arg_sup_pi() const {
    switch (family_) {
      case Family::identity:
        return 0;
      case Family::symmetric_cone:
        return std::fabs(beta()) / 2;
      case Family::monotone_cone:
        return std::max(rotation_, std::fabs(rotation_ - beta()));
      case Family::helson_szego:
        return f2_.sup_norm() / std::numbers::pi;
    }
    return 0;
  }
  [[nodiscard]] double arg_sup() const { return arg_sup_pi() * std::numbers::pi; }

  [[nodiscard]] double tau() const {
    if (family_ == Family::helson_szego) return std::tan(f2_.sup_norm());
    const double t = arg_sup_pi();
    if (t >= 0.5) return std::numeric_limits<double>::infinity();
    return detail::tan_pi(t);
  }
  // The boundary slope is tan(Arg Phi'), so the Lipschitz constant is tau.
  [[nodiscard]] double lipschitz_constant() const { return tau(); }

  // Im(Phi') of one sign almost everywhere.
  [[nodiscard]] bool monotone() const {
    switch (family_) {
      case Family::identity:
        return true;
      case Family::symmetric_cone:
        return alpha_ == 1;
      case Family::monotone_cone:
        return true;
      case Family::helson_szego: {
        bool pos = true, neg = true;
        for (double v : f2_.values()) {
          pos = pos && v >= 0;
          neg = neg && v <= 0;
        }
        return pos || neg;
      }
    }
    return false;
  }

  // a1(s), a2(s) of the monotone cone: Re(1/Phi') = a1 |x|^beta / (1 - beta),
  // Im(1/Phi') = -a2 |x|^beta / (1 - beta) with s = sgn x.
  [[nodiscard]] double a1(double s) const {
    return detail::cos_pi(rotation_) * (1 + s) / 2 + detail::cos_pi(rotation_ - beta()) * (1 - s) / 2;
  }
  [[nodiscard]] double a2(double s) const {
    return detail::sin_pi(rotation_) * (1 + s) / 2 + detail::sin_pi(rotation_ - beta()) * (1 - s) / 2;
  }

  [[nodiscard]] double k_of_f2(double x) const {
    if (kmode_ == KMode::closed_form) return k_closed(f2_, x);
    return k_transform(BoundedFunction(f2_), x, spec_).value;
  }

  [[nodiscard]] BoundaryData boundary_data(double x) const {
    BoundaryData d;
    d.tau = tau();
    switch (family_) {
      case Family::identity:
        d.re_inv = 1;
        d.im_inv = 0;
        d.mod = 1;
        d.arg = 0;
        return d;
      case Family::symmetric_cone: {
        if (x == 0) throw MapError("cone boundary data is singular at x = 0");
        const double a = alpha_, ax = std::fabs(x), s = sgn(x);
        const double p = std::pow(ax, 1 - a);
        d.re_inv = detail::sin_pi(a / 2) / a * p;
        d.im_inv = -detail::cos_pi(a / 2) / a * s * p;
        d.mod = a * std::pow(ax, a - 1);
        d.arg = (1 - a) * std::numbers::pi / 2 * s;
        return d;
      }
      case Family::monotone_cone: {
        if (x == 0) throw MapError("cone boundary data is singular at x = 0");
        const double b = beta(), ax = std::fabs(x), s = sgn(x);
        const double p = std::pow(ax, b) / (1 - b);
        d.re_inv = a1(s) * p;
        d.im_inv = -a2(s) * p;
        d.mod = (1 - b) * std::pow(ax, -b);
        d.arg = (s > 0 ? rotation_ : rotation_ - b) * std::numbers::pi;
        return d;
      }
      case Family::helson_szego: {
        const double k = k_of_f2(x), f = f2_(x);
        const double e = std::exp(-k);
        d.re_inv = e * std::cos(f);
        d.im_inv = e * std::sin(f);
        d.mod = std::exp(k);
        d.arg = -f;
        return d;
      }
    }
    return d;
  }

  /// Phi'(x) on the real line.
  [[nodiscard]] Complex boundary_derivative(double x) const {
    switch (family_) {
      case Family::identity:
        return {1, 0};
      case Family::symmetric_cone:
      case Family::monotone_cone: {
        const auto d = boundary_data(x);
        return std::polar(d.mod, d.arg);
      }
      case Family::helson_szego:
        return std::exp(Complex(k_of_f2(x), -f2_(x)));
    }
    return {};
  }

  // Analytic G with boundary values f2 + i K f2; Phi' = exp(-i G).
  [[nodiscard]] Complex hs_g(Complex z) const {
    const auto& b = f2_.breaks();
    const auto& v = f2_.values();
    const Complex i(0, 1);
    auto end = [z](double t) { return std::log(z - t) - detail::compensator(t); };
    Complex acc = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0) continue;
      const Complex left = k > 0 ? end(b[k - 1]) : Complex(0, 0);
      const Complex right = k < b.size() ? end(b[k]) : Complex(0, std::numbers::pi);
      acc += v[k] * (left - right);
    }
    return i * acc / std::numbers::pi;
  }

  /// Phi'(z) for Im z > 0.
  [[nodiscard]] Complex derivative(Complex z) const {
    switch (family_) {
      case Family::identity:
        return {1, 0};
      case Family::symmetric_cone:
      case Family::monotone_cone:
        return alpha_ * std::polar(1.0, rotation_ * std::numbers::pi) * detail::pow_cut_down(z, alpha_ - 1);
      case Family::helson_szego:
        return std::exp(Complex(0, -1) * hs_g(z));
    }
    return {};
  }

  /// Phi(z) for z in the closed upper half-plane.  The Helson-Szego map is
  /// normalised by Phi(i) = i and integrates Phi' along the segment from i.
  [[nodiscard]] Complex forward(Complex z) const {
    if (z.imag() < 0) throw MapError("map_forward needs Im z >= 0");
    switch (family_) {
      case Family::identity:
        return z;
      case Family::symmetric_cone:
      case Family::monotone_cone:
        return std::polar(1.0, rotation_ * std::numbers::pi) * detail::pow_cut_down(z, alpha_);
      case Family::helson_szego:
        return hs_forward(z);
    }
    return z;
  }

  /// Psi(w) = Phi^{-1}(w) for w in the closure of the image domain.
  [[nodiscard]] Complex inverse(Complex w) const {
    switch (family_) {
      case Family::identity:
        if (w.imag() < -1e-12 * std::max(1.0, std::abs(w))) throw MapError("map_inverse: point below the real line");
        return w;
      case Family::symmetric_cone:
      case Family::monotone_cone: {
        if (w == Complex(0, 0)) return {0, 0};
        const double phase = cone_phase(w);
        if (!(phase >= -1e-12 && phase <= alpha_ * std::numbers::pi + 1e-12))
          throw MapError("map_inverse: point outside the cone");
        const double ph = std::clamp(phase, 0.0, alpha_ * std::numbers::pi);
        return std::polar(std::pow(std::abs(w), 1 / alpha_), ph / alpha_);
      }
      case Family::helson_szego:
        return hs_inverse(w);
    }
    return w;
  }

  /// Whether w lies in the closure of the image domain, up to `tol`.
  [[nodiscard]] bool contains(Complex w, double tol = 1e-13) const {
    switch (family_) {
      case Family::identity:
        return w.imag() >= -tol;
      case Family::symmetric_cone:
      case Family::monotone_cone: {
        if (std::abs(w) <= tol) return true;
        const double phase = cone_phase(w);
        const double slack = tol / std::abs(w);
        return phase >= -slack && phase <= alpha_ * std::numbers::pi + slack;
      }
      case Family::helson_szego:
        return w.imag() >= hs_boundary_height(w.real()) - tol;
    }
    return false;
  }

  /// Boundary points where the data of Phi' is singular, for quadrature.
  [[nodiscard]] std::vector<quad::Singularity> singularities() const {
    std::vector<quad::Singularity> s;
    if (is_cone() && beta() != 0) s.push_back(quad::Singularity::power_at(0, -std::fabs(beta())));
    if (family_ == Family::helson_szego) {
      const auto& b = f2_.breaks();
      const auto& v = f2_.values();
      for (std::size_t k = 0; k < b.size(); ++k) {
        const double jump = std::fabs(v[k + 1] - v[k]) / std::numbers::pi;
        s.push_back(quad::Singularity::power_at(b[k], -std::min(jump, 0.99)));
      }
    }
    return s;
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
      case Family::identity:
        os << "identity";
        break;
      case Family::symmetric_cone:
        os << "symmetric_cone(beta=" << beta() << ")";
        break;
      case Family::monotone_cone:
        os << "monotone_cone(beta=" << beta() << ",theta=" << rotation_ << ")";
        break;
      case Family::helson_szego:
        os << "helson_szego(f2=" << f2_.values().front();
        for (std::size_t k = 0; k < f2_.breaks().size(); ++k) os << '|' << f2_.breaks()[k] << '|' << f2_.values()[k + 1];
        os << ")";
        break;
    }
    return os.str();
  }

 private:
  explicit ConformalMap(Family f) : family_(f) {}

  // Angle of w measured from the lower edge of the cone, in [0, 2 pi).
  [[nodiscard]] double cone_phase(Complex w) const {
    double ph = std::atan2(w.imag(), w.real()) - rotation_ * std::numbers::pi;
    const double two_pi = 2 * std::numbers::pi;
    while (ph < -1e-12) ph += two_pi;
    while (ph >= two_pi - 1e-12) ph -= two_pi;
    return ph;
  }

  [[nodiscard]] Complex hs_forward(Complex z) const {
    const Complex base(0, 1);
    const Complex dz = z - base;
    if (std::abs(dz) == 0) return base;
    quad::QuadratureSpec s = spec_;
    s.rel_tol = std::min(s.rel_tol, 1e-13);
    s.abs_tol = std::min(s.abs_tol, 1e-15);
    std::vector<quad::Singularity> sing;
    if (z.imag() == 0) sing.push_back(quad::Singularity::log_at(1));
    auto comp = [&](double t, int part) {
      const Complex v = derivative(base + t * dz) * dz;
      return part == 0 ? v.real() : v.imag();
    };
    const auto dom = quad::Domain::interval(0, 1);
    const auto re = quad::integrate([&](double t) { return comp(t, 0); }, dom, std::span<const quad::Singularity>(sing), s);
    const auto im = quad::integrate([&](double t) { return comp(t, 1); }, dom, std::span<const quad::Singularity>(sing), s);
    return base + Complex(re.value, im.value);
  }

  [[nodiscard]] Complex hs_inverse(Complex w) const {
    Complex z = Complex(0, 1) + (w - Complex(0, 1)) / derivative(Complex(0, 1));
    if (z.imag() < 0) z.imag(0.5);
    const double scale = std::max(1.0, std::abs(w));
    Complex best = z;
    double best_r = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 80; ++it) {
      const double r = std::abs(forward(z) - w);
      if (r < best_r) {
        best_r = r;
        best = z;
      } else if (best_r <= 1e-12 * scale) {
        break;  // stagnated at quadrature noise
      }
      if (best_r <= 1e-15 * scale) break;
      const Complex dphi = z.imag() > 0 ? derivative(z) : derivative(Complex(z.real(), 1e-300));
      Complex next = z - (forward(z) - w) / dphi;
      // Stay in the closed upper half-plane; halve toward the real line.
      if (next.imag() < 0) next.imag(z.imag() > 1e-13 ? 0.5 * z.imag() : 0.0);
      z = next;
    }
    if (best_r <= 1e-12 * scale) return best;
    std::ostringstream os;
    os << "map_inverse: Newton iteration did not converge, residual " << best_r;
    throw MapError(os.str());
  }

  // gamma(t): height of the boundary curve above Re w = t.
  [[nodiscard]] double hs_boundary_height(double t) const {
    // Re Phi(x) is strictly increasing; bracket then bisect/secant.
    double lo = -1, hi = 1;
    auto re_at = [&](double x) { return forward(Complex(x, 0)).real(); };
    while (re_at(lo) > t) lo *= 2;
    while (re_at(hi) < t) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (re_at(mid) < t ? lo : hi) = mid;
    }
    return forward(Complex(0.5 * (lo + hi), 0)).imag();
  }

  Family family_;
  double alpha_ = 1;
  double rotation_ = 0;
  StepFunction f2_;
  KMode kmode_ = KMode::numerical;
  quad::QuadratureSpec spec_{};
};

struct PsiDerivativeCheck {
  double d1_residual = 0;  // |d1 Psi1(Phi(x)) - Re(1/Phi'(x))|
  double d2_residual = 0;  // |d2 Psi1(Phi(x)) + Im(1/Phi'(x))|
  bool one_sided = false;  // a stencil left the domain closure
};

/// Finite-difference check of d1 Psi1 = Re(1/Phi'), d2 Psi1 = -Im(1/Phi') on the boundary.
inline PsiDerivativeCheck psi_derivative_check(const ConformalMap& map, double x, double h) {
  const Complex w = map.forward(Complex(x, 0));
  const auto bd = map.boundary_data(x);
  PsiDerivativeCheck out;
  auto psi1 = [&](Complex p) { return map.inverse(p).real(); };
  auto partial = [&](Complex e) {
    const double scale = std::max(1.0, std::abs(w));
    if (map.contains(w + h * e, 1e-15 * scale) && map.contains(w - h * e, 1e-15 * scale))
      return (psi1(w + h * e) - psi1(w - h * e)) / (2 * h);
    out.one_sided = true;
    const double dir = map.contains(w + h * e, 1e-15 * scale) && map.contains(w + 2 * h * e, 1e-15 * scale) ? 1.0 : -1.0;
    const Complex s = dir * h * e;
    return dir * (-3 * psi1(w) + 4 * psi1(w + s) - psi1(w + 2.0 * s)) / (2 * h);
  };
  out.d1_residual = std::fabs(partial(Complex(1, 0)) - bd.re_inv);
  out.d2_residual = std::fabs(partial(Complex(0, 1)) + bd.im_inv);
  return out;
}

}  // namespace rellich
