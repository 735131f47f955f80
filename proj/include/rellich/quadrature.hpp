#pragma once

// Deterministic adaptive quadrature on intervals, half-lines and the real
// line, with declared endpoint singularities (log, |x - s|^beta, jumps).
//
// Every piece between consecutive break points is mapped to (0, 1).  Pieces
// touching a declared log/power singularity use the graded map
// x = a + (b - a) u^g, unbounded pieces use x = c / t.  Each subinterval is
// integrated with an n-point Gauss-Legendre rule on the whole interval and on
// its two halves; the difference of those two levels is the error estimate.
// Refinement always bisects the interval with the largest estimate (ties:
// leftmost), and the final sum is taken left to right in long double, so a
// fixed integrand and spec give bitwise identical results.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rellich::quad {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double tail_radius = 1e6;
  int max_subdivisions = 4000;
  double grading_exponent = 3.0;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(tail_radius > 0) ||
        max_subdivisions < 1 || !(grading_exponent >= 1))
      throw std::invalid_argument("QuadratureSpec: tolerances, tail radius and grading must be positive");
  }

  // Tolerances divided by `factor`, subdivision budget multiplied by it.
  [[nodiscard]] QuadratureSpec tightened(double factor) const {
    QuadratureSpec s = *this;
    s.rel_tol /= factor;
    s.abs_tol /= factor;
    s.max_subdivisions = static_cast<int>(std::min(1e7, max_subdivisions * std::sqrt(factor) * 2));
    return s;
  }
};

enum class SingularityKind { log, power, jump };

struct Singularity {
  double location = 0;
  SingularityKind kind = SingularityKind::jump;
  double exponent = 0;  // power kind only; integrable iff > -1

  static Singularity log_at(double x) { return {x, SingularityKind::log, 0}; }
  static Singularity jump_at(double x) { return {x, SingularityKind::jump, 0}; }
  static Singularity power_at(double x, double beta) {
    if (!(beta > -1)) throw std::invalid_argument("power singularity exponent must exceed -1");
    return {x, SingularityKind::power, beta};
  }

  [[nodiscard]] bool graded() const { return kind != SingularityKind::jump; }
};

struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Domain real_line() { return {}; }
  static Domain interval(double a, double b) { return {a, b}; }
  static Domain right_half(double a = 0) { return {a, std::numeric_limits<double>::infinity()}; }
  static Domain left_half(double b = 0) { return {-std::numeric_limits<double>::infinity(), b}; }

  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] bool interior(double x) const { return x > lo && x < hi; }
};

struct QuadResult {
  double value = 0;
  double error = 0;
  long evaluations = 0;
  int subdivisions = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  enum class Kind { tolerance_not_met, singularity_undeclared, domain };

  QuadratureError(Kind kind, const std::string& what, double best = 0, double err = 0)
      : std::runtime_error(what), kind_(kind), best_(best), error_(err) {}

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double best_value() const { return best_; }
  [[nodiscard]] double error_estimate() const { return error_; }

 private:
  Kind kind_;
  double best_;
  double error_;
};

namespace detail {

inline constexpr int kRuleOrder = 12;

struct GaussRule {
  std::array<double, kRuleOrder> nodes{};    // on (0, 1)
  std::array<double, kRuleOrder> weights{};  // sum to 1
};

inline GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int n = kRuleOrder;
  for (int i = 0; i < n; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    long double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = static_cast<double>((1 - x) / 2);
    rule.weights[i] = static_cast<double>(w / 2);
  }
  return rule;
}

inline const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

// A piece of the original domain mapped onto u in (0, 1).
struct Piece {
  enum class Map { affine, graded_left, graded_right, tail_right, tail_left };
  Map map = Map::affine;
  double a = 0, b = 0;  // finite ends, or the finite end c of a tail
  double grade = 1;

  // x(u) and dx/du.
  [[nodiscard]] std::pair<double, double> point(double u) const {
    switch (map) {
      case Map::affine:
        return {a + (b - a) * u, b - a};
      case Map::graded_left: {
        double ug = std::pow(u, grade);
        return {a + (b - a) * ug, (b - a) * grade * ug / u};
      }
      case Map::graded_right: {
        double ug = std::pow(u, grade);
        return {b - (b - a) * ug, (b - a) * grade * ug / u};
      }
      case Map::tail_right:
      case Map::tail_left: {
        // t = u^grade graded toward t = 0 (x = infinity); x = a / t.
        double t = std::pow(u, grade);
        double dt = grade * t / u;
        return {a / t, std::fabs(a) / (t * t) * dt};
      }
    }
    return {0, 0};
  }
};

struct Cell {
  double lo, hi;        // in u
  double coarse;        // rule on [lo, hi]
  double left, right;   // rule on the halves
  std::size_t piece;
  bool frozen = false;  // too narrow to bisect

  [[nodiscard]] double fine() const { return left + right; }
  [[nodiscard]] double error() const { return std::fabs(left + right - coarse); }
};

template <class F>
class Engine {
 public:
  Engine(F& fn, std::span<const Singularity> sings) : fn_(fn), sings_(sings) {}

  double rule(const Piece& piece, double lo, double hi) {
    const auto& g = gauss_rule();
    long double acc = 0;
    const double h = hi - lo;
    for (int i = 0; i < kRuleOrder; ++i) {
      const double u = lo + h * g.nodes[i];
      const auto [x, jac] = piece.point(u);
      // A graded node that rounds onto its singular end carries negligible weight.
      if (piece.map != Piece::Map::affine && (x == piece.a || x == piece.b)) continue;
      acc += static_cast<long double>(g.weights[i]) * sample(x) * jac;
    }
    evaluations_ += kRuleOrder;
    return static_cast<double>(acc * h);
  }

  [[nodiscard]] long evaluations() const { return evaluations_; }

 private:
  long double sample(double x) {
    if (!std::isfinite(x)) return 0;  // tail node beyond double range
    const double v = fn_(x);
    if (std::isfinite(v)) return v;
    for (const auto& s : sings_) {
      if (std::fabs(x - s.location) <= 1e-12 * std::max(1.0, std::fabs(s.location))) return 0;
    }
    std::ostringstream os;
    os.precision(17);
    os << "integrand not finite at undeclared point x = " << x;
    throw QuadratureError(QuadratureError::Kind::singularity_undeclared, os.str());
  }

  F& fn_;
  std::span<const Singularity> sings_;
  long evaluations_ = 0;
};

inline double grade_for(const Singularity* s, double base) {
  if (s == nullptr || !s->graded()) return 1;
  if (s->kind == SingularityKind::power) return std::clamp(2.0 / (1.0 + s->exponent), base, 40.0);
  return base;
}

inline std::vector<Piece> build_pieces(const Domain& dom, std::span<const Singularity> sings,
                                       const QuadratureSpec& spec) {
  struct Point {
    double x;
    const Singularity* sing;
  };
  std::vector<Point> pts;
  auto add = [&](double x, const Singularity* s) {
    if (!std::isfinite(x) || !dom.contains(x)) return;
    for (auto& p : pts) {
      if (p.x == x) {
        if (s != nullptr && (p.sing == nullptr || grade_for(s, spec.grading_exponent) >
                                                       grade_for(p.sing, spec.grading_exponent)))
          p.sing = s;
        return;
      }
    }
    pts.push_back({x, s});
  };
  for (const auto& s : sings) add(s.location, &s);
  for (double x : {-1.0, 0.0, 1.0}) add(x, nullptr);
  add(dom.lo, nullptr);
  add(dom.hi, nullptr);
  std::sort(pts.begin(), pts.end(), [](const Point& p, const Point& q) { return p.x < q.x; });

  const double g0 = spec.grading_exponent;
  std::vector<Piece> pieces;
  auto add_finite = [&](const Point& l, const Point& r) {
    const double gl = grade_for(l.sing, g0), gr = grade_for(r.sing, g0);
    if (gl > 1 && gr > 1) {
      const double m = 0.5 * (l.x + r.x);
      pieces.push_back({Piece::Map::graded_left, l.x, m, gl});
      pieces.push_back({Piece::Map::graded_right, m, r.x, gr});
    } else if (gl > 1) {
      pieces.push_back({Piece::Map::graded_left, l.x, r.x, gl});
    } else if (gr > 1) {
      pieces.push_back({Piece::Map::graded_right, l.x, r.x, gr});
    } else {
      pieces.push_back({Piece::Map::affine, l.x, r.x, 1});
    }
  };

  // With an infinite end, one of -1, 0, 1 or the finite end is always present,
  // and the outermost point has the sign of the tail it starts.
  if (pts.empty() || (!std::isfinite(dom.lo) && !(pts.front().x < 0)) ||
      (!std::isfinite(dom.hi) && !(pts.back().x > 0)))
    throw QuadratureError(QuadratureError::Kind::domain, "internal: cannot split integration domain");
  if (!std::isfinite(dom.lo)) {
    const Point& c = pts.front();
    if (grade_for(c.sing, g0) > 1) {
      pieces.push_back({Piece::Map::tail_left, 2 * c.x, 0, g0});
      add_finite({2 * c.x, nullptr}, c);
    } else {
      pieces.push_back({Piece::Map::tail_left, c.x, 0, g0});
    }
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) add_finite(pts[i], pts[i + 1]);
  if (!std::isfinite(dom.hi)) {
    const Point& c = pts.back();
    if (c.x <= 0) throw QuadratureError(QuadratureError::Kind::domain, "internal: right tail split");
    if (grade_for(c.sing, g0) > 1) {
      add_finite(c, {2 * c.x, nullptr});
      pieces.push_back({Piece::Map::tail_right, 2 * c.x, 0, g0});
    } else {
      pieces.push_back({Piece::Map::tail_right, c.x, 0, g0});
    }
  }
  return pieces;
}

}  // namespace detail

/// Integrate `fn` over `dom`.  Non-finite samples are tolerated only within
/// 1e-12 (relative) of a declared singularity, where the node is dropped.
template <class F>
QuadResult integrate(F&& fn, const Domain& dom, std::span<const Singularity> sings,
                     const QuadratureSpec& spec) {
  using detail::Cell;
  spec.validate();
  if (!(dom.lo < dom.hi)) {
    if (dom.lo == dom.hi) return {};
    throw QuadratureError(QuadratureError::Kind::domain, "integration domain has lo > hi");
  }
  for (const auto& s : sings) {
    if (s.kind == SingularityKind::power && !(s.exponent > -1))
      throw QuadratureError(QuadratureError::Kind::domain, "power singularity exponent must exceed -1");
  }

  const auto pieces = detail::build_pieces(dom, sings, spec);
  detail::Engine<std::remove_reference_t<F>> eng(fn, sings);

  std::vector<Cell> cells;
  cells.reserve(pieces.size() + 2 * static_cast<std::size_t>(spec.max_subdivisions));
  auto make_cell = [&](std::size_t piece, double lo, double hi, double coarse) {
    const double mid = 0.5 * (lo + hi);
    Cell c{lo, hi, coarse, eng.rule(pieces[piece], lo, mid), eng.rule(pieces[piece], mid, hi), piece};
    c.frozen = !(mid > lo && mid < hi) || (hi - lo) < 1e-15;
    return c;
  };
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    cells.push_back(make_cell(p, 0.0, 1.0, eng.rule(pieces[p], 0.0, 1.0)));
  }

  // Max-heap on (error, -position) so equal errors pick the leftmost cell.
  auto worse = [&](std::size_t i, std::size_t j) {
    const double ei = cells[i].error(), ej = cells[j].error();
    if (ei != ej) return ei < ej;
    if (cells[i].piece != cells[j].piece) return cells[i].piece > cells[j].piece;
    return cells[i].lo > cells[j].lo;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
  long double total = 0, total_err = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    total += cells[i].fine();
    total_err += cells[i].error();
    if (!cells[i].frozen) heap.push(i);
  }

  int subdivisions = 0;
  std::vector<bool> alive(cells.size(), true);
  auto tolerance = [&](long double v) {
    return std::max(spec.abs_tol, spec.rel_tol * static_cast<double>(std::fabs(v)));
  };
  while (total_err > tolerance(total) && !heap.empty() && subdivisions < spec.max_subdivisions) {
    const std::size_t i = heap.top();
    heap.pop();
    const Cell parent = cells[i];
    alive[i] = false;
    const double mid = 0.5 * (parent.lo + parent.hi);
    cells.push_back(make_cell(parent.piece, parent.lo, mid, parent.left));
    cells.push_back(make_cell(parent.piece, mid, parent.hi, parent.right));
    alive.push_back(true);
    alive.push_back(true);
    const std::size_t l = cells.size() - 2, r = cells.size() - 1;
    total += cells[l].fine() + cells[r].fine() - parent.fine();
    total_err += cells[l].error() + cells[r].error() - parent.error();
    if (!cells[l].frozen) heap.push(l);
    if (!cells[r].frozen) heap.push(r);
    ++subdivisions;
    if (subdivisions % 64 == 0) {
      // Resynchronise the running error to avoid drift.
      total_err = 0;
      for (std::size_t k = 0; k < cells.size(); ++k)
        if (alive[k]) total_err += cells[k].error();
    }
  }

  // Final ordered summation.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (alive[k]) order.push_back(k);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (cells[i].piece != cells[j].piece) return cells[i].piece < cells[j].piece;
    return cells[i].lo < cells[j].lo;
  });
  long double sum = 0, err = 0;
  for (std::size_t k : order) {
    sum += cells[k].fine();
    err += cells[k].error();
  }
  QuadResult res{static_cast<double>(sum), static_cast<double>(err), eng.evaluations(), subdivisions};
  if (!(res.error <= tolerance(sum))) {
    std::ostringstream os;
    os.precision(6);
    os << "tolerance not met: value " << res.value << ", error estimate " << res.error << " after "
       << subdivisions << " subdivisions";
    throw QuadratureError(QuadratureError::Kind::tolerance_not_met, os.str(), res.value, res.error);
  }
  return res;
}

template <class F>
QuadResult integrate(F&& fn, const Domain& dom, std::initializer_list<Singularity> sings,
                     const QuadratureSpec& spec = {}) {
  const std::vector<Singularity> v(sings);
  return integrate(std::forward<F>(fn), dom, std::span<const Singularity>(v), spec);
}

/// Principal value of  integral over `dom` of num(y) / (pole - y) dy.
///
/// The symmetric window [pole - d, pole + d] is folded onto (0, d) as
/// (num(pole - s) - num(pole + s)) / s; d is half the distance from the pole
/// to the nearest other declared singularity or finite domain end (at most
/// max(1, |pole|)).  In the band d < |y - pole| < B = max(|pole|/2, 2d) the
/// integral runs in t = y - pole, so the kernel -1/t has no cancellation;
/// beyond the band y itself is the variable.  Both regions are split at
/// pole +- d 2^k.
template <class F>
QuadResult integrate_pv(F&& num, double pole, const Domain& dom, std::span<const Singularity> sings,
                        const QuadratureSpec& spec) {
  if (!std::isfinite(pole) || !dom.interior(pole))
    throw QuadratureError(QuadratureError::Kind::domain, "principal-value pole outside the domain interior");
  double reach = std::max(1.0, std::fabs(pole));
  for (const auto& s : sings)
    if (s.location != pole) reach = std::min(reach, std::fabs(s.location - pole));
  if (std::isfinite(dom.lo)) reach = std::min(reach, pole - dom.lo);
  if (std::isfinite(dom.hi)) reach = std::min(reach, dom.hi - pole);
  const double d = 0.5 * reach;
  const double band = std::max(0.5 * std::fabs(pole), 2 * d);

  std::vector<Singularity> near, far_s;
  for (auto s : sings) {
    if (s.location == pole) continue;
    far_s.push_back(s);
    s.location -= pole;
    near.push_back(s);
  }
  auto occupied = [](const std::vector<Singularity>& v, double x, double scale) {
    for (const auto& s : v)
      if (std::fabs(s.location - x) <= 1e-3 * scale) return true;
    return false;
  };
  const double far = 4 * std::max({1.0, std::fabs(pole), std::isfinite(dom.lo) ? std::fabs(dom.lo) : 0.0,
                                   std::isfinite(dom.hi) ? std::fabs(dom.hi) : 0.0});
  const std::size_t nb = near.size(), fb = far_s.size();
  for (double r = 2 * d; r < far && near.size() + far_s.size() < nb + fb + 128; r *= 2) {
    for (double sg : {-1.0, 1.0}) {
      if (r < band) {
        if (!occupied(near, sg * r, r)) near.push_back(Singularity::jump_at(sg * r));
      } else if (r > band) {
        const double y = pole + sg * r;
        if (dom.interior(y) && !occupied(far_s, y, r)) far_s.push_back(Singularity::jump_at(y));
      }
    }
  }

  QuadResult res = integrate([&](double s) { return (num(pole - s) - num(pole + s)) / s; },
                             Domain::interval(0, d), std::span<const Singularity>{}, spec);
  auto accumulate = [&](const QuadResult& q) {
    res.value += q.value;
    res.error += q.error;
    res.evaluations += q.evaluations;
    res.subdivisions += q.subdivisions;
  };
  auto tkernel = [&](double t) { return -num(pole + t) / t; };
  auto ykernel = [&](double y) { return num(y) / (pole - y); };
  const std::span<const Singularity> ns(near), fs(far_s);
  const double tlo = std::max(dom.lo - pole, -band), thi = std::min(dom.hi - pole, band);
  if (tlo < -d) accumulate(integrate(tkernel, Domain::interval(tlo, -d), ns, spec));
  if (d < thi) accumulate(integrate(tkernel, Domain::interval(d, thi), ns, spec));
  if (dom.lo < pole - band) accumulate(integrate(ykernel, Domain::interval(dom.lo, pole - band), fs, spec));
  if (pole + band < dom.hi) accumulate(integrate(ykernel, Domain::interval(pole + band, dom.hi), fs, spec));
  return res;
}

template <class F>
QuadResult integrate_pv(F&& num, double pole, const Domain& dom, std::initializer_list<Singularity> sings,
                        const QuadratureSpec& spec = {}) {
  const std::vector<Singularity> v(sings);
  return integrate_pv(std::forward<F>(num), pole, dom, std::span<const Singularity>(v), spec);
}

}  // namespace rellich::quad
