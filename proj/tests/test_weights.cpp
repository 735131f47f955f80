#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rellich/weights.hpp"

using namespace rellich;

TEST_CASE("phi closed forms") {
  using std::numbers::sqrt2;
  CHECK(phi(0) == 1);
  CHECK(phi(0.5) == doctest::Approx(2 + std::numbers::sqrt3).epsilon(1e-15));
  CHECK(phi(sqrt2) == doctest::Approx(1 + 2 * sqrt2 + 2 * std::sqrt(2 + sqrt2)).epsilon(1e-15));
  CHECK(monotone_constant() == doctest::Approx(10.6404654218786).epsilon(1e-13));
  CHECK_THROWS(phi(-1));
}

TEST_CASE("property: phi is the infimum of its objective") {
  for (double s : {0.01, 0.5, 1.0, 3.0, 50.0}) {
    const double e = phi_minimizer(s);
    CHECK(phi_objective(e, s) == doctest::Approx(phi(s)).epsilon(1e-13));
    CHECK(phi_grid_inf(s) >= phi(s) * (1 - 1e-15));
    CHECK(phi_objective(e * 0.9, s) > phi(s));
    CHECK(phi_objective(e + (1 - e) * 0.1, s) > phi(s));
  }
  // Increasing in s.
  CHECK(phi(0.5) < phi(1.0));
}

TEST_CASE("phi grid infimum") {
  for (double s : {0.5, 1.0, std::numbers::sqrt2, 2.0}) CHECK(std::fabs(phi_grid_inf(s) - phi(s)) <= 1e-6);
  // At s = 0 the grid stops 1e-4 short of the infimum.
  CHECK(phi_grid_inf(0) == doctest::Approx(1 / (1 - 1e-4)).epsilon(1e-15));
}

TEST_CASE("A_2 of |x|^(1/2)") {
  // Symmetric interval (-1, 1): avg w * avg 1/w = (2/3)(2) = 4/3.
  const auto w = Weight::power(0.5);
  const quad::QuadratureSpec spec{};
  CHECK(ap_functional(w, w.powered(-1), 2, {-1, 1}, spec) == doctest::Approx(4.0 / 3).epsilon(1e-10));
  const auto est = ap_constant(w, 2);
  CHECK(est.value == doctest::Approx(1.41068360253383).epsilon(1e-12));  // frozen grid maximum
  CHECK(est.value >= 1);
  CHECK(est.value <= a2_cos_bound(0.5 * std::numbers::pi / 2));
  CHECK(est.lower_bound);
}

TEST_CASE("property: A_p constants of trivial and dilated weights") {
  CHECK(ap_constant(Weight::constant(3), 2).value == doctest::Approx(1.0).epsilon(1e-12));
  // Power weights are dilation invariant, so the grid maximum does not depend on the grid offset.
  ApGrid a, b;
  a.j_min = b.j_min = -5;
  a.j_max = b.j_max = 5;
  a.k_min = -6, a.k_max = 6;
  b.k_min = -5, b.k_max = 7;
  const auto w = Weight::power(-0.4);
  CHECK(ap_constant(w, 3, a).value >= 1);
  CHECK(std::fabs(ap_constant(w, 3, a).value - ap_constant(w, 3, b).value) < 1e-9);
  CHECK_THROWS(ap_constant(w, 1.0));
}

TEST_CASE("Helson-Szego constants") {
  const HSPair p(StepFunction::constant(0), StepFunction::sign(std::numbers::pi / 8));
  CHECK(p.osc_f1 == 0);
  CHECK(hs_bound(p) == doctest::Approx(1 / std::cos(std::numbers::pi / 8)).epsilon(1e-15));
  CHECK(a2_cos_bound(std::numbers::pi / 8) == doctest::Approx(4 - 2 * std::numbers::sqrt2).epsilon(1e-14));
  const double t = std::tan(std::numbers::pi / 8);
  CHECK(a2est_chain_constant(p) == doctest::Approx((2 + std::sqrt(3.0)) * phi(t * t)).epsilon(1e-15));
  const HSPair q(StepFunction::indicator(0, 1, 2), StepFunction::sign(0.1));
  CHECK(hs_bound(q) == doctest::Approx(std::exp(1.0) / std::cos(0.1)).epsilon(1e-15));
  CHECK_THROWS(HSPair(StepFunction::constant(0), StepFunction::sign(2)));
}

TEST_CASE("weights from maps") {
  const auto m = ConformalMap::symmetric_cone_beta(0.5);
  const auto w = Weight::from_map(m, -1);
  CHECK(w(4) == doctest::Approx(1 / m.boundary_data(4).mod).epsilon(1e-15));
  const auto hs = Weight::hs(StepFunction::constant(0), StepFunction::sign(0.3));
  CHECK(hs(2) == doctest::Approx(std::exp(k_closed(StepFunction::sign(0.3), 2))).epsilon(1e-15));
}

TEST_CASE("norm lower bound against the digamma series") {
  // I = 1/a^2 - (digamma(1 + a) + euler) / a, a = 1 + beta (tests/oracles/reference_values.py).
  const std::tuple<double, double, double> ref[] = {
      {-0.99, 9998.3669792967141637, 4052.8522229495765296},
      {-0.9, 98.465392755095439346, 40.577761422390451767},
      {-0.5, 2.7725887222397812377, 1.8825424006106063736},
      {0.5, -0.40913709258673958744, 1.3906971441245563126}};
  for (auto [beta, I, L] : ref) {
    const auto n = norm_lower_bound(beta);
    CHECK(n.integral == doctest::Approx(I).epsilon(1e-10));
    CHECK(n.value == doctest::Approx(L).epsilon(1e-10));
  }
  CHECK(std::fabs(norm_lower_bound(0).integral) < 1e-10);
  CHECK(norm_lower_bound(0).value == 1);
  CHECK_FALSE(norm_lower_bound(-0.99).warnings.empty());
  // L grows like (1 + beta)^-2 toward -1.
  const double r = norm_lower_bound(-0.99).value / norm_lower_bound(-0.9).value;
  CHECK(r >= 25);
  CHECK(r <= 400);
}
