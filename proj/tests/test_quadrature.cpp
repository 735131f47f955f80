#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rellich/quadrature.hpp"

using namespace rellich::quad;

TEST_CASE("smooth integrands on finite and infinite domains") {
  CHECK(integrate([](double x) { return std::pow(x, 5); }, Domain::interval(0, 1), {}).value ==
        doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(integrate([](double x) { return 1 / (1 + x * x); }, Domain::real_line(), {}).value ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, Domain::right_half(0), {}).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(x); }, Domain::left_half(0), {}).value ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("declared endpoint singularities") {
  const auto lg = integrate([](double x) { return std::log(x); }, Domain::interval(0, 1), {Singularity::log_at(0)});
  CHECK(lg.value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::fabs(lg.value + 1) <= lg.error);
  const auto pw = integrate([](double x) { return 1 / std::sqrt(x); }, Domain::interval(0, 1),
                            {Singularity::power_at(0, -0.5)});
  CHECK(pw.value == doctest::Approx(2.0).epsilon(1e-11));
  // Interior log singularity: int_0^1 ln|x - 0.3| dx.
  const double exact = 0.7 * std::log(0.7) + 0.3 * std::log(0.3) - 1;
  const auto in = integrate([](double x) { return std::log(std::fabs(x - 0.3)); }, Domain::interval(0, 1),
                            {Singularity::log_at(0.3)});
  CHECK(in.value == doctest::Approx(exact).epsilon(1e-10));
  CHECK(std::fabs(in.value - exact) <= in.error);
}

TEST_CASE("jump points split the domain") {
  auto step = [](double x) { return x < 0.3 ? 1.0 : -2.0; };
  CHECK(integrate(step, Domain::interval(0, 1), {Singularity::jump_at(0.3)}).value ==
        doctest::Approx(0.3 - 1.4).epsilon(1e-14));
}

TEST_CASE("principal value against closed forms") {
  // p.v. int_0^1 dy / (pole - y) = ln|pole / (pole - 1)|.
  for (double pole : {0.25, 0.5, 0.9, 1e-6, 1 - 1e-9}) {
    const auto r = integrate_pv([](double) { return 1.0; }, pole, Domain::interval(0, 1), {});
    CHECK(r.value == doctest::Approx(std::log(pole / (1 - pole))).epsilon(1e-11));
  }
  // p.v. int dy / ((pole - y)(1 + y^2)) = pi pole / (1 + pole^2).
  for (double pole : {-3.0, 0.5, 40.0}) {
    const auto r = integrate_pv([](double y) { return 1 / (1 + y * y); }, pole, Domain::real_line(), {});
    CHECK(r.value == doctest::Approx(std::numbers::pi * pole / (1 + pole * pole)).epsilon(1e-10));
  }
}

TEST_CASE("property: additivity over a split point") {
  auto f = [](double x) { return std::cos(3 * x) * std::exp(-x * x); };
  const double whole = integrate(f, Domain::interval(-2, 3), {}).value;
  const double parts = integrate(f, Domain::interval(-2, 0.7), {}).value + integrate(f, Domain::interval(0.7, 3), {}).value;
  CHECK(whole == doctest::Approx(parts).epsilon(1e-13));
}

TEST_CASE("property: change of scale") {
  // int_0^L ln(x) dx = L ln L - L.
  for (double L : {1e-6, 1.0, 1e6}) {
    const auto r = integrate([](double x) { return std::log(x); }, Domain::interval(0, L), {Singularity::log_at(0)});
    CHECK(r.value == doctest::Approx(L * std::log(L) - L).epsilon(1e-11));
  }
}

TEST_CASE("error paths") {
  QuadratureSpec bad;
  bad.rel_tol = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS(Singularity::power_at(0, -1));
  QuadratureSpec tiny;
  tiny.max_subdivisions = 2;
  CHECK_THROWS_AS(integrate([](double x) { return std::log(std::fabs(x - 0.3)); }, Domain::interval(0, 1), {}, tiny),
                  QuadratureError);
}

TEST_CASE("tightened spec") {
  const QuadratureSpec s;
  const auto t = s.tightened(100);
  CHECK(t.rel_tol == doctest::Approx(s.rel_tol / 100));
  CHECK(t.abs_tol == doctest::Approx(s.abs_tol / 100));
  CHECK(t.max_subdivisions > s.max_subdivisions);
}
