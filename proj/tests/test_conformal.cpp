#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rellich/conformal.hpp"

using namespace rellich;
using Complex = std::complex<double>;

namespace {

std::vector<ConformalMap> maps() {
  return {ConformalMap::identity(),
          ConformalMap::symmetric_cone_beta(-0.5),
          ConformalMap::symmetric_cone_beta(0.5),
          ConformalMap::monotone_cone_beta(0.25, 0.25),
          ConformalMap::monotone_cone_beta(0.25, 0.5),
          ConformalMap::helson_szego(StepFunction::sign(std::numbers::pi / 8), ConformalMap::KMode::closed_form)};
}

}  // namespace

TEST_CASE("boundary data is consistent with Phi'") {
  for (const auto& m : maps())
    for (double x : {-3.0, -0.4, 0.7, 2.5}) {
      const auto d = m.boundary_data(x);
      const Complex dp = m.boundary_derivative(x);
      const Complex inv = 1.0 / dp;
      CHECK(d.re_inv == doctest::Approx(inv.real()).epsilon(1e-13));
      CHECK(d.im_inv == doctest::Approx(inv.imag()).epsilon(1e-13));
      CHECK(d.mod == doctest::Approx(std::abs(dp)).epsilon(1e-13));
      CHECK(std::fabs(d.arg) <= m.arg_sup() + 1e-14);
    }
}

TEST_CASE("interior derivative matches a difference quotient of the forward map") {
  for (const auto& m : maps())
    for (Complex z : {Complex(0.3, 0.8), Complex(-1.5, 0.2), Complex(2, 3)}) {
      const double h = 1e-5;
      const Complex fd = (m.forward(z + h) - m.forward(z - h)) / (2 * h);
      CHECK(std::abs(fd - m.derivative(z)) <= 1e-7 * std::abs(m.derivative(z)));
    }
}

TEST_CASE("inverse undoes the forward map") {
  for (const auto& m : maps())
    for (Complex z : {Complex(0.3, 0.8), Complex(-1.5, 0.2), Complex(2, 0), Complex(-0.5, 0)}) {
      const Complex w = m.forward(z);
      CHECK(m.contains(w));
      CHECK(std::abs(m.inverse(w) - z) <= 1e-9 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("cone parameters: tau, monotonicity, exponents") {
  CHECK(ConformalMap::identity().tau() == 0);
  CHECK(ConformalMap::symmetric_cone_beta(0.5).tau() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ConformalMap::monotone_cone_beta(0.25, 0.25).tau() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(ConformalMap::monotone_cone_beta(0.25, 0.5).tau()));
  CHECK(ConformalMap::monotone_cone_beta(0.25, 0.3).monotone());
  CHECK_FALSE(ConformalMap::symmetric_cone_beta(0.5).monotone());
  CHECK(ConformalMap::identity().monotone());
  // Re(1/Phi') of a symmetric cone is |x|^beta sin(alpha pi / 2) / alpha.
  const auto m = ConformalMap::symmetric_cone_beta(0.5);
  CHECK(m.boundary_data(4).re_inv == doctest::Approx(2 * std::sin(std::numbers::pi / 4) / 0.5).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ConformalMap::symmetric_cone(2.0), MapError);
  CHECK_THROWS_AS(ConformalMap::monotone_cone_beta(0.5, 0.5), MapError);
  CHECK_THROWS_AS(ConformalMap::monotone_cone_beta(0.25, 0.1), MapError);
  CHECK_THROWS_AS(ConformalMap::helson_szego(StepFunction::sign(2.0)), MapError);
  CHECK_THROWS_AS((void)ConformalMap::symmetric_cone_beta(0.5).boundary_data(0), MapError);
  CHECK_THROWS_AS((void)ConformalMap::identity().forward(Complex(0, -1)), MapError);
}

TEST_CASE("Helson-Szego map with a sign datum is a dilated cone") {
  const double beta = 0.25;
  const auto hs = ConformalMap::helson_szego(StepFunction::sign(beta * std::numbers::pi / 2),
                                             ConformalMap::KMode::closed_form);
  const auto cone = ConformalMap::symmetric_cone_beta(-beta);
  const double ratio = hs.boundary_data(1.0).mod / cone.boundary_data(1.0).mod;
  for (double x : {-5.0, -0.3, 0.2, 7.0}) {
    CHECK(hs.boundary_data(x).mod / cone.boundary_data(x).mod == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(hs.boundary_data(x).arg == doctest::Approx(cone.boundary_data(x).arg).epsilon(1e-14));
  }
  CHECK(std::abs(hs.forward(Complex(0, 1)) - Complex(0, 1)) < 1e-12);
}

TEST_CASE("Helson-Szego numerical K agrees with closed-form K") {
  const auto f2 = StepFunction::from_indicators({{-1, 0.5, 0.3}, {0.5, 2, -0.2}});
  const auto num = ConformalMap::helson_szego(f2, ConformalMap::KMode::numerical);
  const auto cls = ConformalMap::helson_szego(f2, ConformalMap::KMode::closed_form);
  for (double x : {-3.0, 0.1, 1.0, 10.0}) {
    CHECK(num.boundary_data(x).re_inv == doctest::Approx(cls.boundary_data(x).re_inv).epsilon(1e-8));
    CHECK(num.boundary_data(x).im_inv == doctest::Approx(cls.boundary_data(x).im_inv).epsilon(1e-8));
  }
}

TEST_CASE("inverse-map derivatives on the boundary") {
  for (const auto& m : maps()) {
    if (!m.is_cone()) continue;
    for (double x : {-2.0, -0.5, 0.5, 2.0}) {
      const auto c = psi_derivative_check(m, x, 1e-5);
      CHECK(c.d1_residual < 1e-8);
      CHECK(c.d2_residual < 1e-8);
    }
  }
}
