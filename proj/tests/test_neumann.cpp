#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rellich/hilbert.hpp"
#include "rellich/neumann.hpp"

using namespace rellich;

TEST_CASE("harmonic extension against the mpmath oracle") {
  // tests/oracles/reference_values.py
  CHECK(u_f(TestFunction::indicator(-1, 1), {0.5, 2}) == doctest::Approx(-0.23572014159749299036).epsilon(1e-12));
  CHECK(u_f(TestFunction::indicator(0, 1), {0.5, 2}) == doctest::Approx(-0.10092962959198807226).epsilon(1e-12));
  CHECK_THROWS(HalfPlanePoint{0, 0});
}

TEST_CASE("gradient by convolution matches the closed form and differences") {
  const auto f = TestFunction::indicator(-1, 1);
  for (HalfPlanePoint p : {HalfPlanePoint{0.5, 2}, HalfPlanePoint{2, 0.25}, HalfPlanePoint{-0.3, 0.01}}) {
    const auto g = gradient(f, p);
    const auto c = gradient_closed(f.steps(), p);
    CHECK(g.dx == doctest::Approx(c.dx).epsilon(1e-10));
    CHECK(g.dy == doctest::Approx(c.dy).epsilon(1e-10));
  }
  const HalfPlanePoint p{0.5, 1};
  const auto fd = gradient_fd(f, p, 1e-4);
  const auto c = gradient_closed(f.steps(), p);
  CHECK(fd.dx == doctest::Approx(c.dx).epsilon(1e-7));
  CHECK(fd.dy == doctest::Approx(c.dy).epsilon(1e-7));
}

TEST_CASE("property: u_f is harmonic and its gradient satisfies Cauchy-Riemann") {
  const auto f = TestFunction::indicators({{-1, 0, 1}, {0, 2, -0.5}});
  for (HalfPlanePoint p : {HalfPlanePoint{0.5, 0.5}, HalfPlanePoint{3, 1}}) {
    const double scale = std::fabs(u_f(f, p)) + 1;
    CHECK(laplacian_residual(f, p, 1e-3) < 1e-5 * scale);
    CHECK(cauchy_riemann_residual(f, p, 1e-3) < 1e-5 * scale);
  }
}

TEST_CASE("vertical traces converge to (-Hf, -f)") {
  const auto f = TestFunction::indicator(-1, 1);
  for (double x : {0.5, 2.0}) {
    const auto t = trace_check(f, x, dyadic_heights(12));
    CHECK(t.pass);
    CHECK(t.rows.size() == 12);
    CHECK(t.rows.back().err_dx < 1e-3);
    CHECK(t.rows.back().err_dy < 1e-3);
    CHECK(t.hf == doctest::Approx(hilbert_closed(f, x)).epsilon(1e-14));
  }
  // Away from the support the Neumann trace vanishes and dx converges at second order.
  const auto t2 = trace_check(f, 2.0, dyadic_heights(12));
  REQUIRE(t2.order_dx.has_value());
  CHECK(*t2.order_dx == doctest::Approx(2).epsilon(0.05));
  CHECK_THROWS(trace_check(f, 1.0, dyadic_heights(4)));
}

TEST_CASE("boundary Rellich identity agrees with the real-line form") {
  const auto f = TestFunction::indicator(0, 1);
  for (const auto& m : {ConformalMap::identity(), ConformalMap::symmetric_cone_beta(0.5),
                        ConformalMap::monotone_cone_beta(0.25, 0.25)}) {
    const auto [re, im] = verify_rellich(m, f);
    const auto b2 = verify_boundary_rellich(m, f, RellichDirection::e2);
    const auto b1 = verify_boundary_rellich(m, f, RellichDirection::e1);
    CHECK(b1.pass);
    CHECK(b2.pass);
    CHECK(pullback_term_mismatch(b2, re, RellichDirection::e2) <= 1e-9);
    CHECK(pullback_term_mismatch(b1, im, RellichDirection::e1) <= 1e-9);
  }
  CHECK(to_string(RellichDirection::e1) == "e1");
}
