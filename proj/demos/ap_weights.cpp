// Grid estimates of [|x|^beta]_{A_2} next to the sec^2(beta pi / 2) bound.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "rellich/weights.hpp"

int main() {
  using namespace rellich;
  std::printf("%-6s %-14s %-14s\n", "beta", "grid A_2", "sec^2 bound");
  for (double beta : {-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75}) {
    const auto est = ap_constant(Weight::power(beta), 2);
    std::printf("%-6.2f %-14.10f %-14.10f\n", beta, est.value, a2_cos_bound(std::fabs(beta) * std::numbers::pi / 2));
  }
  const HSPair p(StepFunction::constant(0), StepFunction::sign(std::numbers::pi / 8));
  std::printf("e^{K f2}, f2 = (pi/8) sgn: hs bound %.12f, chain constant %.12f\n", hs_bound(p),
              a2est_chain_constant(p));
}
