// Harmonic extension of chi_(-1,1): the gradient approaches (-Hf, -f) as y -> 0.

#include <cstdio>

#include "rellich/neumann.hpp"

int main() {
  using namespace rellich;
  const auto f = TestFunction::indicator(-1, 1);
  for (double x : {0.5, 2.0}) {
    const auto t = trace_check(f, x, dyadic_heights(12));
    std::printf("x = %g: Hf = %.15f, f = %g\n", x, t.hf, t.f);
    std::printf("  %-12s %-12s %-12s\n", "y", "|dx + Hf|", "|dy + f|");
    for (const auto& r : t.rows) std::printf("  %-12.6g %-12.3e %-12.3e\n", r.y, r.err_dx, r.err_dy);
    std::printf("  %s\n", t.pass ? "converges" : "does not converge");
  }
  std::printf("Laplacian residual at (0.5, 0.5): %.2e\n", laplacian_residual(f, {0.5, 0.5}, 1e-3));
}
