// Verifies the two weighted identities for a few maps and prints the terms.

#include <cstdio>

#include "rellich/identities.hpp"

int main() {
  using namespace rellich;
  const auto f = TestFunction::indicators({{0, 1, 1}, {1, 2, -1}});
  for (const auto& m : {ConformalMap::identity(), ConformalMap::symmetric_cone_beta(0.5),
                        ConformalMap::monotone_cone_beta(0.25, 0.25)}) {
    const auto [re, im] = verify_rellich(m, f);
    std::printf("%s\n", m.describe().c_str());
    for (const auto* r : {&re, &im}) {
      // All-zero identities (Im(1/Phi') = 0) pass on the absolute floor.
      std::printf("  %-11s lhs % .15f  rhs % .15f  abs %.2e  rel %.2e  %s\n", std::string(to_string(r->id)).c_str(),
                  r->lhs, r->rhs, r->abs_residual, r->rel_residual, r->pass ? "pass" : "FAIL");
      for (const auto& t : r->terms) std::printf("      %-6s % .15f\n", t.name.c_str(), t.value);
    }
  }
}
