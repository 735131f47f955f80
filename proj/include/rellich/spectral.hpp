#pragma once

// Spectral cross-check for H: multiply the DFT of uniform samples by
// -i sgn(xi).  The window [-L, L) is periodised, so values carry an
// O(||f||_1 / L) error away from the support edges.  Link against FFTW3.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "rellich/test_function.hpp"

namespace rellich {

struct SampledFunction {
  double x0 = 0;
  double h = 1;
  std::vector<double> values;
  std::vector<std::string> warnings;

  [[nodiscard]] double x(std::size_t k) const { return x0 + h * static_cast<double>(k); }

  // Linear interpolation inside the grid.
  [[nodiscard]] double at(double x) const {
    const double s = (x - x0) / h;
    if (!(s >= 0) || s > static_cast<double>(values.size() - 1))
      throw std::out_of_range("SampledFunction::at outside the sample grid");
    const auto k = static_cast<std::size_t>(std::floor(s));
    if (k + 1 >= values.size()) return values.back();
    const double t = s - static_cast<double>(k);
    return (1 - t) * values[k] + t * values[k + 1];
  }
};

namespace detail {
// FFTW planning is not thread safe.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Discrete Hilbert transform of samples on the grid x0 + k h, k < N,
/// N a power of two.
inline SampledFunction spectral_oracle(const SampledFunction& f) {
  const std::size_t n = f.values.size();
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("spectral_oracle: grid size must be a power of two");
  const std::size_t nc = n / 2 + 1;
  std::vector<double> buf(f.values);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc)), &fftw_free);
  fftw_plan fwd = nullptr, bwd = nullptr;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.data(), spec.get(), FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.get(), buf.data(), FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  auto* c = spec.get();
  for (std::size_t k = 0; k < nc; ++k) {
    if (k == 0 || k == n / 2) {
      c[k][0] = c[k][1] = 0;
      continue;
    }
    // (re + i im) * (-i) = im - i re
    const double re = c[k][0], im = c[k][1];
    c[k][0] = im;
    c[k][1] = -re;
  }
  fftw_execute(bwd);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  SampledFunction out{f.x0, f.h, std::move(buf), f.warnings};
  for (double& v : out.values) v /= static_cast<double>(n);
  return out;
}

/// Samples f on [-L, L) with n points (jump points take the mean of the
/// one-sided values) and applies spectral_oracle.
inline SampledFunction spectral_oracle(const TestFunction& f, double L, std::size_t n) {
  if (!(L > 0)) throw std::invalid_argument("spectral_oracle: window half-width must be positive");
  SampledFunction s{-L, 2 * L / static_cast<double>(n), std::vector<double>(n), {}};
  const auto jumps = f.jump_points();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = s.x(k);
    bool at_jump = false;
    for (double j : jumps) at_jump = at_jump || std::fabs(x - j) < 1e-14 * std::max(1.0, std::fabs(j));
    s.values[k] = at_jump ? 0.5 * (f(x - 0.5 * s.h) + f(x + 0.5 * s.h)) : f(x);
  }
  const auto supp = f.support();
  const double margin = 0.1 * L;
  if (!(supp.lo > -L + margin) || !(supp.hi < L - margin))
    s.warnings.push_back("support within 10% of the window edge; periodisation error is not small");
  return spectral_oracle(s);
}

}  // namespace rellich
