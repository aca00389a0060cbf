#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bgk {

/// Outcome of one numerical property check.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Summation-by-parts identities of the circulant stencils for n_x in
/// {8, 33, 128}, 100 random vector pairs each.
CheckResult check_summation_by_parts(std::uint64_t seed);

/// Gauss-Hermite exactness up to degree 2 n_v - 1 (n_v in {4, 16, 64}) and the
/// largest node of the 500-point rule.
CheckResult check_quadrature();

/// From g = 1, sigma = 0 and a single-mode density, one advection-form step
/// equals the centered explicit transport step f - dt d_x f diag(v) and
/// increases the H-norm; the conservative form does not increase it over
/// 200 steps (n_x = 128, n_v = 32).
CheckResult check_counterexample();

/// Sustained growth of the advection-form scheme: strictly increasing
/// H-norm over 200 steps with final/initial ratio above 1.01.
CheckResult check_sustained_instability();

/// 50 random positive instances (n_x = 64, n_v = 32, sigma in {0, 1, 10}),
/// 100 steps at CFL 0.99: H-norm non-increase and exact discrete moment.
struct StabilityChecks {
  CheckResult h_norm;
  CheckResult moment;
};
StabilityChecks check_stable_scheme(std::uint64_t seed);

/// CFL inequality on 100 random f at dt = dx/max|v|, plus a positive value for
/// a Nyquist-mode witness at dt = 3 dx/max|v|.
CheckResult check_cfl_inequality(std::uint64_t seed);

/// All of the above, in order.
std::vector<CheckResult> run_check_suite(std::uint64_t seed = 2024);

}  // namespace bgk
