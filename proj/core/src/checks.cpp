#include "bgk/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "bgk/diagnostics.hpp"
#include "bgk/full_solver.hpp"
#include "bgk/random_state.hpp"

namespace bgk {

namespace {

template <class Fn>
CheckResult timed(const std::string& name, Fn&& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r{name, false, {}, 0.0};
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

CheckResult check_summation_by_parts(std::uint64_t seed) {
  return timed("summation by parts", [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int n : {8, 33, 128}) {
      const StencilSet st = build_stencils(SpatialGrid::uniform(-1.0, 1.0, n));
      for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd y = random_vector(n, rng);
        const Eigen::VectorXd z = random_vector(n, rng);
        const Eigen::VectorXd dz = st.d_x * z, dy = st.d_x * y;
        const Eigen::VectorXd ddz = st.d_xx * z, ddy = st.d_xx * y;
        const Eigen::VectorXd pz = st.d_plus * z;
        const double e1 = std::abs(y.dot(dz) + z.dot(dy)) / (y.norm() * dz.norm() + z.norm() * dy.norm());
        const double e2 = std::abs(z.dot(dz)) / (z.norm() * dz.norm());
        const double e3 = std::abs(y.dot(ddz) - z.dot(ddy)) / (y.norm() * ddz.norm() + z.norm() * ddy.norm());
        const double e4 = std::abs(z.dot(ddz) + pz.squaredNorm()) / pz.squaredNorm();
        worst = std::max({worst, e1, e2, e3, e4});
      }
    }
    r.passed = worst <= 1e-12;
    r.detail = fmt("max relative defect %.3g over 300 pairs x 4 identities", worst);
  });
}

CheckResult check_quadrature() {
  return timed("gauss-hermite quadrature", [&](CheckResult& r) {
    double worst = 0.0;
    for (int n : {4, 16, 64}) {
      const HermiteRule rule = hermite_rule(n);
      const Eigen::VectorXd w = rule.log_weights.array().exp().matrix();
      for (int p = 0; p <= 2 * n - 1; ++p) {
        double sum = 0.0, abs_sum = 0.0;
        for (int k = 0; k < n; ++k) {
          const double term = w(k) * std::pow(rule.nodes(k), p);
          sum += term;
          abs_sum += std::abs(term);
        }
        // int v^p e^{-v^2} dv = Gamma((p+1)/2) for even p, 0 for odd p.
        const double exact = p % 2 == 0 ? std::exp(std::lgamma(0.5 * (p + 1))) : 0.0;
        const double err = p % 2 == 0 ? std::abs(sum - exact) / exact : std::abs(sum) / abs_sum;
        worst = std::max(worst, err);
      }
    }
    const double v_max = hermite_rule(500).nodes.cwiseAbs().maxCoeff();
    r.passed = worst <= 1e-10 && v_max > 31.0 && v_max < 31.1;
    r.detail = fmt("max relative moment error %.3g; n_v=500 max|v| = %.6f", worst, v_max);
  });
}

CheckResult check_counterexample() {
  return timed("advection-form counterexample", [&](CheckResult& r) {
    const int n_x = 128;
    const SpatialGrid grid = SpatialGrid::uniform(-1.0, 1.0, n_x);
    const PhaseSpace ps = make_phase_space_1d(grid, gauss_hermite_rule(32));
    const double dt = cfl_timestep(grid.dx, ps.velocity.v_cap, 0.99);
    FullState s;
    s.rho = (1.0 + 0.1 * (M_PI * (n_x / 4) * grid.points.array()).cos()).matrix();
    s.g = Eigen::MatrixXd::Ones(n_x, ps.n_velocity());
    const Eigen::MatrixXd f0 = reconstruct_f(s.rho, s.g, ps.velocity);
    const FullState next = full_step(ps, s, SchemeVariant::NaiveAdvection, 0.0, dt);
    const Eigen::MatrixXd f1 = reconstruct_f(next.rho, next.g, ps.velocity);
    const Eigen::MatrixXd ftcs =
        f0 - dt * (ps.axes[0].d_x * f0) * ps.axes[0].v.asDiagonal();
    const double defect = (f1 - ftcs).cwiseAbs().maxCoeff() / f0.cwiseAbs().maxCoeff();
    const double growth = h_norm_sq(f1, ps.velocity) / h_norm_sq(f0, ps.velocity);

    const InstabilityTrace trace = instability_demo(n_x, 32, 200);
    bool stable_nonincreasing = true;
    for (std::size_t n = 1; n < trace.stable.size(); ++n)
      stable_nonincreasing =
          stable_nonincreasing && trace.stable[n] <= trace.stable[n - 1] * (1.0 + 1e-12);
    r.passed = defect <= 1e-12 && growth > 1.0 && stable_nonincreasing;
    r.detail = fmt("one-step defect vs centered transport %.3g, H-norm ratio %.9g", defect, growth);
    r.detail += fmt("; conservative form ratio after 200 steps %.12g",
                    trace.stable.back() / trace.stable.front());
  });
}

CheckResult check_sustained_instability() {
  return timed("advection-form sustained growth", [&](CheckResult& r) {
    const InstabilityTrace trace = instability_demo(128, 32, 200);
    std::size_t increases = 0;
    for (std::size_t n = 1; n < trace.naive.size(); ++n)
      increases += trace.naive[n] > trace.naive[n - 1];
    bool stable_nonincreasing = true;
    for (std::size_t n = 1; n < trace.stable.size(); ++n)
      stable_nonincreasing =
          stable_nonincreasing && trace.stable[n] <= trace.stable[n - 1] * (1.0 + 1e-12);
    const double growth = trace.naive.back() / trace.naive.front();
    r.passed = increases == trace.naive.size() - 1 && growth > 1.01 && stable_nonincreasing;
    r.detail = fmt("advection-form final/initial %.6g, ", growth) +
               std::to_string(increases) + "/" + std::to_string(trace.naive.size() - 1) +
               " steps increasing" + fmt("; conservative form ratio %.12g",
                                         trace.stable.back() / trace.stable.front());
  });
}

StabilityChecks check_stable_scheme(std::uint64_t seed) {
  StabilityChecks out;
  double worst_growth = -1.0;
  double worst_moment = 0.0;
  const auto start = std::chrono::steady_clock::now();
  const PhaseSpace ps =
      make_phase_space_1d(SpatialGrid::uniform(-1.0, 1.0, 64), gauss_hermite_rule(32));
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.99);
  std::mt19937_64 rng(seed);
  const double sigmas[] = {0.0, 1.0, 10.0};
  for (int instance = 0; instance < 50; ++instance) {
    const double sigma = sigmas[instance % 3];
    FullState state = random_normalized_state(ps, rng);
    double h = h_norm_sq(state, ps.velocity);
    for (int step = 0; step < 100; ++step) {
      state = full_step(ps, state, SchemeVariant::StableConservative, sigma, dt);
      const double h_next = h_norm_sq(state, ps.velocity);
      worst_growth = std::max(worst_growth, (h_next - h) / h);
      h = h_next;
      const Eigen::VectorXd m = g_moments(state.g, ps.velocity);
      worst_moment = std::max(worst_moment, (m.array() - 1.0).abs().maxCoeff());
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.h_norm = {"H-norm non-increase (stable scheme)", worst_growth <= 1e-12,
                fmt("max relative one-step change %.3g over 50 x 100 steps", worst_growth), seconds};
  out.moment = {"exact discrete moment (stable scheme)", worst_moment <= 1e-11,
                fmt("max |moment - 1| = %.3g", worst_moment), 0.0};
  return out;
}

CheckResult check_cfl_inequality(std::uint64_t seed) {
  return timed("CFL inequality", [&](CheckResult& r) {
    const SpatialGrid grid = SpatialGrid::uniform(-1.0, 1.0, 64);
    const StencilSet st = build_stencils(grid);
    const VelocityGrid vg = gauss_hermite_rule(32);
    const double v_max = vg.v_cap;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double worst = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::MatrixXd f(grid.n_x, vg.size());
      for (Eigen::Index k = 0; k < f.cols(); ++k)
        for (Eigen::Index j = 0; j < f.rows(); ++j) f(j, k) = normal(rng);
      const CflEnergyTerms t = cfl_energy_terms(f, st, vg, grid.dx / v_max, grid.dx);
      worst = std::max(worst, t.value() / (t.transport + t.dissipation));
    }
    // Nyquist mode on the fastest node with a little seeded noise.
    Eigen::Index k_fast = 0;
    vg.nodes().cwiseAbs().maxCoeff(&k_fast);
    Eigen::MatrixXd witness(grid.n_x, vg.size());
    for (Eigen::Index k = 0; k < witness.cols(); ++k)
      for (Eigen::Index j = 0; j < witness.rows(); ++j)
        witness(j, k) = 1e-3 * normal(rng) / std::sqrt(vg.w_three_half(k)) +
                        (k == k_fast ? (j % 2 == 0 ? 1.0 : -1.0) : 0.0);
    const double witness_value = cfl_energy_gap(witness, st, vg, 3.0 * grid.dx / v_max, grid.dx);
    r.passed = worst <= 1e-12 && witness_value > 0.0;
    r.detail = fmt("max scaled value %.3g at dt = dx/max|v|; witness value %.3g at 3x", worst,
                   witness_value);
  });
}

std::vector<CheckResult> run_check_suite(std::uint64_t seed) {
  std::vector<CheckResult> results;
  results.push_back(check_summation_by_parts(seed));
  results.push_back(check_quadrature());
  results.push_back(check_counterexample());
  StabilityChecks s = check_stable_scheme(seed);
  results.push_back(std::move(s.h_norm));
  results.push_back(std::move(s.moment));
  results.push_back(check_cfl_inequality(seed));
  return results;
}

}  // namespace bgk
