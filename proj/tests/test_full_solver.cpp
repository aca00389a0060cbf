#include <doctest.h>

#include <cmath>
#include <random>

#include "bgk/diagnostics.hpp"
#include "bgk/full_solver.hpp"
#include "bgk/random_state.hpp"

using namespace bgk;

namespace {

PhaseSpace small_1d(int n_x = 24, int n_v = 12) {
  return make_phase_space_1d(SpatialGrid::uniform(-1.0, 1.0, n_x), gauss_hermite_rule(n_v));
}

// Periodic stencil neighbors written out index by index.
int wrap(int j, int n) { return (j % n + n) % n; }

Eigen::VectorXd rho_oracle(const SpatialGrid& grid, const VelocityGrid& vg,
                           const Eigen::VectorXd& rho, const Eigen::MatrixXd& g, double dt) {
  const int n = grid.n_x;
  const double dx = grid.dx;
  Eigen::VectorXd flux(n), diff(n);
  for (int j = 0; j < n; ++j) {
    double a = 0.0, b = 0.0;
    for (int k = 0; k < vg.size(); ++k) {
      a += rho(j) * g(j, k) * vg.nodes()(k) * vg.w_half(k);
      b += rho(j) * g(j, k) * std::abs(vg.nodes()(k)) * vg.w_half(k);
    }
    flux(j) = vg.maxwell_norm * a;
    diff(j) = vg.maxwell_norm * b;
  }
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    const double dflux = (flux(wrap(j + 1, n)) - flux(wrap(j - 1, n))) / (2 * dx);
    const double ddiff = (diff(wrap(j + 1, n)) - 2 * diff(j) + diff(wrap(j - 1, n))) / (dx * dx);
    out(j) = rho(j) - dt * dflux + dt * dx / 2 * ddiff;
  }
  return out;
}

Eigen::MatrixXd g_stable_oracle(const SpatialGrid& grid, const VelocityGrid& vg,
                                const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                                const Eigen::VectorXd& rho_next, double sigma, double dt) {
  const int n = grid.n_x;
  const double dx = grid.dx;
  Eigen::MatrixXd out(n, vg.size());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < vg.size(); ++k) {
      const int jp = wrap(j + 1, n), jm = wrap(j - 1, n);
      const double p = rho(jp) * g(jp, k), c = rho(j) * g(j, k), m = rho(jm) * g(jm, k);
      const double v = vg.nodes()(k);
      const double rhs = c / rho_next(j) - dt / rho_next(j) * (p - m) / (2 * dx) * v +
                         dt * dx / (2 * rho_next(j)) * (p - 2 * c + m) / (dx * dx) * std::abs(v) +
                         sigma * dt;
      out(j, k) = rhs / (1 + sigma * dt);
    }
  return out;
}

Eigen::MatrixXd g_naive_oracle(const SpatialGrid& grid, const VelocityGrid& vg,
                               const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                               const Eigen::VectorXd& rho_next, double sigma, double dt) {
  const int n = grid.n_x;
  const double dx = grid.dx;
  Eigen::MatrixXd out(n, vg.size());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < vg.size(); ++k) {
      const int jp = wrap(j + 1, n), jm = wrap(j - 1, n);
      const double v = vg.nodes()(k);
      const double rhs = g(j, k) - dt * (g(jp, k) - g(jm, k)) / (2 * dx) * v +
                         dt * dx / 2 * (g(jp, k) - 2 * g(j, k) + g(jm, k)) / (dx * dx) * std::abs(v) +
                         sigma * dt - dt * g(j, k) / rho(j) * (rho(jp) - rho(jm)) / (2 * dx) * v;
      out(j, k) = rhs / (1 + sigma * dt + (rho_next(j) - rho(j)) / rho(j));
    }
  return out;
}

}  // namespace

TEST_CASE("maxwellian and reconstruction") {
  const VelocityGrid vg = gauss_hermite_rule(16);
  Eigen::VectorXd rho(3);
  rho << 0.5, 1.0, 2.0;
  const Eigen::MatrixXd m = maxwellian(rho, vg);
  for (int j = 0; j < 3; ++j) {
    CHECK(m.row(j).dot(vg.w_full) == doctest::Approx(rho(j)).epsilon(1e-12));
    for (int k = 0; k < vg.size(); ++k)
      CHECK(m(j, k) / rho(j) == doctest::Approx(m(0, k) / rho(0)));
  }
  CHECK((reconstruct_f(rho, Eigen::MatrixXd::Ones(3, vg.size()), vg) - m).norm() == 0.0);

  // rho = 1/c_M and g = e^{v^2/2} invert the Maxwellian factor.
  const Eigen::VectorXd inv = Eigen::VectorXd::Constant(2, 1.0 / vg.maxwell_norm);
  Eigen::MatrixXd g(2, vg.size());
  for (int k = 0; k < vg.size(); ++k) g.col(k).setConstant(std::exp(0.5 * vg.speed_sq(k)));
  CHECK((reconstruct_f(inv, g, vg).array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("density step matches the loop oracle") {
  const PhaseSpace ps = small_1d();
  std::mt19937_64 rng(7);
  const FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.9);
  const Eigen::VectorXd got = step_rho(ps, s, dt);
  const Eigen::VectorXd want = rho_oracle(ps.space[0], ps.velocity, s.rho, s.g, dt);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(got.sum() == doctest::Approx(s.rho.sum()).epsilon(1e-13));
}

TEST_CASE("g steps match the loop oracles") {
  const PhaseSpace ps = small_1d();
  std::mt19937_64 rng(11);
  const FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.99);
  const Eigen::VectorXd rn = step_rho(ps, s, dt);
  for (double sigma : {0.0, 1.0, 25.0}) {
    const Eigen::MatrixXd stable = step_g_stable(ps, s, rn, sigma, dt);
    const Eigen::MatrixXd naive = step_g_naive(ps, s, rn, sigma, dt);
    CHECK((stable - g_stable_oracle(ps.space[0], ps.velocity, s.rho, s.g, rn, sigma, dt))
              .cwiseAbs().maxCoeff() < 1e-12);
    CHECK((naive - g_naive_oracle(ps.space[0], ps.velocity, s.rho, s.g, rn, sigma, dt))
              .cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("global equilibrium is a fixed point of both schemes") {
  const PhaseSpace ps = small_1d();
  FullState s{Eigen::VectorXd::Constant(ps.n_space(), 1.7),
              Eigen::MatrixXd::Ones(ps.n_space(), ps.n_velocity()), 0.0};
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.99);
  for (auto variant : {SchemeVariant::StableConservative, SchemeVariant::NaiveAdvection})
    for (double sigma : {0.0, 3.0}) {
      const FullState next = full_step(ps, s, variant, sigma, dt);
      CHECK((next.rho - s.rho).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((next.g.array() - 1.0).abs().maxCoeff() < 1e-14);
      CHECK(next.t == doctest::Approx(dt));
    }
}

TEST_CASE("advection-form step from g = 1 is centered explicit transport") {
  const PhaseSpace ps = small_1d(32, 16);
  const auto& x = ps.space[0].points;
  FullState s{(1.0 + 0.1 * (M_PI * 8 * x.array()).cos()).matrix(),
              Eigen::MatrixXd::Ones(32, 16), 0.0};
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.99);
  const FullState next = full_step(ps, s, SchemeVariant::NaiveAdvection, 0.0, dt);
  const Eigen::MatrixXd f0 = reconstruct_f(s.rho, s.g, ps.velocity);
  const Eigen::MatrixXd ftcs = f0 - dt * (ps.axes[0].d_x * f0) * ps.axes[0].v.asDiagonal();
  CHECK((reconstruct_f(next.rho, next.g, ps.velocity) - ftcs).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(h_norm_sq(next, ps.velocity) > h_norm_sq(s, ps.velocity));
}

TEST_CASE("stable scheme keeps the moment, mass and H-norm bound") {
  const PhaseSpace ps = small_1d(40, 16);
  std::mt19937_64 rng(3);
  FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 1.0);
  const double mass = s.rho.sum();
  double h = h_norm_sq(s, ps.velocity);
  for (int n = 0; n < 50; ++n) {
    s = full_step(ps, s, SchemeVariant::StableConservative, 2.0, dt);
    const Eigen::MatrixXd f = reconstruct_f(s.rho, s.g, ps.velocity);
    CHECK((f * ps.velocity.w_full - s.rho).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((g_moments(s.g, ps.velocity).array() - 1.0).abs().maxCoeff() < 1e-12);
    const double h_next = h_norm_sq(s, ps.velocity);
    CHECK(h_next <= h * (1 + 1e-12));
    h = h_next;
  }
  CHECK(s.rho.sum() == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("strong collisions relax g toward equilibrium") {
  const PhaseSpace ps = small_1d();
  std::mt19937_64 rng(5);
  const FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.5);
  const Eigen::VectorXd rn = step_rho(ps, s, dt);
  double prev = 1e300;
  for (double sigma : {10.0, 100.0, 1000.0}) {
    const double dev = (step_g_stable(ps, s, rn, sigma, dt).array() - 1.0).abs().maxCoeff();
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("positivity guard reports index and time") {
  const PhaseSpace ps = small_1d(8, 8);
  FullState s{Eigen::VectorXd::Constant(8, 1e-3), Eigen::MatrixXd::Ones(8, 8), 0.5};
  s.rho(3) = 10.0;  // steep spike drains its neighbors under a huge step
  try {
    step_rho(ps, s, 100.0);
    FAIL("expected PositivityError");
  } catch (const PositivityError& e) {
    CHECK(e.time() == doctest::Approx(100.5));
    CHECK(e.index() >= 0);
  }
}

TEST_CASE("2D stable step conserves mass and moment") {
  const auto g1 = SpatialGrid::uniform(-1.0, 1.0, 10);
  const PhaseSpace ps = make_phase_space_2d(g1, g1, 6, 6);
  std::mt19937_64 rng(9);
  FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.7, true);
  const double mass = s.rho.sum();
  double h = h_norm_sq(s, ps.velocity);
  for (int n = 0; n < 20; ++n) {
    s = full_step(ps, s, SchemeVariant::StableConservative, 1.0, dt);
    CHECK((g_moments(s.g, ps.velocity).array() - 1.0).abs().maxCoeff() < 1e-12);
    const double h_next = h_norm_sq(s, ps.velocity);
    CHECK(h_next <= h * (1 + 1e-12));
    h = h_next;
  }
  CHECK(s.rho.sum() == doctest::Approx(mass).epsilon(1e-12));
}
