#include "bgk/diagnostics.hpp"

#include <stdexcept>

namespace bgk {

double h_norm_sq(const Eigen::MatrixXd& f, const VelocityGrid& velocity) {
  if (f.cols() != velocity.size()) throw std::invalid_argument("h_norm_sq: shape mismatch");
  return velocity.h_prefactor * (f.cwiseAbs2() * velocity.w_three_half).sum();
}

double h_norm_sq(const FullState& state, const VelocityGrid& velocity) {
  const double c = velocity.maxwell_norm;
  const Eigen::VectorXd rows = state.g.cwiseAbs2() * velocity.w_half;
  return velocity.h_prefactor * c * c * state.rho.cwiseAbs2().dot(rows);
}

double h_norm_sq(const LowRankState& state, const VelocityGrid& velocity) {
  const double c = velocity.maxwell_norm;
  const Eigen::MatrixXd k = state.x_basis * state.s_core;
  const Eigen::MatrixXd gram =
      state.v_basis.transpose() * (velocity.w_half.asDiagonal() * state.v_basis);
  const Eigen::VectorXd rows = (k * gram).cwiseProduct(k).rowwise().sum();
  return velocity.h_prefactor * c * c * state.rho.cwiseAbs2().dot(rows);
}

Eigen::VectorXd g_moments(const Eigen::MatrixXd& g, const VelocityGrid& velocity) {
  return velocity.maxwell_norm * (g * velocity.w_half);
}

Eigen::VectorXd g_moments(const LowRankState& state, const VelocityGrid& velocity) {
  const Eigen::VectorXd vw = state.v_basis.transpose() * velocity.w_half;
  return velocity.maxwell_norm * (state.x_basis * (state.s_core * vw));
}

namespace {
KappaBounds bounds(const Eigen::VectorXd& m) { return {m.maxCoeff(), m.minCoeff()}; }
}  // namespace

KappaBounds kappa_bounds(const Eigen::MatrixXd& g, const VelocityGrid& velocity) {
  return bounds(g_moments(g, velocity));
}

KappaBounds kappa_bounds(const LowRankState& state, const VelocityGrid& velocity) {
  return bounds(g_moments(state, velocity));
}

DiagRecord make_record(const PhaseSpace& ps, const FullState& state) {
  const KappaBounds k = kappa_bounds(state.g, ps.velocity);
  return {state.t,
          std::min(state.g.rows(), state.g.cols()),
          h_norm_sq(state, ps.velocity),
          k.plus,
          k.minus,
          state.rho.sum() * ps.cell_volume()};
}

DiagRecord make_record(const PhaseSpace& ps, const LowRankState& state) {
  const KappaBounds k = kappa_bounds(state, ps.velocity);
  return {state.t, state.rank(), h_norm_sq(state, ps.velocity), k.plus, k.minus,
          state.rho.sum() * ps.cell_volume()};
}

CflEnergyTerms cfl_energy_terms(const Eigen::MatrixXd& f, const StencilSet& stencils,
                                const VelocityGrid& velocity, double dt, double dx) {
  const Eigen::VectorXd& v = velocity.nodes();
  const Eigen::VectorXd abs_v = v.cwiseAbs();
  const Eigen::MatrixXd transport =
      stencils.d_x * f * v.asDiagonal() - 0.5 * dx * stencils.d_xx * f * abs_v.asDiagonal();
  const Eigen::MatrixXd upwind = stencils.d_plus * f * abs_v.cwiseSqrt().asDiagonal();
  return {dt * h_norm_sq(transport, velocity), dx * h_norm_sq(upwind, velocity)};
}

double cfl_energy_gap(const Eigen::MatrixXd& f, const StencilSet& stencils,
                      const VelocityGrid& velocity, double dt, double dx) {
  return cfl_energy_terms(f, stencils, velocity, dt, dx).value();
}

InstabilityTrace instability_demo(int n_x, int n_v, int steps, double sigma) {
  if (steps < 1) throw std::invalid_argument("instability_demo: steps must be >= 1");
  const SpatialGrid grid = SpatialGrid::uniform(-1.0, 1.0, n_x);
  const PhaseSpace ps = make_phase_space_1d(grid, gauss_hermite_rule(n_v));
  const double dt = cfl_timestep(grid.dx, ps.velocity.v_cap, 0.99);
  const double alpha = n_x / 4;

  FullState init;
  init.rho = (1.0 + 0.1 * (EIGEN_PI * alpha * grid.points.array()).cos()).matrix();
  init.g = Eigen::MatrixXd::Ones(n_x, ps.n_velocity());

  InstabilityTrace trace;
  FullState naive = init;
  FullState stable = init;
  trace.naive.push_back(h_norm_sq(naive, ps.velocity));
  trace.stable.push_back(h_norm_sq(stable, ps.velocity));
  for (int n = 0; n < steps; ++n) {
    naive = full_step(ps, naive, SchemeVariant::NaiveAdvection, sigma, dt);
    stable = full_step(ps, stable, SchemeVariant::StableConservative, sigma, dt);
    trace.naive.push_back(h_norm_sq(naive, ps.velocity));
    trace.stable.push_back(h_norm_sq(stable, ps.velocity));
  }
  return trace;
}

}  // namespace bgk
