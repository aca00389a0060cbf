#include "bgk/full_solver.hpp"

#include <cmath>
#include <string>

namespace bgk {

namespace {

void require_positive(const Eigen::VectorXd& rho, double t) {
  for (Eigen::Index j = 0; j < rho.size(); ++j)
    if (!(rho(j) > 0.0)) throw PositivityError(j, t, rho(j));
}

Eigen::ArrayXd maxwell_profile(const VelocityGrid& velocity) {
  return velocity.maxwell_norm * (-0.5 * velocity.speed_sq.array()).exp();
}

}  // namespace

Eigen::MatrixXd maxwellian(const Eigen::VectorXd& rho, const VelocityGrid& velocity) {
  return rho * maxwell_profile(velocity).matrix().transpose();
}

Eigen::MatrixXd reconstruct_f(const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                              const VelocityGrid& velocity) {
  if (g.rows() != rho.size() || g.cols() != velocity.size())
    throw std::invalid_argument("reconstruct_f: shape mismatch");
  return rho.asDiagonal() * g * maxwell_profile(velocity).matrix().asDiagonal();
}

Eigen::VectorXd step_rho(const PhaseSpace& ps, const FullState& state, double dt) {
  const double c = ps.velocity.maxwell_norm;
  const Eigen::VectorXd& wh = ps.velocity.w_half;
  Eigen::VectorXd next = state.rho;
  for (const TransportAxis& ax : ps.axes) {
    const Eigen::VectorXd flux = state.rho.cwiseProduct(state.g * ax.v.cwiseProduct(wh));
    const Eigen::VectorXd diffusion = state.rho.cwiseProduct(state.g * ax.abs_v.cwiseProduct(wh));
    next.noalias() -= (dt * c) * (ax.d_x * flux);
    next.noalias() += (0.5 * dt * ax.dx * c) * (ax.d_xx * diffusion);
  }
  require_positive(next, state.t + dt);
  return next;
}

Eigen::MatrixXd step_g_stable(const PhaseSpace& ps, const FullState& state,
                              const Eigen::VectorXd& rho_next, double sigma, double dt) {
  require_positive(rho_next, state.t + dt);
  const Eigen::MatrixXd weighted = state.rho.asDiagonal() * state.g;
  Eigen::MatrixXd acc = weighted;
  for (const TransportAxis& ax : ps.axes) {
    acc.noalias() -= (ax.d_x * weighted) * (dt * ax.v).asDiagonal();
    acc.noalias() += (ax.d_xx * weighted) * (0.5 * dt * ax.dx * ax.abs_v).asDiagonal();
  }
  const double scale = 1.0 / (1.0 + sigma * dt);
  acc = rho_next.cwiseInverse().asDiagonal() * acc;
  return ((acc.array() + sigma * dt) * scale).matrix();
}

Eigen::MatrixXd step_g_naive(const PhaseSpace& ps, const FullState& state,
                             const Eigen::VectorXd& rho_next, double sigma, double dt) {
  require_positive(rho_next, state.t + dt);
  const Eigen::MatrixXd& g = state.g;
  Eigen::MatrixXd acc = g;
  for (const TransportAxis& ax : ps.axes) {
    acc.noalias() -= (ax.d_x * g) * (dt * ax.v).asDiagonal();
    acc.noalias() += (ax.d_xx * g) * (0.5 * dt * ax.dx * ax.abs_v).asDiagonal();
    const Eigen::VectorXd log_slope = (ax.d_x * state.rho).cwiseQuotient(state.rho);
    acc.noalias() -= (dt * log_slope).asDiagonal() * g * ax.v.asDiagonal();
  }
  acc.array() += sigma * dt;
  for (Eigen::Index j = 0; j < g.rows(); ++j) {
    const double denom = 1.0 + sigma * dt + (rho_next(j) - state.rho(j)) / state.rho(j);
    if (!(std::abs(denom) > 1e-300))
      throw std::runtime_error("step_g_naive: vanishing denominator at row " + std::to_string(j));
    acc.row(j) /= denom;
  }
  return acc;
}

FullState full_step(const PhaseSpace& ps, const FullState& state, SchemeVariant variant,
                    double sigma, double dt) {
  FullState next;
  next.rho = step_rho(ps, state, dt);
  next.g = variant == SchemeVariant::StableConservative
               ? step_g_stable(ps, state, next.rho, sigma, dt)
               : step_g_naive(ps, state, next.rho, sigma, dt);
  next.t = state.t + dt;
  return next;
}

}  // namespace bgk
