#pragma once

#include <Eigen/Core>

#include "bgk/errors.hpp"
#include "bgk/phase_space.hpp"

namespace bgk {

/// Density and deviation factor of f = M[rho] g on the full (x, v) grid.
struct FullState {
  Eigen::VectorXd rho;  // n_space
  Eigen::MatrixXd g;    // n_space x n_velocity
  double t = 0.0;
};

enum class SchemeVariant {
  StableConservative,  // stabilization on d_x(rho g), rho^{n+1}/rho^n collision factor
  NaiveAdvection,      // advection form, stabilization on rho d_x g
};

/// M_jk = c_M rho_j e^{-|v_k|^2/2}.
Eigen::MatrixXd maxwellian(const Eigen::VectorXd& rho, const VelocityGrid& velocity);

/// f_jk = c_M rho_j g_jk e^{-|v_k|^2/2}.
Eigen::MatrixXd reconstruct_f(const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                              const VelocityGrid& velocity);

/// Explicit density update shared by both schemes. Throws PositivityError if
/// any rho^{n+1}_j <= 0.
Eigen::VectorXd step_rho(const PhaseSpace& ps, const FullState& state, double dt);

/// Conservative-form g update given the already advanced density.
Eigen::MatrixXd step_g_stable(const PhaseSpace& ps, const FullState& state,
                              const Eigen::VectorXd& rho_next, double sigma, double dt);

/// Advection-form g update. The (g/rho) d_x rho v term uses g^n; the
/// implicit terms are pointwise and solved in closed form.
Eigen::MatrixXd step_g_naive(const PhaseSpace& ps, const FullState& state,
                             const Eigen::VectorXd& rho_next, double sigma, double dt);

FullState full_step(const PhaseSpace& ps, const FullState& state, SchemeVariant variant,
                    double sigma, double dt);

}  // namespace bgk
