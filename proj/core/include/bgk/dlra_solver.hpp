#pragma once

#include <Eigen/Core>

#include "bgk/errors.hpp"
#include "bgk/low_rank.hpp"
#include "bgk/phase_space.hpp"

namespace bgk {

// Rank-adaptive basis-update & Galerkin integrator for the conservative-form
// scheme. Every sub-step is the Galerkin projection of the same right-hand
// side F(g) = (rho/rho') g - dt/rho' d_x(rho g) v + dt dx/(2 rho') d_xx(rho g)|v| + sigma dt.

/// Density update evaluated in factored form. Throws PositivityError.
Eigen::VectorXd rho_update(const PhaseSpace& ps, const LowRankState& state, double dt);

/// K^{n+1} = F(K V^T) V with K = X S.
Eigen::MatrixXd k_step(const PhaseSpace& ps, const LowRankState& state,
                       const Eigen::VectorXd& rho_next, double sigma, double dt);

/// L^{n+1} = F(X L^T)^T X with L = V S^T.
Eigen::MatrixXd l_step(const PhaseSpace& ps, const LowRankState& state,
                       const Eigen::VectorXd& rho_next, double sigma, double dt);

/// Galerkin core update on the augmented bases, divided by (1 + sigma dt).
Eigen::MatrixXd s_step(const PhaseSpace& ps, const Eigen::MatrixXd& xbig,
                       const Eigen::MatrixXd& vbig, const Eigen::MatrixXd& s_tilde,
                       const Eigen::VectorXd& rho, const Eigen::VectorXd& rho_next, double sigma,
                       double dt);

struct DlraStepReport {
  Eigen::Index augmented_x = 0;
  Eigen::Index augmented_v = 0;
  Eigen::Index remainder_rank = 0;
  double theta = 0.0;
  double discarded = 0.0;
};

LowRankState dlra_step(const PhaseSpace& ps, const LowRankState& state, double sigma, double dt,
                       AugmentationMode mode, const TruncationPolicy& policy,
                       DlraStepReport* report = nullptr);

}  // namespace bgk
