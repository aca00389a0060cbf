#pragma once

#include <vector>

#include <Eigen/Core>

#include "bgk/full_solver.hpp"
#include "bgk/low_rank.hpp"
#include "bgk/phase_space.hpp"

namespace bgk {

/// One row of diagnostics.csv.
struct DiagRecord {
  double t = 0.0;
  Eigen::Index rank = 0;
  double h_norm_sq = 0.0;
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
  double mass = 0.0;
};

/// ||f||_H^2 = (2 pi)^{d/2} sum_jk f_jk^2 w_three_half_k.
double h_norm_sq(const Eigen::MatrixXd& f, const VelocityGrid& velocity);

// The same norm evaluated from (rho, g) without forming f; f^2 w_three_half
// collapses to c_M^2 rho^2 g^2 w_half, which stays finite at large |v|.
double h_norm_sq(const FullState& state, const VelocityGrid& velocity);
double h_norm_sq(const LowRankState& state, const VelocityGrid& velocity);

/// Per-row discrete moment c_M sum_k g_jk w_half_k (equal to 1 when conserved).
Eigen::VectorXd g_moments(const Eigen::MatrixXd& g, const VelocityGrid& velocity);
Eigen::VectorXd g_moments(const LowRankState& state, const VelocityGrid& velocity);

struct KappaBounds {
  double plus = 0.0;
  double minus = 0.0;
};

KappaBounds kappa_bounds(const Eigen::MatrixXd& g, const VelocityGrid& velocity);
KappaBounds kappa_bounds(const LowRankState& state, const VelocityGrid& velocity);

DiagRecord make_record(const PhaseSpace& ps, const FullState& state);
DiagRecord make_record(const PhaseSpace& ps, const LowRankState& state);

/// The two norms of the CFL inequality
///   dt ||D^x f diag(v) - dx/2 D^xx f diag|v| ||_H^2 - dx ||D^+ f diag|v|^{1/2}||_H^2 <= 0.
struct CflEnergyTerms {
  double transport = 0.0;    // dt * first norm
  double dissipation = 0.0;  // dx * second norm
  double value() const { return transport - dissipation; }
};

CflEnergyTerms cfl_energy_terms(const Eigen::MatrixXd& f, const StencilSet& stencils,
                                const VelocityGrid& velocity, double dt, double dx);

double cfl_energy_gap(const Eigen::MatrixXd& f, const StencilSet& stencils,
                      const VelocityGrid& velocity, double dt, double dx);

struct InstabilityTrace {
  std::vector<double> naive;   // h_norm_sq after 0..steps
  std::vector<double> stable;
};

/// Advection-form vs conservative-form runs from g = 1 and a single-mode
/// density perturbation rho_j = 1 + 0.1 cos(pi alpha x_j) on [-1, 1], with
/// alpha = n_x/4 and
/// dt = 0.99 dx / max|v_k|.
InstabilityTrace instability_demo(int n_x, int n_v, int steps, double sigma = 0.0);

}  // namespace bgk
