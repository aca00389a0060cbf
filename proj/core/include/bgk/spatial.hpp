#pragma once

#include <Eigen/Core>

namespace bgk {

/// Uniform periodic grid on [a, b): x_j = a + j*dx, dx = (b - a)/n_x.
struct SpatialGrid {
  int n_x = 0;
  double a = 0.0;
  double b = 0.0;
  double dx = 0.0;
  Eigen::VectorXd points;

  static SpatialGrid uniform(double a, double b, int n_x);
};

enum class StencilVariant {
  PeriodicCirculant,
  // Boundary rows zeroed (non-periodic stencil). Summation by
  // parts does not hold for this variant.
  ZeroedBoundaryRows,
};

/// Central first difference d_x, second difference d_xx, forward difference
/// d_plus. For the circulant variant d_xx = -d_plus^T d_plus.
struct StencilSet {
  Eigen::MatrixXd d_x;
  Eigen::MatrixXd d_xx;
  Eigen::MatrixXd d_plus;
  StencilVariant variant = StencilVariant::PeriodicCirculant;
};

StencilSet build_stencils(const SpatialGrid& grid,
                          StencilVariant variant = StencilVariant::PeriodicCirculant);

/// dt = cfl * dx / V with V = ceil(v_cap) if round_up_vcap, else v_cap.
/// Throws std::invalid_argument for cfl outside (0, 1].
double cfl_timestep(double dx, double v_cap, double cfl, bool round_up_vcap = false);

/// Same rule without the cfl <= 1 stability check, for instability studies.
double cfl_timestep_unchecked(double dx, double v_cap, double cfl, bool round_up_vcap = false);

}  // namespace bgk
