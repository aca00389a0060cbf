#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace bgk {

/// Gauss-Hermite velocity quadrature (weight e^{-|v|^2}) together with the
/// exponentially rescaled weight vectors every moment and norm is built from.
///
/// Multi-dimensional grids are tensor products flattened with the first
/// velocity component running fastest.
struct VelocityGrid {
  int dim = 1;
  /// components[d](k) is the d-th velocity component of node k.
  std::vector<Eigen::VectorXd> components;
  Eigen::VectorXd speed_sq;      // |v_k|^2
  Eigen::VectorXd weights;       // omega_k
  Eigen::VectorXd w_half;        // omega_k e^{|v_k|^2/2}
  Eigen::VectorXd w_full;        // omega_k e^{|v_k|^2}
  Eigen::VectorXd w_three_half;  // omega_k e^{3|v_k|^2/2}
  /// Velocity bound entering the CFL rule (max Euclidean node norm).
  double v_cap = 0.0;
  /// Discrete Maxwellian normalization 1 / sum_k w_half_k (unit moment of
  /// g = 1). Tends to (2 pi)^{-dim/2}.
  double maxwell_norm = 0.0;
  /// Prefactor of the H-norm, (2 pi)^{dim/2}.
  double h_prefactor = 0.0;

  Eigen::Index size() const { return weights.size(); }
  const Eigen::VectorXd& nodes() const { return components.front(); }
};

/// Raised when the Hermite root polish does not converge.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(int index, double residual);

  int index() const { return index_; }
  double residual() const { return residual_; }

 private:
  int index_;
  double residual_;
};

/// Nodes and log-weights of the n-point Gauss-Hermite rule, sorted ascending.
struct HermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd log_weights;
};

HermiteRule hermite_rule(int n);

VelocityGrid gauss_hermite_rule(int n_v);

VelocityGrid tensor_velocity_grid_2d(int n_v1, int n_v2);

}  // namespace bgk
