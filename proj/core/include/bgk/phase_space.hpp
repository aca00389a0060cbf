#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "bgk/spatial.hpp"
#include "bgk/velocity_grid.hpp"

namespace bgk {

using SparseOp = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Transport along one spatial axis: stencils acting on the flattened space
/// index and the matching velocity component.
struct TransportAxis {
  double dx = 0.0;
  SparseOp d_x;
  SparseOp d_xx;
  SparseOp d_plus;
  Eigen::VectorXd v;      // v_d at every flattened velocity node
  Eigen::VectorXd abs_v;  // |v_d|
};

/// Discrete phase space: flattened space (first axis fastest) times
/// flattened velocity. 1D and 2D problems share every solver code path.
struct PhaseSpace {
  std::vector<SpatialGrid> space;
  VelocityGrid velocity;
  std::vector<TransportAxis> axes;

  Eigen::Index n_space() const;
  Eigen::Index n_velocity() const { return velocity.size(); }
  int dim() const { return static_cast<int>(space.size()); }
  double cell_volume() const;
  /// Smallest spacing over all axes; the CFL rule uses it.
  double min_dx() const;
};

PhaseSpace make_phase_space_1d(const SpatialGrid& grid, const VelocityGrid& velocity,
                               StencilVariant variant = StencilVariant::PeriodicCirculant);

/// 2D phase space on grid_1 x grid_2 with a tensor velocity grid n_v1 x n_v2.
PhaseSpace make_phase_space_2d(const SpatialGrid& grid_1, const SpatialGrid& grid_2, int n_v1,
                               int n_v2,
                               StencilVariant variant = StencilVariant::PeriodicCirculant);

}  // namespace bgk
