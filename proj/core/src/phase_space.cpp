#include "bgk/phase_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace bgk {

namespace {

// Embed a 1D operator along `axis` of a grid with sizes `dims` (axis 0 fastest).
SparseOp embed(const Eigen::MatrixXd& op, const std::vector<int>& dims, int axis) {
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  Eigen::Index stride = 1;
  for (int d = 0; d < axis; ++d) stride *= dims[d];
  const int n = dims[axis];

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(total) * 3);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const Eigen::Index i = (idx / stride) % n;
    const Eigen::Index base = idx - i * stride;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double value = op(i, c);
      if (value != 0.0) entries.emplace_back(idx, base + c * stride, value);
    }
  }
  SparseOp out(total, total);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

TransportAxis make_axis(const SpatialGrid& grid, const std::vector<int>& dims, int axis,
                        const Eigen::VectorXd& v, StencilVariant variant) {
  const StencilSet s = build_stencils(grid, variant);
  TransportAxis t;
  t.dx = grid.dx;
  t.d_x = embed(s.d_x, dims, axis);
  t.d_xx = embed(s.d_xx, dims, axis);
  t.d_plus = embed(s.d_plus, dims, axis);
  t.v = v;
  t.abs_v = v.cwiseAbs();
  return t;
}

}  // namespace

Eigen::Index PhaseSpace::n_space() const {
  Eigen::Index n = 1;
  for (const auto& g : space) n *= g.n_x;
  return n;
}

double PhaseSpace::cell_volume() const {
  double vol = 1.0;
  for (const auto& g : space) vol *= g.dx;
  return vol;
}

double PhaseSpace::min_dx() const {
  double dx = space.front().dx;
  for (const auto& g : space) dx = std::min(dx, g.dx);
  return dx;
}

PhaseSpace make_phase_space_1d(const SpatialGrid& grid, const VelocityGrid& velocity,
                               StencilVariant variant) {
  if (velocity.dim != 1) throw std::invalid_argument("make_phase_space_1d: velocity grid must be 1D");
  PhaseSpace ps;
  ps.space = {grid};
  ps.velocity = velocity;
  ps.axes.push_back(make_axis(grid, {grid.n_x}, 0, velocity.components[0], variant));
  return ps;
}

PhaseSpace make_phase_space_2d(const SpatialGrid& grid_1, const SpatialGrid& grid_2, int n_v1,
                               int n_v2, StencilVariant variant) {
  PhaseSpace ps;
  ps.space = {grid_1, grid_2};
  ps.velocity = tensor_velocity_grid_2d(n_v1, n_v2);
  const std::vector<int> dims{grid_1.n_x, grid_2.n_x};
  ps.axes.push_back(make_axis(grid_1, dims, 0, ps.velocity.components[0], variant));
  ps.axes.push_back(make_axis(grid_2, dims, 1, ps.velocity.components[1], variant));
  return ps;
}

}  // namespace bgk
