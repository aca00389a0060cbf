#include "bgk/spatial.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bgk {

SpatialGrid SpatialGrid::uniform(double a, double b, int n_x) {
  if (n_x < 1) throw std::invalid_argument("SpatialGrid: n_x must be positive");
  if (!(b > a)) throw std::invalid_argument("SpatialGrid: domain must satisfy b > a");
  SpatialGrid grid;
  grid.n_x = n_x;
  grid.a = a;
  grid.b = b;
  grid.dx = (b - a) / n_x;
  grid.points.resize(n_x);
  for (int j = 0; j < n_x; ++j) grid.points(j) = a + j * grid.dx;
  return grid;
}

StencilSet build_stencils(const SpatialGrid& grid, StencilVariant variant) {
  const int n = grid.n_x;
  if (n < 3) throw std::invalid_argument("build_stencils: n_x must be >= 3");
  const double dx = grid.dx;

  StencilSet s;
  s.variant = variant;
  s.d_x = Eigen::MatrixXd::Zero(n, n);
  s.d_xx = Eigen::MatrixXd::Zero(n, n);
  s.d_plus = Eigen::MatrixXd::Zero(n, n);

  const bool wrap = variant == StencilVariant::PeriodicCirculant;
  for (int j = 0; j < n; ++j) {
    const int left = j - 1;
    const int right = j + 1;
    s.d_xx(j, j) = -2.0 / (dx * dx);
    s.d_plus(j, j) = -1.0 / dx;
    if (left >= 0 || wrap) {
      const int i = (left + n) % n;
      s.d_x(j, i) = -0.5 / dx;
      s.d_xx(j, i) = 1.0 / (dx * dx);
    }
    if (right < n || wrap) {
      const int i = right % n;
      s.d_x(j, i) = 0.5 / dx;
      s.d_xx(j, i) = 1.0 / (dx * dx);
      s.d_plus(j, i) = 1.0 / dx;
    }
  }
  if (!wrap) {
    s.d_x.row(0).setZero();
    s.d_x.row(n - 1).setZero();
    s.d_xx.row(0).setZero();
    s.d_xx.row(n - 1).setZero();
  }
  return s;
}

double cfl_timestep_unchecked(double dx, double v_cap, double cfl, bool round_up_vcap) {
  if (!(dx > 0.0)) throw std::invalid_argument("cfl_timestep: dx must be positive");
  if (!(v_cap > 0.0)) throw std::invalid_argument("cfl_timestep: v_cap must be positive");
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl_timestep: cfl must be positive");
  const double v = round_up_vcap ? std::ceil(v_cap) : v_cap;
  return cfl * dx / v;
}

double cfl_timestep(double dx, double v_cap, double cfl, bool round_up_vcap) {
  if (cfl > 1.0)
    throw std::invalid_argument("cfl_timestep: cfl = " + std::to_string(cfl) +
                                " violates the stability bound max|v| dt <= dx (cfl <= 1)");
  return cfl_timestep_unchecked(dx, v_cap, cfl, round_up_vcap);
}

}  // namespace bgk
