#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bgk/phase_space.hpp"
#include "bgk/spatial.hpp"
#include "bgk/velocity_grid.hpp"

using namespace bgk;

namespace {
const double kSqrtPi = std::sqrt(M_PI);
}

TEST_CASE("single and two point rules match the closed forms") {
  const VelocityGrid one = gauss_hermite_rule(1);
  CHECK(one.nodes()(0) == doctest::Approx(0.0));
  CHECK(one.weights(0) == doctest::Approx(kSqrtPi).epsilon(1e-14));

  const VelocityGrid two = gauss_hermite_rule(2);
  CHECK(two.nodes()(0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(two.nodes()(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(two.weights(0) == doctest::Approx(kSqrtPi / 2).epsilon(1e-14));
  CHECK(two.weights(1) == doctest::Approx(kSqrtPi / 2).epsilon(1e-14));
}

TEST_CASE("three point rule: roots of 8v^3 - 12v") {
  const VelocityGrid g = gauss_hermite_rule(3);
  const double r = std::sqrt(1.5);
  CHECK(g.nodes()(0) == doctest::Approx(-r).epsilon(1e-14));
  CHECK(std::abs(g.nodes()(1)) < 1e-15);
  CHECK(g.nodes()(2) == doctest::Approx(r).epsilon(1e-14));
  CHECK(g.weights(0) == doctest::Approx(kSqrtPi / 6).epsilon(1e-14));
  CHECK(g.weights(1) == doctest::Approx(2 * kSqrtPi / 3).epsilon(1e-14));
}

TEST_CASE("monomial exactness up to degree 2n-1") {
  for (int n : {4, 16, 64}) {
    const HermiteRule rule = hermite_rule(n);
    for (int m = 0; 2 * m <= 2 * n - 1; ++m) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k)
        sum += std::exp(rule.log_weights(k)) * std::pow(rule.nodes(k), 2 * m);
      const double exact = std::tgamma(m + 0.5);
      CHECK(std::abs(sum - exact) / exact < 1e-10);
    }
  }
}

TEST_CASE("grid invariants: symmetry, zeroth moment, unit Maxwellian mass") {
  for (int n : {5, 32, 128, 500}) {
    const VelocityGrid g = gauss_hermite_rule(n);
    for (int k = 0; k < n; ++k) CHECK(g.nodes()(k) == -g.nodes()(n - 1 - k));
    CHECK(g.weights.sum() == doctest::Approx(kSqrtPi).epsilon(1e-12));
    CHECK(g.maxwell_norm * g.w_half.sum() == doctest::Approx(1.0).epsilon(1e-14));
    if (n >= 32) CHECK(g.w_half.sum() / std::sqrt(2 * M_PI) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.v_cap == doctest::Approx(g.nodes().cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("500-point rule reaches |v| of about 31.05 with finite scaled weights") {
  const VelocityGrid g = gauss_hermite_rule(500);
  CHECK(g.v_cap > 31.0);
  CHECK(g.v_cap < 31.1);
  CHECK(g.weights.minCoeff() >= 0.0);
  CHECK(g.w_three_half.allFinite());
  CHECK(std::isfinite(g.w_three_half.maxCoeff()));
}

TEST_CASE("tensor grids") {
  const VelocityGrid one = tensor_velocity_grid_2d(1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.weights(0) == doctest::Approx(M_PI));
  CHECK(one.h_prefactor == doctest::Approx(2 * M_PI));

  const VelocityGrid four = tensor_velocity_grid_2d(2, 2);
  REQUIRE(four.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(four.components[0](k)) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(four.components[1](k)) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(four.weights(k) == doctest::Approx(M_PI / 4));
  }
  // first component runs fastest
  CHECK(four.components[0](0) < four.components[0](1));
  CHECK(four.components[1](0) == four.components[1](1));

  const VelocityGrid big = tensor_velocity_grid_2d(32, 32);
  CHECK(big.v_cap == doctest::Approx(10.08).epsilon(5e-4));
  CHECK(std::ceil(big.v_cap) == 11.0);
}

TEST_CASE("quadrature rejects empty rules") {
  CHECK_THROWS(gauss_hermite_rule(0));
}

TEST_CASE("spatial grid spacing and points") {
  const SpatialGrid g = SpatialGrid::uniform(-10.0, 10.0, 1000);
  CHECK(g.dx == doctest::Approx(0.02));
  CHECK(g.points(0) == -10.0);
  CHECK(g.points(999) == doctest::Approx(10.0 - 0.02));
}

TEST_CASE("circulant stencil rows for n=4, dx=0.5") {
  const StencilSet st = build_stencils(SpatialGrid::uniform(0.0, 2.0, 4));
  const Eigen::RowVector4d row2(-1, 0, 1, 0), row1(0, 1, 0, -1);
  CHECK((st.d_x.row(1) - row2).norm() == 0.0);
  CHECK((st.d_x.row(0) - row1).norm() == 0.0);
  CHECK(st.d_xx(0, 0) == -8.0);
  CHECK(st.d_xx(0, 3) == 4.0);
  CHECK(st.d_plus(3, 0) == 2.0);
  CHECK(st.d_plus(3, 3) == -2.0);
}

TEST_CASE("circulant stencil structure") {
  for (int n : {3, 8, 33}) {
    const StencilSet st = build_stencils(SpatialGrid::uniform(-1.0, 1.0, n));
    CHECK((st.d_x + st.d_x.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((st.d_xx - st.d_xx.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(st.d_xx.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12 * st.d_xx.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd ptp = -st.d_plus.transpose() * st.d_plus;
    CHECK((st.d_xx - ptp).cwiseAbs().maxCoeff() < 1e-12 * st.d_xx.cwiseAbs().maxCoeff());
    CHECK(st.d_x.colwise().sum().cwiseAbs().maxCoeff() < 1e-12 / st.d_x.cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST_CASE("literal variant zeroes the boundary rows") {
  const StencilSet st =
      build_stencils(SpatialGrid::uniform(0.0, 1.0, 6), StencilVariant::ZeroedBoundaryRows);
  CHECK(st.d_x.row(0).norm() == 0.0);
  CHECK(st.d_x.row(5).norm() == 0.0);
  CHECK(st.d_xx.row(0).norm() == 0.0);
  CHECK(st.d_plus(5, 0) == 0.0);
  CHECK(st.d_x(2, 3) == doctest::Approx(3.0));
}

TEST_CASE("stencils need three points") { CHECK_THROWS(build_stencils(SpatialGrid::uniform(0, 1, 2))); }

TEST_CASE("Fourier symbols of the periodic stencils") {
  const int n = 40;
  const SpatialGrid grid = SpatialGrid::uniform(-1.0, 1.0, n);
  const StencilSet st = build_stencils(grid);
  using cd = std::complex<double>;
  // exp(i alpha pi x) is periodic on [-1, 1) for integer alpha
  for (int alpha : {1, 3, 7, 10, 19, 20}) {
    Eigen::VectorXcd z(n);
    for (int j = 0; j < n; ++j) z(j) = std::exp(cd(0, alpha * M_PI * grid.points(j)));
    const double nu = alpha * M_PI * grid.dx;
    const cd sx(0, std::sin(nu) / grid.dx);
    const cd sxx(2 * (std::cos(nu) - 1) / (grid.dx * grid.dx), 0);
    const cd sp((std::cos(nu) - 1) / grid.dx, std::sin(nu) / grid.dx);
    CHECK((st.d_x.cast<cd>() * z - sx * z).norm() < 1e-10 * z.norm() / grid.dx);
    CHECK((st.d_xx.cast<cd>() * z - sxx * z).norm() < 1e-10 * z.norm() / (grid.dx * grid.dx));
    CHECK((st.d_plus.cast<cd>() * z - sp * z).norm() < 1e-10 * z.norm() / grid.dx);
  }
}

TEST_CASE("CFL time step rule") {
  CHECK(cfl_timestep(0.02, 31.05, 0.99, true) == doctest::Approx(0.99 * 0.02 / 32));
  CHECK(cfl_timestep(0.1, 10.08, 0.7, true) == doctest::Approx(0.7 * 0.1 / 11));
  CHECK(cfl_timestep(1.0, 1.0, 1.0, false) == 1.0);
  CHECK_THROWS_AS(cfl_timestep(1.0, 1.0, 1.5), std::invalid_argument);
  CHECK(cfl_timestep_unchecked(1.0, 1.0, 1.5) == 1.5);
  CHECK_THROWS(cfl_timestep(0.0, 1.0, 0.5));
}

TEST_CASE("2D phase space operators act per axis") {
  const SpatialGrid g1 = SpatialGrid::uniform(0.0, 1.0, 5);
  const SpatialGrid g2 = SpatialGrid::uniform(0.0, 2.0, 4);
  const PhaseSpace ps = make_phase_space_2d(g1, g2, 3, 2);
  REQUIRE(ps.n_space() == 20);
  REQUIRE(ps.n_velocity() == 6);
  REQUIRE(ps.axes.size() == 2);
  const StencilSet s1 = build_stencils(g1), s2 = build_stencils(g2);
  // field u(i, j) = a(i) b(j), flattened i + 5 j
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(5, 1, 5).array().square();
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(4, -1, 2).array().cube();
  Eigen::VectorXd u(20);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 5; ++i) u(i + 5 * j) = a(i) * b(j);
  const Eigen::VectorXd d1 = ps.axes[0].d_x * u, d2 = ps.axes[1].d_xx * u;
  const Eigen::VectorXd da = s1.d_x * a, db = s2.d_xx * b;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 5; ++i) {
      CHECK(d1(i + 5 * j) == doctest::Approx(da(i) * b(j)));
      CHECK(d2(i + 5 * j) == doctest::Approx(a(i) * db(j)));
    }
  CHECK(ps.axes[1].v(3) == ps.velocity.components[1](3));
  CHECK(ps.min_dx() == doctest::Approx(0.2));
  CHECK(ps.cell_volume() == doctest::Approx(0.2 * 0.5));
}
