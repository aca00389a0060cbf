#include "bgk/velocity_grid.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace bgk {

QuadratureError::QuadratureError(int index, double residual)
    : std::runtime_error("Gauss-Hermite node " + std::to_string(index) +
                         " did not converge (residual " +
                         std::to_string(residual) + ")"),
      index_(index),
      residual_(residual) {}

namespace {

// Normalized Hermite functions psi_m(x) without the e^{-x^2/2} factor,
// psi_m = p_m * exp(log_scale) * e^{-x^2/2}.
struct HermiteValues {
  double p_prev;  // degree n-1
  double p_last;  // degree n
  double log_scale;
};

HermiteValues hermite_functions(int n, double x) {
  constexpr double kRescale = 1e100;
  double p_prev = 0.0;
  double p = std::pow(std::numbers::pi, -0.25);
  double log_scale = 0.0;
  for (int m = 0; m < n; ++m) {
    const double next = std::sqrt(2.0 / (m + 1)) * x * p -
                        std::sqrt(static_cast<double>(m) / (m + 1)) * p_prev;
    p_prev = p;
    p = next;
    if (std::abs(p) > kRescale) {
      p /= kRescale;
      p_prev /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  return {p_prev, p, log_scale};
}

VelocityGrid finish(VelocityGrid grid) {
  grid.maxwell_norm = 1.0 / grid.w_half.sum();
  grid.h_prefactor = std::pow(2.0 * std::numbers::pi, 0.5 * grid.dim);
  grid.v_cap = std::sqrt(grid.speed_sq.maxCoeff());
  return grid;
}

}  // namespace

HermiteRule hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n_v must be >= 1");

  // Golub-Welsch: eigenvalues of the Jacobi matrix of the Hermite recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::VectorXd nodes(n);
  if (n == 1) {
    nodes(0) = 0.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    nodes = eig.eigenvalues();
  }

  // Newton polish on psi_n, psi_n' = sqrt(2n) psi_{n-1} - x psi_n.
  const double sqrt2n = std::sqrt(2.0 * n);
  for (int k = 0; k < n; ++k) {
    double x = nodes(k);
    double step = 0.0;
    for (int it = 0; it < 8; ++it) {
      const HermiteValues h = hermite_functions(n, x);
      step = h.p_last / (sqrt2n * h.p_prev - x * h.p_last);
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    if (!std::isfinite(x) || std::abs(step) > 1e-12 * std::max(1.0, std::abs(x)))
      throw QuadratureError(k, std::abs(step));
    nodes(k) = x;
  }
  for (int k = 0; k < n / 2; ++k) {
    const double m = 0.5 * (nodes(n - 1 - k) - nodes(k));
    nodes(k) = -m;
    nodes(n - 1 - k) = m;
  }
  if (n % 2 == 1) nodes(n / 2) = 0.0;

  // omega_k = 1 / (n psi_{n-1}(x_k)^2) * e^{-x_k^2}; the exponentials cancel
  // against the factor stripped from p.
  Eigen::VectorXd log_weights(n);
  for (int k = 0; k < n; ++k) {
    const HermiteValues h = hermite_functions(n, nodes(k));
    log_weights(k) =
        -std::log(static_cast<double>(n)) - 2.0 * (std::log(std::abs(h.p_prev)) + h.log_scale);
  }
  return {nodes, log_weights};
}

VelocityGrid gauss_hermite_rule(int n_v) {
  const HermiteRule rule = hermite_rule(n_v);
  VelocityGrid grid;
  grid.dim = 1;
  grid.components = {rule.nodes};
  grid.speed_sq = rule.nodes.array().square();
  const Eigen::ArrayXd lw = rule.log_weights.array();
  const Eigen::ArrayXd v2 = grid.speed_sq.array();
  grid.weights = lw.exp();
  grid.w_half = (lw + 0.5 * v2).exp();
  grid.w_full = (lw + v2).exp();
  grid.w_three_half = (lw + 1.5 * v2).exp();
  return finish(std::move(grid));
}

VelocityGrid tensor_velocity_grid_2d(int n_v1, int n_v2) {
  const VelocityGrid a = gauss_hermite_rule(n_v1);
  const VelocityGrid b = gauss_hermite_rule(n_v2);
  const Eigen::Index n = a.size() * b.size();
  VelocityGrid grid;
  grid.dim = 2;
  grid.components.assign(2, Eigen::VectorXd(n));
  grid.speed_sq.resize(n);
  grid.weights.resize(n);
  grid.w_half.resize(n);
  grid.w_full.resize(n);
  grid.w_three_half.resize(n);
  for (Eigen::Index l = 0; l < b.size(); ++l) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      const Eigen::Index i = k + a.size() * l;
      grid.components[0](i) = a.nodes()(k);
      grid.components[1](i) = b.nodes()(l);
      grid.speed_sq(i) = a.speed_sq(k) + b.speed_sq(l);
      grid.weights(i) = a.weights(k) * b.weights(l);
      grid.w_half(i) = a.w_half(k) * b.w_half(l);
      grid.w_full(i) = a.w_full(k) * b.w_full(l);
      grid.w_three_half(i) = a.w_three_half(k) * b.w_three_half(l);
    }
  }
  return finish(std::move(grid));
}

}  // namespace bgk
