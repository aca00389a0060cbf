#include "bgk/dlra_solver.hpp"

#include <future>

#include "bgk/parallel.hpp"

namespace bgk {

namespace {

void require_positive(const Eigen::VectorXd& rho, double t) {
  for (Eigen::Index j = 0; j < rho.size(); ++j)
    if (!(rho(j) > 0.0)) throw PositivityError(j, t, rho(j));
}

// V^T diag(w) V
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& v, const Eigen::VectorXd& w) {
  return v.transpose() * (w.asDiagonal() * v);
}

// [W, d_x W, d_xx W] per axis, side by side.
Eigen::MatrixXd spatial_stack(const PhaseSpace& ps, const Eigen::MatrixXd& w) {
  const Eigen::Index r = w.cols();
  Eigen::MatrixXd out(w.rows(), r * (1 + 2 * ps.axes.size()));
  out.leftCols(r) = w;
  Eigen::Index c = r;
  for (const TransportAxis& ax : ps.axes) {
    out.middleCols(c, r).noalias() = ax.d_x * w;
    out.middleCols(c + r, r).noalias() = ax.d_xx * w;
    c += 2 * r;
  }
  return out;
}

// Velocity coefficients matching spatial_stack:
// [A^T B; -dt A^T diag(v) B; dt dx/2 A^T diag|v| B] per axis.
Eigen::MatrixXd velocity_stack(const PhaseSpace& ps, const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b, double dt) {
  const Eigen::Index r = a.cols();
  Eigen::MatrixXd out(r * (1 + 2 * ps.axes.size()), b.cols());
  out.topRows(r).noalias() = a.transpose() * b;
  Eigen::Index c = r;
  for (const TransportAxis& ax : ps.axes) {
    out.middleRows(c, r).noalias() = a.transpose() * ((-dt * ax.v).asDiagonal() * b);
    out.middleRows(c + r, r).noalias() =
        a.transpose() * ((0.5 * dt * ax.dx * ax.abs_v).asDiagonal() * b);
    c += 2 * r;
  }
  return out;
}

// K^{n+1} from the spatial stack of diag(rho) X S.
Eigen::MatrixXd k_from_stack(const PhaseSpace& ps, const Eigen::MatrixXd& stack,
                             const Eigen::MatrixXd& v, const Eigen::VectorXd& rho_next,
                             double sigma, double dt) {
  Eigen::MatrixXd k =
      rho_next.cwiseInverse().asDiagonal() * (stack * velocity_stack(ps, v, v, dt));
  k.rowwise() += (sigma * dt) * v.colwise().sum();
  return k;
}

// Core update on (xbig, vbig) from the old factors K = X S and V; equals
// s_step with s_tilde = xbig^T X S V^T vbig when X and V lie in the spans of
// xbig and vbig. The transport acts on rank r instead of 2r.
Eigen::MatrixXd s_step_from_factors(const PhaseSpace& ps, const Eigen::MatrixXd& xbig,
                                    const Eigen::MatrixXd& vbig, const Eigen::MatrixXd& stack,
                                    const Eigen::MatrixXd& v_old, const Eigen::VectorXd& rho_next,
                                    double sigma, double dt) {
  const Eigen::MatrixXd acc = stack * velocity_stack(ps, v_old, vbig, dt);
  Eigen::MatrixXd out = (rho_next.cwiseInverse().asDiagonal() * xbig).transpose() * acc;
  out.noalias() += (sigma * dt) * xbig.colwise().sum().transpose() * vbig.colwise().sum();
  return out / (1.0 + sigma * dt);
}

}  // namespace

Eigen::VectorXd rho_update(const PhaseSpace& ps, const LowRankState& state, double dt) {
  const double c = ps.velocity.maxwell_norm;
  const Eigen::VectorXd& wh = ps.velocity.w_half;
  const Eigen::MatrixXd k = state.x_basis * state.s_core;
  Eigen::VectorXd next = state.rho;
  for (const TransportAxis& ax : ps.axes) {
    const Eigen::VectorXd vf = state.v_basis.transpose() * ax.v.cwiseProduct(wh);
    const Eigen::VectorXd af = state.v_basis.transpose() * ax.abs_v.cwiseProduct(wh);
    const Eigen::VectorXd flux = state.rho.cwiseProduct(k * vf);
    const Eigen::VectorXd diffusion = state.rho.cwiseProduct(k * af);
    next.noalias() -= (dt * c) * (ax.d_x * flux);
    next.noalias() += (0.5 * dt * ax.dx * c) * (ax.d_xx * diffusion);
  }
  require_positive(next, state.t + dt);
  return next;
}

Eigen::MatrixXd k_step(const PhaseSpace& ps, const LowRankState& state,
                       const Eigen::VectorXd& rho_next, double sigma, double dt) {
  const Eigen::MatrixXd stack =
      spatial_stack(ps, state.rho.asDiagonal() * (state.x_basis * state.s_core));
  return k_from_stack(ps, stack, state.v_basis, rho_next, sigma, dt);
}

Eigen::MatrixXd l_step(const PhaseSpace& ps, const LowRankState& state,
                       const Eigen::VectorXd& rho_next, double sigma, double dt) {
  const Eigen::MatrixXd& x = state.x_basis;
  const Eigen::Index r = x.cols();
  const Eigen::MatrixXd l = state.v_basis * state.s_core.transpose();
  // X^T diag(1/rho') [diag(rho) X, d_x diag(rho) X, d_xx diag(rho) X, ...]
  const Eigen::MatrixXd c = (rho_next.cwiseInverse().asDiagonal() * x).transpose() *
                            spatial_stack(ps, state.rho.asDiagonal() * x);

  Eigen::MatrixXd out = l * c.leftCols(r);
  Eigen::Index col = r;
  for (const TransportAxis& ax : ps.axes) {
    out.noalias() -= (dt * ax.v).asDiagonal() * (l * c.middleCols(col, r).transpose());
    out.noalias() +=
        (0.5 * dt * ax.dx * ax.abs_v).asDiagonal() * (l * c.middleCols(col + r, r).transpose());
    col += 2 * r;
  }
  out.rowwise() += (sigma * dt) * x.colwise().sum();
  return out;
}

Eigen::MatrixXd s_step(const PhaseSpace& ps, const Eigen::MatrixXd& xbig,
                       const Eigen::MatrixXd& vbig, const Eigen::MatrixXd& s_tilde,
                       const Eigen::VectorXd& rho, const Eigen::VectorXd& rho_next, double sigma,
                       double dt) {
  const Eigen::MatrixXd weighted = rho.asDiagonal() * xbig;
  const Eigen::MatrixXd scaled = rho_next.cwiseInverse().asDiagonal() * xbig;

  Eigen::MatrixXd out = (scaled.transpose() * weighted) * s_tilde;
  for (const TransportAxis& ax : ps.axes) {
    const Eigen::MatrixXd c2 = scaled.transpose() * (ax.d_x * weighted);
    const Eigen::MatrixXd c3 = scaled.transpose() * (ax.d_xx * weighted);
    out.noalias() -= (dt * c2 * s_tilde) * weighted_gram(vbig, ax.v);
    out.noalias() += (0.5 * dt * ax.dx * c3 * s_tilde) * weighted_gram(vbig, ax.abs_v);
  }
  out.noalias() += (sigma * dt) * xbig.colwise().sum().transpose() * vbig.colwise().sum();
  return out / (1.0 + sigma * dt);
}

LowRankState dlra_step(const PhaseSpace& ps, const LowRankState& state, double sigma, double dt,
                       AugmentationMode mode, const TruncationPolicy& policy,
                       DlraStepReport* report) {
  const Eigen::VectorXd rho_next = rho_update(ps, state, dt);

  const Eigen::MatrixXd stack =
      spatial_stack(ps, state.rho.asDiagonal() * (state.x_basis * state.s_core));
  auto k_task = [&] { return k_from_stack(ps, stack, state.v_basis, rho_next, sigma, dt); };
  Eigen::MatrixXd k_next;
  Eigen::MatrixXd l_next;
  if (thread_budget() > 1) {
    auto pending = std::async(std::launch::async, k_task);
    l_next = l_step(ps, state, rho_next, sigma, dt);
    k_next = pending.get();
  } else {
    k_next = k_task();
    l_next = l_step(ps, state, rho_next, sigma, dt);
  }

  // Constant vector and moment direction join the augmented spans.
  Eigen::MatrixXd k_cols(k_next.rows(), k_next.cols() + 1);
  k_cols << k_next, Eigen::VectorXd::Ones(k_next.rows());
  Eigen::MatrixXd l_cols(l_next.rows(), l_next.cols() + 1);
  l_cols << l_next, ps.velocity.w_half;
  Augmented ax = augment_2r(k_cols, state.x_basis);
  Augmented av = augment_2r(l_cols, state.v_basis);
  if (mode == AugmentationMode::BasisAug4r) {
    ax.basis = augment_x_4r(ax.basis, rho_next);
    av.basis = augment_v_4r(av.basis, ps.velocity);
  }

  const Eigen::MatrixXd s_hat = s_step_from_factors(ps, ax.basis, av.basis, stack, state.v_basis,
                                                    rho_next, sigma, dt);

  const TruncationResult tr =
      policy.conservative ? truncate_conservative(ax.basis, s_hat, av.basis, ps.velocity, policy)
                          : truncate_standard(ax.basis, s_hat, av.basis, policy);
  if (report) {
    report->augmented_x = ax.basis.cols();
    report->augmented_v = av.basis.cols();
    report->remainder_rank = tr.remainder_rank;
    report->theta = tr.theta;
    report->discarded = tr.discarded;
  }

  LowRankState next;
  next.x_basis = tr.factors.x;
  next.s_core = tr.factors.s;
  next.v_basis = tr.factors.v;
  next.rho = rho_next;
  next.t = state.t + dt;
  return next;
}

}  // namespace bgk
