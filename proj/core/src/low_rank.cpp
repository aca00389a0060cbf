#include "bgk/low_rank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace bgk {

namespace {

constexpr double kRankThreshold = 1e-12;

Eigen::Index largest_entry(const Eigen::Ref<const Eigen::VectorXd>& col) {
  Eigen::Index idx = 0;
  col.cwiseAbs().maxCoeff(&idx);
  return idx;
}

struct Svd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};

Svd svd(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return {Eigen::MatrixXd(a.rows(), 0), {}, Eigen::MatrixXd(a.cols(), 0)};
  Eigen::BDCSVD<Eigen::MatrixXd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

double tail_norm(const Eigen::VectorXd& sigma, Eigen::Index keep) {
  const Eigen::Index n = sigma.size() - keep;
  return n > 0 ? sigma.tail(n).norm() : 0.0;
}

// Householder QR keeping every column (rank-deficient input gives arbitrary
// orthonormal completions with zero rows in R).
Orthonormalized thin_qr(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Orthonormalized out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  out.r = out.q.transpose() * a;
  return out;
}

// [q, e] with e a unit vector orthogonal to the orthonormal columns of q.
Eigen::MatrixXd complement_extended(const Eigen::MatrixXd& q) {
  Eigen::Index i;
  q.rowwise().squaredNorm().minCoeff(&i);
  Eigen::VectorXd e = Eigen::VectorXd::Unit(q.rows(), i);
  for (int pass = 0; pass < 2; ++pass) e -= q * (q.transpose() * e);
  Eigen::MatrixXd out(q.rows(), q.cols() + 1);
  out << q, e.normalized();
  return out;
}

}  // namespace

Orthonormalized orthonormalize(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  Eigen::MatrixXd scaled = a;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double n = a.col(c).norm();
    if (n > 0.0) scaled.col(c) /= n;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(kRankThreshold);
  const Eigen::Index k = std::min<Eigen::Index>(qr.rank(), m);

  Orthonormalized out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index i = largest_entry(out.q.col(c));
    if (out.q(i, c) < 0.0) out.q.col(c) *= -1.0;
  }
  out.r = out.q.transpose() * a;
  return out;
}

Augmented augment_2r(const Eigen::MatrixXd& updated, const Eigen::MatrixXd& old_basis) {
  if (updated.rows() != old_basis.rows())
    throw std::invalid_argument("augment_2r: row count mismatch");
  const Eigen::Index m = old_basis.rows();
  const Eigen::Index r = old_basis.cols();

  // The old basis is kept as is and extended by the part of the unit-scaled
  // new columns outside its span (projected out twice).
  Eigen::MatrixXd resid = updated;
  for (Eigen::Index c = 0; c < resid.cols(); ++c) {
    const double n = resid.col(c).norm();
    if (n > 0.0) resid.col(c) /= n;
  }
  for (int pass = 0; pass < 2; ++pass)
    resid.noalias() -= old_basis * (old_basis.transpose() * resid);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(resid);
  const Eigen::Index limit = std::min(resid.cols(), m - r);
  Eigen::Index k = 0;
  while (k < limit && std::abs(qr.matrixQR()(k, k)) > kRankThreshold) ++k;
  Eigen::MatrixXd fresh = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  // Second projection keeps the extension orthogonal to working precision.
  fresh -= old_basis * (old_basis.transpose() * fresh);
  for (Eigen::Index c = 0; c < k; ++c) {
    fresh.col(c).normalize();
    const Eigen::Index i = largest_entry(fresh.col(c));
    if (fresh(i, c) < 0.0) fresh.col(c) *= -1.0;
  }

  Augmented out;
  out.basis.resize(m, r + k);
  out.basis << old_basis, fresh;
  out.projection = Eigen::MatrixXd::Zero(r + k, r);
  out.projection.topRows(r).setIdentity();
  return out;
}

Eigen::MatrixXd augment_x_4r(const Eigen::MatrixXd& xhat, const Eigen::VectorXd& rho_next) {
  Eigen::MatrixXd stacked(xhat.rows(), 2 * xhat.cols());
  stacked << xhat, rho_next.cwiseAbs2().asDiagonal() * xhat;
  return orthonormalize(stacked).q;
}

Eigen::MatrixXd augment_v_4r(const Eigen::MatrixXd& vhat, const VelocityGrid& velocity) {
  Eigen::MatrixXd stacked(vhat.rows(), 2 * vhat.cols());
  stacked << vhat, velocity.w_half.asDiagonal() * vhat;
  return orthonormalize(stacked).q;
}

Eigen::Index truncation_rank(const Eigen::VectorXd& singular_values, double theta,
                             Eigen::Index min_rank, Eigen::Index max_rank) {
  const Eigen::Index n = singular_values.size();
  max_rank = std::min(max_rank, n);
  min_rank = std::min(min_rank, max_rank);
  // Suffix sums from the smallest value upward.
  Eigen::Index keep = n;
  double tail_sq = 0.0;
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    tail_sq += singular_values(r) * singular_values(r);
    if (std::sqrt(tail_sq) > theta) break;
    keep = r;
  }
  return std::clamp(keep, min_rank, max_rank);
}

void canonicalize_signs(Factors& f) {
  for (Eigen::Index c = 0; c < f.x.cols(); ++c) {
    const Eigen::Index i = largest_entry(f.x.col(c));
    if (f.x(i, c) < 0.0) {
      f.x.col(c) *= -1.0;
      f.s.row(c) *= -1.0;
    }
  }
  for (Eigen::Index c = 0; c < f.v.cols(); ++c) {
    const Eigen::Index i = largest_entry(f.v.col(c));
    if (f.v(i, c) < 0.0) {
      f.v.col(c) *= -1.0;
      f.s.col(c) *= -1.0;
    }
  }
}

TruncationResult truncate_standard(const Eigen::MatrixXd& xbig, const Eigen::MatrixXd& sbig,
                                   const Eigen::MatrixXd& vbig, const TruncationPolicy& policy) {
  const Svd dec = svd(sbig);
  TruncationResult out;
  out.theta = dec.sigma.size() > 0 ? policy.theta_coeff * dec.sigma(0) : 0.0;
  out.rank = truncation_rank(dec.sigma, out.theta, 1, policy.r_max);
  out.discarded = tail_norm(dec.sigma, out.rank);
  out.factors.x = xbig * dec.u.leftCols(out.rank);
  out.factors.s = dec.sigma.head(out.rank).asDiagonal();
  out.factors.v = vbig * dec.v.leftCols(out.rank);
  canonicalize_signs(out.factors);
  return out;
}

TruncationResult truncate_conservative(const Eigen::MatrixXd& xbig, const Eigen::MatrixXd& sbig,
                                       const Eigen::MatrixXd& vbig, const VelocityGrid& velocity,
                                       const TruncationPolicy& policy) {
  const Eigen::VectorXd moment = velocity.maxwell_norm * velocity.w_half;
  const Eigen::VectorXd z = moment.normalized();

  // H1 = X (S V^T z) z^T, exactly rank one.
  const Eigen::VectorXd vz = vbig.transpose() * z;
  const Eigen::VectorXd a = sbig * vz;
  const double h1_sigma = a.norm();
  Eigen::VectorXd h1_x = Eigen::VectorXd::Zero(a.size());
  if (h1_sigma > 0.0)
    h1_x = a / h1_sigma;
  else
    h1_x(0) = 1.0;

  // H2 = X S ((I - z z^T) V)^T, H2 Z = 0.
  const Eigen::MatrixXd w = vbig - z * vz.transpose();
  const Orthonormalized ow = orthonormalize(w);
  const Svd dec = svd(sbig * ow.r.transpose());
  const double sigma_max = dec.sigma.size() > 0 ? dec.sigma(0) : 0.0;

  TruncationResult out;
  out.theta = policy.theta_coeff * sigma_max;
  // xbig gains one direction when 1 + rt exceeds its width, unless it
  // already spans the whole space.
  const Eigen::Index room =
      std::min(policy.r_max - 1, std::min(xbig.cols() + 1, xbig.rows()) - 1);
  out.remainder_rank =
      dec.sigma.size() > 0 && room >= 1 ? truncation_rank(dec.sigma, out.theta, 1, room) : 0;
  out.discarded = tail_norm(dec.sigma, out.remainder_rank);
  const Eigen::Index rt = out.remainder_rank;
  const bool extend = 1 + rt > xbig.cols();

  // Recombine [h1_x, P] and [z, Q_w Q], keeping all 1 + rt columns even
  // when h1_x lies in span(P).
  Eigen::MatrixXd cx = Eigen::MatrixXd::Zero(a.size() + (extend ? 1 : 0), 1 + rt);
  cx.col(0).head(a.size()) = h1_x;
  cx.block(0, 1, a.size(), rt) = dec.u.leftCols(rt);
  Eigen::MatrixXd cv(z.size(), 1 + rt);
  cv << z, ow.q * dec.v.leftCols(rt);
  Eigen::VectorXd core_diag(1 + rt);
  core_diag << h1_sigma, dec.sigma.head(rt);

  const Orthonormalized ox = thin_qr(cx);
  const Orthonormalized ov = thin_qr(cv);
  Eigen::MatrixXd core = ox.r * core_diag.asDiagonal() * ov.r.transpose();
  Eigen::MatrixXd x = extend ? Eigen::MatrixXd(complement_extended(xbig) * ox.q) : xbig * ox.q;
  Eigen::MatrixXd v = ov.q;

  out.factors = {std::move(x), std::move(core), std::move(v)};
  out.rank = out.factors.s.rows();
  canonicalize_signs(out.factors);
  return out;
}

LowRankState low_rank_from_dense(const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                                 Eigen::Index rank, double t) {
  const Svd dec = svd(g);
  const Eigen::Index r = std::min<Eigen::Index>(rank, dec.sigma.size());
  if (r < 1) throw std::invalid_argument("low_rank_from_dense: rank must be >= 1");
  Factors f{dec.u.leftCols(r), dec.sigma.head(r).asDiagonal(), dec.v.leftCols(r)};
  // Exact zeros keep the padded directions from carrying roundoff.
  for (Eigen::Index i = 1; i < r; ++i)
    if (f.s(i, i) <= 1e-14 * f.s(0, 0)) f.s(i, i) = 0.0;
  canonicalize_signs(f);
  LowRankState s;
  s.x_basis = std::move(f.x);
  s.s_core = std::move(f.s);
  s.v_basis = std::move(f.v);
  s.rho = rho;
  s.t = t;
  return s;
}

}  // namespace bgk
