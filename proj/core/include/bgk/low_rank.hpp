#pragma once

#include <Eigen/Core>

#include "bgk/velocity_grid.hpp"

namespace bgk {

/// g ~ X S V^T with orthonormal X (n_space x r) and V (n_velocity x r).
struct LowRankState {
  Eigen::MatrixXd x_basis;
  Eigen::MatrixXd s_core;
  Eigen::MatrixXd v_basis;
  Eigen::VectorXd rho;
  double t = 0.0;

  Eigen::Index rank() const { return s_core.rows(); }
  Eigen::MatrixXd g() const { return x_basis * s_core * v_basis.transpose(); }
};

/// Rank selection: drop the singular value tail while its 2-norm stays below
/// theta = theta_coeff * sigma_max, never exceeding r_max.
struct TruncationPolicy {
  double theta_coeff = 1e-5;
  Eigen::Index r_max = 200;
  bool conservative = true;
};

enum class AugmentationMode {
  Reduced2r,   // [K^{n+1}, X^n] and [L^{n+1}, V^n]
  BasisAug4r,  // additionally rho^2 X and w_half V
};

struct Factors {
  Eigen::MatrixXd x;
  Eigen::MatrixXd s;
  Eigen::MatrixXd v;
};

/// Orthonormal basis Q of span(A) from column-pivoted Householder QR, with
/// numerically dependent columns dropped, plus R = Q^T A so that A = Q R.
/// Columns are sign-normalized (largest-magnitude entry positive).
struct Orthonormalized {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
};

Orthonormalized orthonormalize(const Eigen::MatrixXd& a);

struct Augmented {
  Eigen::MatrixXd basis;       // orthonormal, span contains [updated, old]
  Eigen::MatrixXd projection;  // basis^T old
};

/// `old_basis` must be orthonormal; it forms the leading columns of the result,
/// followed by the directions of `updated` outside its span.
Augmented augment_2r(const Eigen::MatrixXd& updated, const Eigen::MatrixXd& old_basis);

/// qr([X, diag(rho^2) X]).
Eigen::MatrixXd augment_x_4r(const Eigen::MatrixXd& xhat, const Eigen::VectorXd& rho_next);

/// qr([V, diag(w_half) V]).
Eigen::MatrixXd augment_v_4r(const Eigen::MatrixXd& vhat, const VelocityGrid& velocity);

struct TruncationResult {
  Factors factors;
  Eigen::Index rank = 0;
  /// Rank kept for the Z-orthogonal part (conservative truncation only).
  Eigen::Index remainder_rank = 0;
  double theta = 0.0;
  /// Frobenius norm of what was cut away.
  double discarded = 0.0;
};

/// Smallest rank whose singular value tail is <= theta, clamped to
/// [min_rank, max_rank]. `singular_values` must be sorted descending.
Eigen::Index truncation_rank(const Eigen::VectorXd& singular_values, double theta,
                             Eigen::Index min_rank, Eigen::Index max_rank);

TruncationResult truncate_standard(const Eigen::MatrixXd& xbig, const Eigen::MatrixXd& sbig,
                                   const Eigen::MatrixXd& vbig, const TruncationPolicy& policy);

/// Splits X S V^T into the rank-1 part along the moment vector Z (kept
/// exactly) and the Z-orthogonal part (truncated), so the discrete moment
/// c_M sum_k g_jk w_half_k of every row is left untouched. The result has rank
/// remainder_rank + 1 and its velocity basis contains the moment direction.
TruncationResult truncate_conservative(const Eigen::MatrixXd& xbig, const Eigen::MatrixXd& sbig,
                                       const Eigen::MatrixXd& vbig, const VelocityGrid& velocity,
                                       const TruncationPolicy& policy);

/// Flips basis columns so each one's largest-magnitude entry is positive and
/// compensates in the core.
void canonicalize_signs(Factors& f);

/// Rank-`rank` factorization of a dense g from its SVD. Directions beyond the
/// numerical rank are padded with the remaining singular vectors and zero
/// core entries.
LowRankState low_rank_from_dense(const Eigen::VectorXd& rho, const Eigen::MatrixXd& g,
                                 Eigen::Index rank, double t = 0.0);

}  // namespace bgk
