#pragma once

#include <Eigen/Dense>

#include "oed/errors.hpp"

namespace oed {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Factorization of a symmetric positive definite matrix, either as the
/// reciprocals of a diagonal or as a lower Cholesky factor.
struct SpdFactor {
  Eigen::Index dim = 0;
  bool diagonal = false;
  Vec recip;  ///< elementwise reciprocals, diagonal form only
  Mat L;      ///< lower triangular factor, dense form only
};

/// Factor a symmetric positive definite matrix.
///
/// The input is symmetrized as (M + M^T)/2 after a relative symmetry check.
/// The cheap diagonal form is used only when every off-diagonal entry is
/// exactly zero and the caller passes `diagonal_hint`.
/// Throws NotSymmetric or NotPositiveDefinite (with the failing pivot).
SpdFactor factor_spd(const Mat& M, bool diagonal_hint = false);

/// Solve M x = f for one right-hand side.
Vec solve_spd(const SpdFactor& F, const Vec& f);

/// Solve M X = B columnwise.
Mat solve_spd(const SpdFactor& F, const Mat& B);

/// Rebuild the factored matrix; intended for tests and diagnostics.
Mat reconstruct(const SpdFactor& F);

/// Factorization backing the weighted right pseudoinverse
/// H^# = W^{-1} H^T (H W^{-1} H^T)^{-1} of a wide full-row-rank H.
struct WeightedPinvFactor {
  Eigen::Index rows = 0;  ///< number of rows of H
  Eigen::Index cols = 0;  ///< number of columns of H
  Mat H;
  Mat Z;        ///< W^{-1} H^T
  SpdFactor S;  ///< factor of H W^{-1} H^T (plus optional ridge)
  SpdFactor W;
};

/// Build the weighted pseudoinverse factorization of H under weight W.
///
/// `ridge`, if positive, is added to the diagonal of H W^{-1} H^T before
/// factoring. Throws RankDeficient (with the failing pivot) when the Gram
/// matrix is not positive definite, DimensionMismatch when H is taller than
/// wide or does not match W.
WeightedPinvFactor wpinv_build(const Mat& H, const SpdFactor& W,
                               double ridge = 0.0);

/// Apply H^# to v: the minimum-W-norm solution of H x = v.
Vec wpinv_apply(const WeightedPinvFactor& F, const Vec& v);

/// Apply the oblique projector I - H^# H onto the nullspace of H.
Vec null_project(const WeightedPinvFactor& F, const Vec& v);

}  // namespace oed
