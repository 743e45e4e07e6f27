#include "oed/linalg.hpp"

#include <cmath>
#include <string>

namespace oed {

namespace {

void check_square(const Mat& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatch(std::string(name) + " is " +
                            std::to_string(M.rows()) + "x" +
                            std::to_string(M.cols()));
  }
}

// Relative symmetry defect, scale-free: max |M - M^T| / (1 + max |M|).
double symmetry_defect(const Mat& M) {
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  return (M - M.transpose()).cwiseAbs().maxCoeff() / scale;
}

// Left-looking Cholesky kept by hand so the failing pivot index is exact.
Mat cholesky_lower(const Mat& A) {
  const Eigen::Index n = A.rows();
  Mat L = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = A(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NotPositiveDefinite(static_cast<int>(j));
    }
    L(j, j) = std::sqrt(d);
    const Eigen::Index m = n - j - 1;
    if (m > 0) {
      L.col(j).tail(m) =
          (A.col(j).tail(m) -
           L.bottomLeftCorner(m, j) * L.row(j).head(j).transpose()) /
          L(j, j);
    }
  }
  return L;
}

}  // namespace

SpdFactor factor_spd(const Mat& M, bool diagonal_hint) {
  check_square(M, "factor_spd input");
  if (M.rows() == 0) throw DimensionMismatch("factor_spd input is empty");
  if (symmetry_defect(M) > 1e-10) {
    throw NotSymmetric("relative defect " + std::to_string(symmetry_defect(M)));
  }
  const Mat A = 0.5 * (M + M.transpose());

  SpdFactor F;
  F.dim = A.rows();
  bool off_diag_zero = true;
  for (Eigen::Index i = 0; i < A.rows() && off_diag_zero; ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (i != j && A(i, j) != 0.0) {
        off_diag_zero = false;
        break;
      }
    }
  }
  if (diagonal_hint && off_diag_zero) {
    F.diagonal = true;
    F.recip.resize(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double d = A(i, i);
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw NotPositiveDefinite(static_cast<int>(i));
      }
      F.recip(i) = 1.0 / d;
    }
    return F;
  }
  F.diagonal = false;
  F.L = cholesky_lower(A);
  return F;
}

Vec solve_spd(const SpdFactor& F, const Vec& f) {
  if (f.size() != F.dim) {
    throw DimensionMismatch("solve_spd rhs length " + std::to_string(f.size()) +
                            " vs dim " + std::to_string(F.dim));
  }
  if (F.diagonal) return F.recip.cwiseProduct(f);
  Vec y = F.L.triangularView<Eigen::Lower>().solve(f);
  return F.L.transpose().triangularView<Eigen::Upper>().solve(y);
}

Mat solve_spd(const SpdFactor& F, const Mat& B) {
  if (B.rows() != F.dim) {
    throw DimensionMismatch("solve_spd rhs rows " + std::to_string(B.rows()) +
                            " vs dim " + std::to_string(F.dim));
  }
  if (F.diagonal) return F.recip.asDiagonal() * B;
  Mat Y = F.L.triangularView<Eigen::Lower>().solve(B);
  return F.L.transpose().triangularView<Eigen::Upper>().solve(Y);
}

Mat reconstruct(const SpdFactor& F) {
  if (F.diagonal) {
    return F.recip.cwiseInverse().asDiagonal().toDenseMatrix();
  }
  return F.L * F.L.transpose();
}

WeightedPinvFactor wpinv_build(const Mat& H, const SpdFactor& W, double ridge) {
  if (H.rows() > H.cols()) {
    throw DimensionMismatch("wpinv_build needs a wide operator, got " +
                            std::to_string(H.rows()) + "x" +
                            std::to_string(H.cols()));
  }
  if (H.cols() != W.dim) {
    throw DimensionMismatch("wpinv_build operator cols " +
                            std::to_string(H.cols()) + " vs weight dim " +
                            std::to_string(W.dim));
  }
  WeightedPinvFactor F;
  F.rows = H.rows();
  F.cols = H.cols();
  F.H = H;
  F.Z = solve_spd(W, Mat(H.transpose()));
  Mat S = H * F.Z;
  S = 0.5 * (S + S.transpose());
  if (ridge > 0.0) S.diagonal().array() += ridge;
  try {
    F.S = factor_spd(S);
  } catch (const NotPositiveDefinite& e) {
    throw RankDeficient(e.pivot);
  }
  F.W = W;
  return F;
}

Vec wpinv_apply(const WeightedPinvFactor& F, const Vec& v) {
  if (v.size() != F.rows) {
    throw DimensionMismatch("wpinv_apply rhs length " +
                            std::to_string(v.size()) + " vs rows " +
                            std::to_string(F.rows));
  }
  return F.Z * solve_spd(F.S, v);
}

Vec null_project(const WeightedPinvFactor& F, const Vec& v) {
  if (v.size() != F.cols) {
    throw DimensionMismatch("null_project arg length " +
                            std::to_string(v.size()) + " vs cols " +
                            std::to_string(F.cols));
  }
  return v - F.Z * solve_spd(F.S, Vec(F.H * v));
}

}  // namespace oed
