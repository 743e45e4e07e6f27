#include "oed/sclqr.hpp"

#include <cmath>

#include <Eigen/LU>

namespace oed {

namespace {

void check_model(const SclqrModel& m) {
  const Eigen::Index n = m.A.rows();
  if (m.A.cols() != n || m.B.rows() != n || m.B.cols() != n ||
      m.Q_xx.rows() != n || m.Q_xx.cols() != n || m.Q_uu.rows() != n ||
      m.Q_uu.cols() != n || m.H.cols() != n) {
    throw DimensionMismatch("model matrices disagree on the state dimension");
  }
  if (!(m.K_x > 0.0)) throw NumericalError("K_x must be positive");
}

// I - H^# H and H^# H with the identity weight.
std::pair<Mat, Mat> output_projector(const Mat& H) {
  const Eigen::Index n = H.cols();
  const SpdFactor W = factor_spd(Mat(Mat::Identity(n, n)), true);
  const WeightedPinvFactor F = wpinv_build(H, W);
  const Mat HsH = F.Z * solve_spd(F.S, H);
  return {Mat(Mat::Identity(n, n) - HsH), HsH};
}

Mat solve_with_check(const Mat& B, const Mat& rhs) {
  Eigen::PartialPivLU<Mat> lu(B);
  const Mat X = lu.solve(rhs);
  if (!X.allFinite()) throw SingularInputMatrix();
  const double resid = (B * X - rhs).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
    throw SingularInputMatrix();
  }
  return X;
}

}  // namespace

SclqrProjectors build_projectors(const SclqrModel& m) {
  check_model(m);
  auto [OmB, HsH] = output_projector(m.H);
  SclqrProjectors pr;
  pr.Omega_A = -m.K_x * HsH;
  pr.Omega_B = OmB;
  return pr;
}

TransformedLq transformed_lq(const SclqrModel& m, LqCostForm form) {
  const SclqrProjectors pr = build_projectors(m);
  TransformedLq lq;
  lq.A_t = pr.Omega_A;
  lq.B_t = pr.Omega_B;
  if (form == LqCostForm::as_printed) {
    lq.Qxx_t = m.Q_xx + pr.Omega_A.transpose() * m.Q_uu * pr.Omega_A;
    lq.Qvv_t = pr.Omega_B.transpose() * m.Q_uu * pr.Omega_B;
    lq.N_t = pr.Omega_A.transpose() * m.Q_uu * pr.Omega_B;
    return lq;
  }
  const Mat K = pr.Omega_A - m.A;
  const Mat MK = solve_with_check(m.B, K);
  const Mat MOmB = solve_with_check(m.B, pr.Omega_B);
  lq.Qxx_t = m.Q_xx + MK.transpose() * m.Q_uu * MK;
  lq.Qvv_t = MOmB.transpose() * m.Q_uu * MOmB;
  lq.N_t = MK.transpose() * m.Q_uu * MOmB;
  return lq;
}

RiccatiSolution riccati_backward(const TransformedLq& lq, double eps,
                                 double horizon_max) {
  const Eigen::Index n = lq.A_t.rows();
  RiccatiSolution sol;
  if (eps < 0.0) {
    eps = 1e-9 * lq.Qvv_t.trace() / static_cast<double>(n);
    if (!(eps > 0.0)) eps = 1e-12;
  }
  sol.regularization_eps = eps;

  Mat Rreg = lq.Qvv_t;
  Rreg.diagonal().array() += eps;
  const SpdFactor Rf = factor_spd(Rreg);

  // Completion of squares removes the cross term: with w = v + R^-1 N^T x
  // the problem becomes standard in (A_s, Q_s).
  const Mat RinvNt = solve_spd(Rf, Mat(lq.N_t.transpose()));
  const Mat A_s = lq.A_t - lq.B_t * RinvNt;
  Mat Q_s = lq.Qxx_t - lq.N_t * RinvNt;
  Q_s = 0.5 * (Q_s + Q_s.transpose());

  auto gain_of = [&](const Mat& P) -> Mat {
    return solve_spd(Rf, Mat(lq.B_t.transpose() * P + lq.N_t.transpose()));
  };
  auto deriv = [&](const Mat& P) -> Mat {
    const Mat RinvBtP = solve_spd(Rf, Mat(lq.B_t.transpose() * P));
    Mat D = A_s.transpose() * P + P * A_s -
            P * lq.B_t * RinvBtP + Q_s;
    return 0.5 * (D + D.transpose());
  };

  const double step = 1e-3;
  Mat P = Mat::Zero(n, n);
  Mat gain = gain_of(P);
  double s = 0.0;
  sol.settled = false;
  while (s < horizon_max) {
    const Mat k1 = deriv(P);
    const Mat k2 = deriv(Mat(P + 0.5 * step * k1));
    const Mat k3 = deriv(Mat(P + 0.5 * step * k2));
    const Mat k4 = deriv(Mat(P + step * k3));
    P += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += step;
    const Mat g = gain_of(P);
    const double change = (g - gain).cwiseAbs().maxCoeff() /
                          (1.0 + gain.cwiseAbs().maxCoeff());
    gain = g;
    if (change < 1e-8) {
      sol.settled = true;
      break;
    }
  }
  sol.gain = gain;
  sol.settle_time = s;
  return sol;
}

Vec sclqr_control(const SclqrModel& m, const RiccatiSolution& sol,
                  const Vec& x) {
  check_model(m);
  auto [OmB, HsH] = output_projector(m.H);
  const Vec v = -sol.gain * x;
  const Vec rhs = -m.A * x - m.K_x * (HsH * x) + OmB * v;
  return solve_with_check(m.B, Mat(rhs)).col(0);
}

NullParam null_param(const Mat& H) {
  const Eigen::Index n = H.cols();
  const Eigen::Index m = H.rows();
  if (m >= n) throw DimensionMismatch("output map leaves no nullspace");
  {
    const SpdFactor W = factor_spd(Mat(Mat::Identity(n, n)), true);
    wpinv_build(H, W);  // row-rank check, throws RankDeficient
  }
  Eigen::FullPivLU<Mat> lu(H);
  Mat kernel = lu.kernel();  // n x (n - m), full column rank

  NullParam np;
  const Eigen::Index k = kernel.cols();
  const Mat top = kernel.topRows(k);
  Eigen::FullPivLU<Mat> top_lu(top);
  if (top_lu.isInvertible()) {
    np.psi = kernel * top_lu.inverse();
    np.leading_identity = true;
    return np;
  }
  Eigen::HouseholderQR<Mat> qr(kernel);
  np.psi = qr.householderQ() * Mat::Identity(n, k);
  np.leading_identity = false;
  return np;
}

}  // namespace oed
