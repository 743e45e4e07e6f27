#pragma once

#include "oed/linalg.hpp"

namespace oed {

/// Linear plant with an output-nulling objective and quadratic costs.
struct SclqrModel {
  Mat A;
  Mat B;
  Mat H;
  Mat Q_xx;
  Mat Q_uu;
  double K_x = 500.0;
};

/// Closed-loop terms of the admissible transformation:
/// Omega_A = -K_x H^# H drives the output to zero, Omega_B = I - H^# H
/// projects the free input onto the output nullspace.
struct SclqrProjectors {
  Mat Omega_A;
  Mat Omega_B;
};

SclqrProjectors build_projectors(const SclqrModel& m);

/// Which substitution produces the transformed cost matrices.
enum class LqCostForm {
  exact_substitution,  ///< u = B^-1((Omega_A - A) x + Omega_B v)
  as_printed           ///< cost written directly in Omega_A, Omega_B
};

/// Unconstrained LQ data for the transformed dynamics
/// xdot = A_t x + B_t v with cost x^T Qxx_t x + v^T Qvv_t v + 2 x^T N_t v.
struct TransformedLq {
  Mat A_t;
  Mat B_t;
  Mat Qxx_t;
  Mat Qvv_t;
  Mat N_t;
};

TransformedLq transformed_lq(const SclqrModel& m,
                             LqCostForm form = LqCostForm::exact_substitution);

/// Stationary feedback for the transformed problem, v = -gain x.
struct RiccatiSolution {
  Mat gain;
  double settle_time = 0.0;         ///< backward horizon integrated
  double regularization_eps = 0.0;  ///< ridge added to Qvv_t
  bool settled = false;             ///< false when horizon_max was reached
};

/// Integrate the finite-horizon Riccati equation backward from zero terminal
/// weight (RK4, step 1e-3) until the relative gain change drops below 1e-8
/// or horizon_max is reached. The cross term is absorbed by the standard
/// completion-of-squares shift. `eps` < 0 selects
/// 1e-9 trace(Qvv_t)/d_x.
RiccatiSolution riccati_backward(const TransformedLq& lq, double eps = -1.0,
                                 double horizon_max = 50.0);

/// Realize the transformed feedback on the original plant:
/// u = B^-1(-A x - K_x H^# H x + (I - H^# H) v) with v = -gain x.
Vec sclqr_control(const SclqrModel& m, const RiccatiSolution& sol,
                  const Vec& x);

/// Nullspace basis of H with H psi = 0.
struct NullParam {
  Mat psi;
  bool leading_identity = false;  ///< top square block normalized to I
};

/// Basis of the nullspace of a wide full-row-rank H, normalized so the top
/// (d_x - d_y) square block is the identity when invertible; otherwise an
/// orthonormal basis is returned with leading_identity = false.
NullParam null_param(const Mat& H);

}  // namespace oed
