#pragma once

#include "oed/barrier.hpp"
#include "oed/problem.hpp"

namespace oed {

/// Derivatives (r, R) of the constraint-augmented cost at one (t, x).
/// Inactive branch: r = q, R = Q. Active branch: r = q + p2^2 Gbar^T gbar,
/// R = Q + p2^2 Gbar^T Gbar.
struct AugmentedDerivatives {
  Vec r;
  SpdFactor R_factor;
  ActiveSet active;
  double p2_used = 0.0;  ///< 0 when the active set is empty
};

/// Per-evaluation bookkeeping for one control computation.
struct ControlDiagnostics {
  int active_count = 0;
  double eta_norm = 0.0;
  double p2_used = 0.0;
  double duration_seconds = 0.0;
  bool krq_warning = false;  ///< designed mode ran with K_RQ < 1000
};

/// Assemble (r, R) from the bundle under the barrier settings and factor R.
AugmentedDerivatives assemble_rR(const EvalBundle& bundle,
                                 const BarrierConfig& cfg);

/// Minimizing direction eta = H^#_R (ybar - h) - (I - H^#_R H) R^{-1} r,
/// with the R-weighted pseudoinverse factored once and shared by both terms.
Vec eta(const EvalBundle& bundle, const AugmentedDerivatives& aug);

/// Tracking control: solve B(x) u = -f_A(x) + K_x eta for u.
/// Throws SingularInputMatrix when the solve fails or is inaccurate.
Vec oed_control(const EvalBundle& bundle, const Vec& eta_val, double K_x);

/// Convenience pipeline bundle -> assemble_rR -> eta -> oed_control, timing
/// the whole evaluation; fills `diag` when given.
Vec oed_control_eval(const ProblemDef& p, const BarrierConfig& cfg, double t,
                     const Vec& x, double K_x,
                     ControlDiagnostics* diag = nullptr);

/// Affine terms of the output-constrained closed-loop system, with
/// identity-weighted pseudoinverses.
struct ConstrainedSystemTerms {
  Vec omega_A;
  Mat Omega_B;
};

/// Compute (omega_A, Omega_B). Inactive: omega_A = -H^# h,
/// Omega_B = I - H^# H. Active: the violated constraint rows are appended and
/// omega_A gains the correction through the right pseudoinverse of Gbar.
ConstrainedSystemTerms constrained_system_terms(const EvalBundle& bundle,
                                                const BarrierConfig& cfg);

}  // namespace oed
