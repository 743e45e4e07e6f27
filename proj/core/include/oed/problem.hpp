#pragma once

#include <functional>
#include <string>

#include "oed/linalg.hpp"

namespace oed {

/// A control problem instance: dynamics, output map, cost derivatives, and
/// inequality constraints, all as analytic evaluators.
struct ProblemDef {
  int d_x = 0;  ///< state dimension
  int d_y = 0;  ///< output dimension
  int d_c = 0;  ///< number of inequality rows

  std::function<Vec(double, const Vec&)> f_A;    ///< drift, d_x
  std::function<Mat(double, const Vec&)> B;      ///< input matrix, d_x x d_x
  std::function<Vec(double, const Vec&)> h;      ///< output map, d_y
  std::function<Mat(double, const Vec&)> H;      ///< output Jacobian, d_y x d_x
  std::function<Vec(double)> ybar;               ///< output target, d_y
  std::function<double(double, const Vec&)> sigma;  ///< scalar cost
  std::function<Vec(double, const Vec&)> q;      ///< cost gradient, d_x
  std::function<Mat(double, const Vec&)> Q;      ///< cost Hessian, d_x x d_x
  std::function<Mat(double)> G;                  ///< constraint rows, d_c x d_x
  std::function<Vec(double)> c;                  ///< constraint offsets, d_c

  bool diagonal_q = false;  ///< hint: Q(t,x) is diagonal for all inputs
};

/// Everything the control law needs at one (t, x), materialized and checked.
struct EvalBundle {
  double t = 0.0;
  Vec x;
  Vec f_A;
  Vec h;
  Vec ybar;
  Vec q;
  Vec c;
  Mat B;
  Mat H;
  Mat Q;
  Mat G;
  double sigma = 0.0;
  bool diagonal_q = false;
};

/// Evaluate every problem function at (t, x) with dimension and finiteness
/// checks. Throws NonFiniteEvaluation naming the offending evaluator.
EvalBundle eval_bundle(const ProblemDef& p, double t, const Vec& x);

/// Worst relative errors of the analytic derivatives against central
/// finite differences, each normalized by (1 + max |analytic|).
struct DerivCheckReport {
  double q_error = 0.0;  ///< gradient of sigma vs q
  double Q_error = 0.0;  ///< Jacobian of q vs Q
  double H_error = 0.0;  ///< Jacobian of h vs H
  double step = 0.0;     ///< finite-difference step used
};

/// Compare analytic derivatives with central differences at (t, x).
/// `fd_step` is clamped to [1e-8, 1e-3].
DerivCheckReport check_derivatives(const ProblemDef& p, double t, const Vec& x,
                                   double fd_step = 1e-6);

/// Freeze the time argument of every evaluator at t_star.
ProblemDef frozen(const ProblemDef& p, double t_star);

}  // namespace oed
