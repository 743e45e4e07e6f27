#include "oed/problem.hpp"

#include <algorithm>
#include <cmath>

namespace oed {

namespace {

void require_finite_vec(const Vec& v, const char* name) {
  if (!v.allFinite()) throw NonFiniteEvaluation(name);
}

void require_finite_mat(const Mat& m, const char* name) {
  if (!m.allFinite()) throw NonFiniteEvaluation(name);
}

void require_vec_dim(const Vec& v, Eigen::Index n, const char* name) {
  if (v.size() != n) {
    throw DimensionMismatch(std::string(name) + " length " +
                            std::to_string(v.size()) + ", expected " +
                            std::to_string(n));
  }
}

void require_mat_dim(const Mat& m, Eigen::Index r, Eigen::Index c,
                     const char* name) {
  if (m.rows() != r || m.cols() != c) {
    throw DimensionMismatch(std::string(name) + " is " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " +
                            std::to_string(r) + "x" + std::to_string(c));
  }
}

}  // namespace

EvalBundle eval_bundle(const ProblemDef& p, double t, const Vec& x) {
  require_vec_dim(x, p.d_x, "state");
  EvalBundle b;
  b.t = t;
  b.x = x;
  b.diagonal_q = p.diagonal_q;

  b.f_A = p.f_A(t, x);
  require_vec_dim(b.f_A, p.d_x, "f_A");
  require_finite_vec(b.f_A, "f_A");

  b.B = p.B(t, x);
  require_mat_dim(b.B, p.d_x, p.d_x, "B");
  require_finite_mat(b.B, "B");

  b.h = p.h(t, x);
  require_vec_dim(b.h, p.d_y, "h");
  require_finite_vec(b.h, "h");

  b.H = p.H(t, x);
  require_mat_dim(b.H, p.d_y, p.d_x, "H");
  require_finite_mat(b.H, "H");

  b.ybar = p.ybar(t);
  require_vec_dim(b.ybar, p.d_y, "ybar");
  require_finite_vec(b.ybar, "ybar");

  b.sigma = p.sigma(t, x);
  if (!std::isfinite(b.sigma)) throw NonFiniteEvaluation("sigma");

  b.q = p.q(t, x);
  require_vec_dim(b.q, p.d_x, "q");
  require_finite_vec(b.q, "q");

  b.Q = p.Q(t, x);
  require_mat_dim(b.Q, p.d_x, p.d_x, "Q");
  require_finite_mat(b.Q, "Q");

  b.G = p.G(t);
  require_mat_dim(b.G, p.d_c, p.d_x, "G");
  require_finite_mat(b.G, "G");

  b.c = p.c(t);
  require_vec_dim(b.c, p.d_c, "c");
  require_finite_vec(b.c, "c");

  return b;
}

DerivCheckReport check_derivatives(const ProblemDef& p, double t, const Vec& x,
                                   double fd_step) {
  DerivCheckReport rep;
  rep.step = std::clamp(fd_step, 1e-8, 1e-3);
  const double eps = rep.step;
  const Eigen::Index n = p.d_x;

  const Vec q0 = p.q(t, x);
  const Mat Q0 = p.Q(t, x);
  const Mat H0 = p.H(t, x);

  Vec q_fd(n);
  Mat Q_fd(n, n);
  Mat H_fd(p.d_y, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp(j) += eps;
    xm(j) -= eps;
    q_fd(j) = (p.sigma(t, xp) - p.sigma(t, xm)) / (2.0 * eps);
    Q_fd.col(j) = (p.q(t, xp) - p.q(t, xm)) / (2.0 * eps);
    H_fd.col(j) = (p.h(t, xp) - p.h(t, xm)) / (2.0 * eps);
  }

  rep.q_error =
      (q_fd - q0).cwiseAbs().maxCoeff() / (1.0 + q0.cwiseAbs().maxCoeff());
  rep.Q_error =
      (Q_fd - Q0).cwiseAbs().maxCoeff() / (1.0 + Q0.cwiseAbs().maxCoeff());
  rep.H_error =
      (H_fd - H0).cwiseAbs().maxCoeff() / (1.0 + H0.cwiseAbs().maxCoeff());
  return rep;
}

ProblemDef frozen(const ProblemDef& p, double t_star) {
  ProblemDef f = p;
  f.f_A = [p, t_star](double, const Vec& x) { return p.f_A(t_star, x); };
  f.B = [p, t_star](double, const Vec& x) { return p.B(t_star, x); };
  f.h = [p, t_star](double, const Vec& x) { return p.h(t_star, x); };
  f.H = [p, t_star](double, const Vec& x) { return p.H(t_star, x); };
  f.ybar = [p, t_star](double) { return p.ybar(t_star); };
  f.sigma = [p, t_star](double, const Vec& x) { return p.sigma(t_star, x); };
  f.q = [p, t_star](double, const Vec& x) { return p.q(t_star, x); };
  f.Q = [p, t_star](double, const Vec& x) { return p.Q(t_star, x); };
  f.G = [p, t_star](double) { return p.G(t_star); };
  f.c = [p, t_star](double) { return p.c(t_star); };
  return f;
}

}  // namespace oed
