#pragma once

#include "ampc/qp.hpp"
#include "ampc/types.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace ampc::test {

// Central-difference Jacobian of an R^n -> R^m map.
inline MatX fd_jacobian(const std::function<VecX(const VecX&)>& f, const VecX& x,
                        double eps = 1e-6) {
  const VecX y0 = f(x);
  MatX J(y0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    VecX xp = x, xm = x;
    xp[j] += eps;
    xm[j] -= eps;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * eps);
  }
  return J;
}

// Classic fixed-step RK4 on dx/dt = deriv(x), run to time T in `steps` steps.
inline VecX rk4_integrate(const std::function<VecX(const VecX&)>& deriv, VecX x, double T,
                          int steps) {
  const double h = T / steps;
  for (int i = 0; i < steps; ++i) {
    const VecX k1 = deriv(x);
    const VecX k2 = deriv(x + 0.5 * h * k1);
    const VecX k3 = deriv(x + 0.5 * h * k2);
    const VecX k4 = deriv(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

// Independent box-QP reference: projected gradient with a fixed step of
// 1/L (L = largest Hessian eigenvalue) run to tight tolerance. Slow and
// simple on purpose -- nothing shared with the production solver.
inline VecX projected_gradient_qp(const QpProblem& qp, int max_iter = 200000,
                                  double grad_tol = 1e-10) {
  const Eigen::SelfAdjointEigenSolver<MatX> es(qp.H);
  const double L = es.eigenvalues().maxCoeff();
  const double step = 1.0 / L;
  VecX u = qp.lo.cwiseMax(VecX::Zero(qp.g.size())).cwiseMin(qp.hi);
  for (int i = 0; i < max_iter; ++i) {
    const VecX grad = qp.H * u + qp.g;
    const VecX next = (u - step * grad).cwiseMax(qp.lo).cwiseMin(qp.hi);
    if ((next - u).lpNorm<Eigen::Infinity>() < grad_tol) return next;
    u = next;
  }
  return u;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace ampc::test
