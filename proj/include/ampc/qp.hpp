#pragma once

#include "ampc/types.hpp"

namespace ampc {

// Box-constrained convex quadratic program
//   min 0.5 u' H u + g' u + c0   s.t.  lo <= u <= hi.
// H carries the full second-order factor (cost terms enter as 2 J' W J), so
// objective values line up with summed stage costs.
struct QpProblem {
  MatX H;
  VecX g;
  double c0 = 0.0;
  VecX lo, hi;

  double objective(const VecX& u) const {
    return 0.5 * u.dot(H * u) + g.dot(u) + c0;
  }
};

struct QpResult {
  VecX u;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

struct QpOptions {
  double tol = 1e-8;  // max KKT residual
  int max_iter = 100;
};

// Deterministic projected-Newton solve: bound-active coordinates whose
// gradient points outward are frozen, the free block is solved with LDLT, and
// the step is projected back onto the box. Hitting the iteration limit
// returns the best feasible iterate flagged non-converged.
QpResult solve_qp(const QpProblem& qp, const QpOptions& opts, const VecX* warm_start = nullptr);

}  // namespace ampc
