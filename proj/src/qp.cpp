#include "ampc/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ampc {

namespace {

double kkt_residual(const VecX& u, const VecX& grad, const VecX& lo, const VecX& hi) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double ri;
    if (u[i] <= lo[i])
      ri = std::max(0.0, -grad[i]);
    else if (u[i] >= hi[i])
      ri = std::max(0.0, grad[i]);
    else
      ri = std::abs(grad[i]);
    r = std::max(r, ri);
  }
  return r;
}

VecX clamp(const VecX& u, const VecX& lo, const VecX& hi) {
  return u.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

QpResult solve_qp(const QpProblem& qp, const QpOptions& opts, const VecX* warm_start) {
  const Eigen::Index n = qp.g.size();
  QpResult res;
  res.u = warm_start && warm_start->size() == n ? clamp(*warm_start, qp.lo, qp.hi)
                                                : clamp(VecX::Zero(n), qp.lo, qp.hi);

  double best_obj = qp.objective(res.u);
  VecX best_u = res.u;

  std::vector<Eigen::Index> free_idx;
  free_idx.reserve(static_cast<std::size_t>(n));

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    res.iterations = iter;
    const VecX grad = qp.H * res.u + qp.g;
    res.kkt_residual = kkt_residual(res.u, grad, qp.lo, qp.hi);
    if (res.kkt_residual <= opts.tol) {
      res.converged = true;
      return res;
    }

    free_idx.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lo = res.u[i] <= qp.lo[i] && grad[i] > 0.0;
      const bool at_hi = res.u[i] >= qp.hi[i] && grad[i] < 0.0;
      if (!at_lo && !at_hi) free_idx.push_back(i);
    }
    if (free_idx.empty()) break;  // every violation is on a pinned coordinate

    const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
    MatX Hff(nf, nf);
    VecX gf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      gf[a] = grad[free_idx[a]];
      for (Eigen::Index b = 0; b < nf; ++b) Hff(a, b) = qp.H(free_idx[a], free_idx[b]);
    }

    VecX df = Eigen::LDLT<MatX>(Hff).solve(-gf);
    if (!df.allFinite() || gf.dot(df) >= 0.0) {
      // Singular or indefinite free block: fall back to a scaled gradient step.
      double scale = Hff.diagonal().maxCoeff();
      if (!(scale > 0.0)) scale = 1.0;
      df = -gf / scale;
    }

    VecX step = VecX::Zero(n);
    for (Eigen::Index a = 0; a < nf; ++a) step[free_idx[a]] = df[a];

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      const VecX cand = clamp(res.u + alpha * step, qp.lo, qp.hi);
      const double obj = qp.objective(cand);
      if (obj <= best_obj + 1e-14 * (1.0 + std::abs(best_obj))) {
        res.u = cand;
        if (obj < best_obj) {
          best_obj = obj;
          best_u = cand;
        }
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no descent left at this scale
  }

  res.u = best_u;
  const VecX grad = qp.H * res.u + qp.g;
  res.kkt_residual = kkt_residual(res.u, grad, qp.lo, qp.hi);
  res.converged = res.kkt_residual <= opts.tol;
  return res;
}

}  // namespace ampc
