#pragma once

#include "ampc/types.hpp"

#include <vector>

namespace ampc {

// Learned linear-velocity residual and its 24-state embedding (entries at the
// actual-velocity slots, zero elsewhere).
struct ResidualDelta {
  Vec3 delta = Vec3::Zero();

  StateX embedding() const {
    StateX x = StateX::Zero();
    for (int axis = 0; axis < 3; ++axis) x[ix_vel(axis)] = delta[axis];
    return x;
  }
};

// Exact 24-state discrete model x_{k+1} = A x_k + B u_k + C x_res,k.
// A is block diagonal: three 4x4 quad axis blocks then six 2x2 joint blocks.
struct DiscreteModel {
  Eigen::Matrix<double, kStateDim, kStateDim> A;
  Eigen::Matrix<double, kStateDim, kInputDim> B;
  Eigen::Matrix<double, kStateDim, kStateDim> C;
  double dt = 0.0;
  Vec3 k_b = Vec3::Zero();
};

// Equivalent closed-loop quadcopter velocity: K_B (p_des - p) + delta.
Vec3 equivalent_velocity(const Vec3& p_B, const Vec3& p_B_des, const Vec3& k_b,
                         const Vec3& delta);

// Throws std::invalid_argument on dt <= 0 or non-positive gains.
DiscreteModel build_discrete_model(const Vec3& k_b, double dt);

// Baseline variant: the quad axis blocks become plain double integrators with
// the actual states mirroring the desired ones (no closed-loop lag, no
// residual injection).
DiscreteModel build_integrator_model(double dt);

StateX predict_step(const DiscreteModel& model, const StateX& x, const ControlU& u,
                    const ResidualDelta& res);

// Repeated predict_step with the residual held constant. Returns N+1 states
// including x0.
std::vector<StateX> rollout(const DiscreteModel& model, const StateX& x0,
                            const std::vector<ControlU>& u_seq, const Vec3& delta_held);

}  // namespace ampc
