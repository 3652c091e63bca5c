#include "ampc/model.hpp"

#include <stdexcept>

namespace ampc {

Vec3 equivalent_velocity(const Vec3& p_B, const Vec3& p_B_des, const Vec3& k_b,
                         const Vec3& delta) {
  return k_b.cwiseProduct(p_B_des - p_B) + delta;
}

DiscreteModel build_discrete_model(const Vec3& k_b, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("build_discrete_model: dt must be positive");
  if (!(k_b.minCoeff() > 0.0))
    throw std::invalid_argument("build_discrete_model: gains must be positive");

  DiscreteModel m;
  m.dt = dt;
  m.k_b = k_b;
  m.A.setZero();
  m.B.setZero();
  m.C.setZero();

  const double dt2 = dt * dt;
  for (int axis = 0; axis < 3; ++axis) {
    const double k = k_b[axis];
    const int r = 4 * axis;
    Eigen::Matrix4d a1;
    a1 << 1.0 - k * dt, 0.0, k * dt, k * dt2,
          -k, 0.0, k, k * dt,
          0.0, 0.0, 1.0, dt,
          0.0, 0.0, 0.0, 1.0;
    m.A.block<4, 4>(r, r) = a1;
    m.B.block<4, 1>(r, axis) << k * dt2 * dt / 2.0, k * dt2 / 2.0, dt2 / 2.0, dt;
    Eigen::Matrix4d c1 = Eigen::Matrix4d::Zero();
    c1(0, 1) = dt;
    c1(1, 1) = 1.0;
    m.C.block<4, 4>(r, r) = c1;
  }
  for (int j = 0; j < kNumJoints; ++j) {
    const int r = 12 + 2 * j;
    m.A.block<2, 2>(r, r) << 1.0, dt, 0.0, 1.0;
    m.B.block<2, 1>(r, 3 + j) << dt2 / 2.0, dt;
  }
  return m;
}

DiscreteModel build_integrator_model(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("build_integrator_model: dt must be positive");

  DiscreteModel m;
  m.dt = dt;
  m.k_b = Vec3::Zero();
  m.A.setZero();
  m.B.setZero();
  m.C.setZero();

  const double dt2 = dt * dt;
  for (int axis = 0; axis < 3; ++axis) {
    const int r = 4 * axis;
    Eigen::Matrix4d a1 = Eigen::Matrix4d::Zero();
    a1(0, 0) = 1.0; a1(0, 1) = dt;
    a1(1, 1) = 1.0;
    a1(2, 2) = 1.0; a1(2, 3) = dt;
    a1(3, 3) = 1.0;
    m.A.block<4, 4>(r, r) = a1;
    m.B.block<4, 1>(r, axis) << dt2 / 2.0, dt, dt2 / 2.0, dt;
  }
  for (int j = 0; j < kNumJoints; ++j) {
    const int r = 12 + 2 * j;
    m.A.block<2, 2>(r, r) << 1.0, dt, 0.0, 1.0;
    m.B.block<2, 1>(r, 3 + j) << dt2 / 2.0, dt;
  }
  return m;
}

StateX predict_step(const DiscreteModel& model, const StateX& x, const ControlU& u,
                    const ResidualDelta& res) {
  return model.A * x + model.B * u + model.C * res.embedding();
}

std::vector<StateX> rollout(const DiscreteModel& model, const StateX& x0,
                            const std::vector<ControlU>& u_seq, const Vec3& delta_held) {
  ResidualDelta res;
  res.delta = delta_held;
  std::vector<StateX> states;
  states.reserve(u_seq.size() + 1);
  states.push_back(x0);
  for (const ControlU& u : u_seq) {
    states.push_back(predict_step(model, states.back(), u, res));
  }
  return states;
}

}  // namespace ampc
