#pragma once

#include "ampc/types.hpp"

namespace ampc {

// One standard Denavit-Hartenberg row per revolute joint:
// T_i = RotZ(theta_i + theta_offset) * TransZ(d) * TransX(a) * RotX(alpha).
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};

struct ArmGeometry {
  std::array<DhRow, kNumJoints> dh{};
  Vec3 mount_offset = Vec3::Zero();  // arm base origin in the body frame
};

// Joint frame origins and z axes in the body frame, plus the end-effector
// point. origin[i]/axis[i] belong to the frame joint i rotates about.
struct FkChain {
  std::array<Vec3, kNumJoints> origin{};
  std::array<Vec3, kNumJoints> axis{};
  Vec3 p_ee = Vec3::Zero();
};

// Actuated/underactuated split of the end-effector velocity map:
//   pdot_E = J_c * [pdot_B; psidot_B; qdot] + J_u * [phidot_B; thetadot_B].
struct JacobianSplit {
  Eigen::Matrix<double, 3, 10> J_c = Eigen::Matrix<double, 3, 10>::Zero();
  Eigen::Matrix<double, 3, 2> J_u = Eigen::Matrix<double, 3, 2>::Zero();
};

// ZYX composition: R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 euler_to_rotation(const Vec3& theta_B);

// Partial derivatives of euler_to_rotation with respect to each angle.
Mat3 rotation_partial_roll(const Vec3& theta_B);
Mat3 rotation_partial_pitch(const Vec3& theta_B);
Mat3 rotation_partial_yaw(const Vec3& theta_B);

// Euler angle rates equivalent to a body angular velocity at this attitude.
Vec3 euler_rates_from_body_omega(const Vec3& theta_B, const Vec3& omega_B);
Vec3 body_omega_from_euler_rates(const Vec3& theta_B, const Vec3& euler_rates);

FkChain fk_chain(const Vec6& q, const ArmGeometry& geo);

// End-effector position in the body frame.
Vec3 fk_manipulator(const Vec6& q, const ArmGeometry& geo);

inline Vec3 compose_end_effector(const Vec3& p_B, const Mat3& R_B, const Vec3& p_EB) {
  return p_B + R_B * p_EB;
}

// Positional Jacobian of fk_manipulator, 3x6, in the body frame.
Eigen::Matrix<double, 3, kNumJoints> jacobian_manipulator(const Vec6& q, const ArmGeometry& geo);

JacobianSplit jacobians_aerial(const QuadPose& pose, const JointConfig& joints,
                               const ArmGeometry& geo);

// Default 6-DOF serial arm. Reach 0.38 m, mounted beneath the body origin.
ArmGeometry default_arm_geometry();

}  // namespace ampc
