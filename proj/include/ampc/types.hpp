#pragma once

#include <Eigen/Dense>

#include <array>

namespace ampc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr int kNumJoints = 6;
inline constexpr int kStateDim = 24;
inline constexpr int kInputDim = 9;

// State layout: three quad axis blocks [p, pdot, p_des, pdot_des] followed by
// six joint blocks [q_i, qdot_i].
using StateX = Eigen::Matrix<double, kStateDim, 1>;
// Input layout: desired quad linear accelerations (3) then desired joint
// accelerations (6).
using ControlU = Eigen::Matrix<double, kInputDim, 1>;

constexpr int ix_pos(int axis) { return 4 * axis; }
constexpr int ix_vel(int axis) { return 4 * axis + 1; }
constexpr int ix_pos_des(int axis) { return 4 * axis + 2; }
constexpr int ix_vel_des(int axis) { return 4 * axis + 3; }
constexpr int ix_joint(int j) { return 12 + 2 * j; }
constexpr int ix_joint_rate(int j) { return 13 + 2 * j; }

struct JointConfig {
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();
};

// Attitude is stored as (roll, pitch, yaw) and composed in ZYX order.
struct QuadPose {
  Vec3 p_B = Vec3::Zero();
  Vec3 theta_B = Vec3::Zero();
  Vec3 v_B = Vec3::Zero();
  Vec3 omega_B = Vec3::Zero();
};

}  // namespace ampc
