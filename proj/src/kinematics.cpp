#include "ampc/kinematics.hpp"

#include <cmath>

namespace ampc {

namespace {

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 drot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 0, 0, 0, 0, -s, -c, 0, c, -s;
  return r;
}

Mat3 drot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << -s, 0, c, 0, 0, 0, -c, 0, -s;
  return r;
}

Mat3 drot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << -s, -c, 0, c, -s, 0, 0, 0, 0;
  return r;
}

struct DhTransform {
  Mat3 R;
  Vec3 p;
};

DhTransform dh_transform(const DhRow& row, double q) {
  const double th = q + row.theta_offset;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  DhTransform t;
  t.R << ct, -st * ca, st * sa,
         st, ct * ca, -ct * sa,
         0, sa, ca;
  t.p << row.a * ct, row.a * st, row.d;
  return t;
}

}  // namespace

Mat3 euler_to_rotation(const Vec3& theta_B) {
  return rot_z(theta_B.z()) * rot_y(theta_B.y()) * rot_x(theta_B.x());
}

Mat3 rotation_partial_roll(const Vec3& t) {
  return rot_z(t.z()) * rot_y(t.y()) * drot_x(t.x());
}

Mat3 rotation_partial_pitch(const Vec3& t) {
  return rot_z(t.z()) * drot_y(t.y()) * rot_x(t.x());
}

Mat3 rotation_partial_yaw(const Vec3& t) {
  return drot_z(t.z()) * rot_y(t.y()) * rot_x(t.x());
}

Vec3 euler_rates_from_body_omega(const Vec3& theta_B, const Vec3& omega_B) {
  const double phi = theta_B.x(), theta = theta_B.y();
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double ct = std::cos(theta), tt = std::tan(theta);
  Mat3 m;
  m << 1, sp * tt, cp * tt,
       0, cp, -sp,
       0, sp / ct, cp / ct;
  return m * omega_B;
}

Vec3 body_omega_from_euler_rates(const Vec3& theta_B, const Vec3& rates) {
  const double phi = theta_B.x(), theta = theta_B.y();
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);
  Mat3 m;
  m << 1, 0, -st,
       0, cp, sp * ct,
       0, -sp, cp * ct;
  return m * rates;
}

FkChain fk_chain(const Vec6& q, const ArmGeometry& geo) {
  FkChain out;
  Mat3 R = Mat3::Identity();
  Vec3 p = geo.mount_offset;
  for (int i = 0; i < kNumJoints; ++i) {
    out.origin[i] = p;
    out.axis[i] = R.col(2);  // joint i rotates about the current frame z
    const DhTransform t = dh_transform(geo.dh[i], q[i]);
    p = p + R * t.p;
    R = R * t.R;
  }
  out.p_ee = p;
  return out;
}

Vec3 fk_manipulator(const Vec6& q, const ArmGeometry& geo) {
  return fk_chain(q, geo).p_ee;
}

Eigen::Matrix<double, 3, kNumJoints> jacobian_manipulator(const Vec6& q, const ArmGeometry& geo) {
  const FkChain chain = fk_chain(q, geo);
  Eigen::Matrix<double, 3, kNumJoints> J;
  for (int i = 0; i < kNumJoints; ++i) {
    J.col(i) = chain.axis[i].cross(chain.p_ee - chain.origin[i]);
  }
  return J;
}

JacobianSplit jacobians_aerial(const QuadPose& pose, const JointConfig& joints,
                               const ArmGeometry& geo) {
  const Mat3 R = euler_to_rotation(pose.theta_B);
  const Vec3 p_EB = fk_manipulator(joints.q, geo);
  const Eigen::Matrix<double, 3, kNumJoints> J_m = jacobian_manipulator(joints.q, geo);

  JacobianSplit split;
  split.J_c.block<3, 3>(0, 0).setIdentity();
  split.J_c.col(3) = rotation_partial_yaw(pose.theta_B) * p_EB;
  split.J_c.block<3, kNumJoints>(0, 4) = R * J_m;
  split.J_u.col(0) = rotation_partial_roll(pose.theta_B) * p_EB;
  split.J_u.col(1) = rotation_partial_pitch(pose.theta_B) * p_EB;
  return split;
}

ArmGeometry default_arm_geometry() {
  // Shoulder yaw/pitch, elbow, spherical-style wrist. Link extents sum to a
  // 0.38 m reach from the mount point.
  ArmGeometry geo;
  geo.dh[0] = {0.0, -M_PI / 2, -0.06, 0.0};
  geo.dh[1] = {0.14, 0.0, 0.0, M_PI / 2};
  geo.dh[2] = {0.04, -M_PI / 2, 0.0, 0.0};
  geo.dh[3] = {0.0, M_PI / 2, -0.10, 0.0};
  geo.dh[4] = {0.0, -M_PI / 2, 0.0, 0.0};
  geo.dh[5] = {0.0, 0.0, -0.04, 0.0};
  geo.mount_offset = Vec3(0.0, 0.0, -0.05);
  return geo;
}

}  // namespace ampc
