#pragma once

#include "ampc/types.hpp"

namespace ampc {

struct TrajectorySample {
  Vec3 p = Vec3::Zero();    // desired end-effector position (m)
  Vec3 v = Vec3::Zero();    // commanded end-effector velocity (m/s)
  double d_g = 0.0;         // trajectory max diameter (m)
  double t = 0.0;
};

struct CloverParams {
  double scale = 0.5;
  double period = 40.0;
  Vec3 center = Vec3(0.0, 0.0, 1.0);
};

// Planar rose curve r(theta) = scale * cos(2 theta) at fixed height.
TrajectorySample clover_trajectory(double t, const CloverParams& params);

struct MovingTargetParams {
  Vec3 start = Vec3(0.0, 1.4, 0.0);
  Vec3 velocity = Vec3(0.0, 0.05, 0.0);
  double follow_height = 0.6;
};

TrajectorySample moving_target_trajectory(double t, const MovingTargetParams& params);

// Body-frame figure-eight inside the learning-space box, for data collection.
struct LemniscateParams {
  Vec3 center = Vec3::Zero();     // body frame
  Vec3 half_extent = Vec3(0.06, 0.055, 0.035);
  double period = 30.0;
};

// Returns position and velocity in the body frame.
void lemniscate_body(double t, const LemniscateParams& params, Vec3& p, Vec3& v);

// Horizontal circle for the quad during collection; accel is analytic.
struct CircleParams {
  Vec3 center = Vec3(0.0, 0.0, 1.0);
  double radius = 0.10;
  double period = 20.0;
};

void circle_reference(double t, const CircleParams& params, Vec3& p, Vec3& v, Vec3& a);

}  // namespace ampc
