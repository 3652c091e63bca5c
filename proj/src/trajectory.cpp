#include "ampc/trajectory.hpp"

#include <cmath>

namespace ampc {

TrajectorySample clover_trajectory(double t, const CloverParams& params) {
  const double omega = 2.0 * M_PI / params.period;
  const double th = omega * t;
  const double r = params.scale * std::cos(2.0 * th);
  const double dr = -2.0 * params.scale * std::sin(2.0 * th);

  TrajectorySample s;
  s.t = t;
  s.p = params.center + Vec3(r * std::cos(th), r * std::sin(th), 0.0);
  s.v = Vec3(dr * std::cos(th) - r * std::sin(th), dr * std::sin(th) + r * std::cos(th), 0.0) *
        omega;
  s.d_g = 2.0 * params.scale;
  return s;
}

TrajectorySample moving_target_trajectory(double t, const MovingTargetParams& params) {
  TrajectorySample s;
  s.t = t;
  s.p = params.start + params.velocity * t + Vec3(0.0, 0.0, params.follow_height);
  s.v = params.velocity;
  s.d_g = 0.0;  // point target
  return s;
}

void lemniscate_body(double t, const LemniscateParams& params, Vec3& p, Vec3& v) {
  const double omega = 2.0 * M_PI / params.period;
  const double th = omega * t;
  const Vec3& a = params.half_extent;
  p = params.center + Vec3(a.x() * std::sin(th), a.y() * std::sin(th) * std::cos(th),
                           a.z() * std::sin(2.0 * th + M_PI / 4.0));
  v = Vec3(a.x() * std::cos(th), a.y() * std::cos(2.0 * th),
           2.0 * a.z() * std::cos(2.0 * th + M_PI / 4.0)) *
      omega;
}

void circle_reference(double t, const CircleParams& params, Vec3& p, Vec3& v, Vec3& a) {
  const double omega = 2.0 * M_PI / params.period;
  const double th = omega * t;
  p = params.center + Vec3(params.radius * std::cos(th), params.radius * std::sin(th), 0.0);
  v = Vec3(-params.radius * std::sin(th), params.radius * std::cos(th), 0.0) * omega;
  a = Vec3(-params.radius * std::cos(th), -params.radius * std::sin(th), 0.0) * omega * omega;
}

}  // namespace ampc
