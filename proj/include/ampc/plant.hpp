#pragma once

#include "ampc/kinematics.hpp"
#include "ampc/types.hpp"

#include <cstdint>
#include <deque>
#include <random>

namespace ampc {

// Per-axis: bias + two tones + low-pass noise, applied as accelerations.
struct DisturbanceConfig {
  Vec3 bias = Vec3::Zero();
  Vec3 amp1 = Vec3::Zero();
  Vec3 freq1 = Vec3::Zero();  // Hz
  Vec3 phase1 = Vec3::Zero();
  Vec3 amp2 = Vec3::Zero();
  Vec3 freq2 = Vec3::Zero();
  Vec3 phase2 = Vec3::Zero();
  double noise_std = 0.0;     // stationary accel std (m/s^2)
  double noise_tau = 0.5;     // low-pass time constant (s)
  std::uint32_t seed = 0;
};

struct PlantConfig {
  Vec3 omega_n = Vec3(16.675, 16.675, 5.95);
  double zeta = 1.0;
  double attitude_tau = 0.15;
  double gravity = 9.81;
  double kp_joint = 400.0;
  double kd_joint = 40.0;
  Vec6 joint_min = Vec6::Constant(-2.6);
  Vec6 joint_max = Vec6::Constant(2.6);
  double substep = 0.002;
  double mass_arm = 1.2;
  double mass_total = 3.8;
  bool enable_coupling = true;
  DisturbanceConfig disturbance;
  double envelope = 50.0;  // any |position|, |velocity| or |rate| beyond this is divergence
};

struct PlantState {
  Vec3 p_B = Vec3::Zero();
  Vec3 v_B = Vec3::Zero();
  Vec3 a_B = Vec3::Zero();
  Vec3 theta_B = Vec3::Zero();    // roll, pitch, yaw
  Vec3 theta_dot = Vec3::Zero();  // Euler angle rates
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();
  double t = 0.0;
};

// References are quadratic in time within a control period, consistent with
// commands produced by double integration of accelerations.
struct PlantCommand {
  Vec3 p_B_des = Vec3::Zero();
  Vec3 v_B_des = Vec3::Zero();
  Vec3 a_B_des = Vec3::Zero();
  Vec6 q_des = Vec6::Zero();
  Vec6 qdot_des = Vec6::Zero();
  Vec6 qddot_des = Vec6::Zero();
};

// Equal-mass arm center: mean of the moving joint origins and the tool point.
Vec3 arm_com_body(const Vec6& q, const ArmGeometry& geo);

using CoMHistory = std::deque<Vec3>;

// Reaction acceleration on the quad from arm motion: minus the mass ratio
// times the finite-difference acceleration of the arm center in the world
// frame. Zero until three history samples exist.
Vec3 coupling_disturbance(const CoMHistory& com_world, double mass_ratio, double step);

// Ground-truth simulator: second-order closed-loop quad position servo
// (reference velocity smooths the in-cycle position reference but is not fed
// forward into the damping), PD joints, quasi-static tilt through a
// first-order lag, fixed-substep RK4. Deliberately richer than the
// first-order equivalent model the controller carries; the gap is what
// residual learning captures.
class Plant {
 public:
  Plant(const PlantConfig& config, const ArmGeometry& geometry, const PlantState& initial);

  // Advances one control period using ceil(dt/substep) equal substeps.
  // Returns false once any state leaves the divergence envelope.
  bool step(const PlantCommand& cmd, double dt);

  const PlantState& state() const { return s_; }
  bool diverged() const { return diverged_; }
  int limit_events() const { return limit_events_; }
  const Vec3& external_disturbance() const { return d_ext_; }
  const Vec3& coupling() const { return d_couple_; }

 private:
  PlantConfig cfg_;
  ArmGeometry geo_;
  PlantState s_;
  CoMHistory com_history_;
  Vec3 noise_ = Vec3::Zero();
  Vec3 d_ext_ = Vec3::Zero();
  Vec3 d_couple_ = Vec3::Zero();
  std::mt19937 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  int limit_events_ = 0;
  bool diverged_ = false;
};

}  // namespace ampc
