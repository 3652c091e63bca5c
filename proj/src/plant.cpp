#include "ampc/plant.hpp"

#include <cmath>

namespace ampc {
namespace {

constexpr int kOdeDim = 20;  // p(3) v(3) roll/pitch(2) q(6) qdot(6)
using OdeState = Eigen::Matrix<double, kOdeDim, 1>;

OdeState pack(const PlantState& s) {
  OdeState y;
  y.segment<3>(0) = s.p_B;
  y.segment<3>(3) = s.v_B;
  y.segment<2>(6) = s.theta_B.head<2>();
  y.segment<kNumJoints>(8) = s.q;
  y.segment<kNumJoints>(14) = s.qdot;
  return y;
}

struct OdeInputs {
  const PlantConfig* cfg;
  const PlantCommand* cmd;
  Vec3 d_hold;       // coupling plus noise, constant over a substep
  double t_cycle;    // seconds since the command was issued
  double t_abs;
};

Vec3 tone_disturbance(const DisturbanceConfig& d, double t) {
  Vec3 out = d.bias;
  for (int i = 0; i < 3; ++i) {
    out[i] += d.amp1[i] * std::sin(2.0 * M_PI * d.freq1[i] * t + d.phase1[i]);
    out[i] += d.amp2[i] * std::sin(2.0 * M_PI * d.freq2[i] * t + d.phase2[i]);
  }
  return out;
}

OdeState derivative(const OdeState& y, double s, const OdeInputs& in) {
  const PlantConfig& c = *in.cfg;
  const PlantCommand& u = *in.cmd;
  const double tc = in.t_cycle + s;

  const Vec3 p = y.segment<3>(0);
  const Vec3 v = y.segment<3>(3);
  const Eigen::Vector2d rp = y.segment<2>(6);
  const Vec6 q = y.segment<kNumJoints>(8);
  const Vec6 qd = y.segment<kNumJoints>(14);

  const Vec3 p_ref = u.p_B_des + u.v_B_des * tc + 0.5 * u.a_B_des * tc * tc;
  const Vec6 q_ref = u.q_des + u.qdot_des * tc + 0.5 * u.qddot_des * tc * tc;
  const Vec6 qd_ref = u.qdot_des + u.qddot_des * tc;

  const Vec3 d_ext = tone_disturbance(c.disturbance, in.t_abs + s) + in.d_hold;

  // Position servo without reference-velocity feedforward: the loop carries a
  // steady ramp lag of 2*zeta*v/omega_n, the closed-loop character the
  // first-order equivalent model approximates. Step responses are unchanged
  // by the missing feedforward, so step identification still recovers K_B.
  OdeState dy;
  dy.segment<3>(0) = v;
  dy.segment<3>(3) = c.omega_n.cwiseProduct(c.omega_n).cwiseProduct(p_ref - p) -
                     2.0 * c.zeta * c.omega_n.cwiseProduct(v) + d_ext;

  const Eigen::Vector2d rp_qs(-u.a_B_des.y() / c.gravity, u.a_B_des.x() / c.gravity);
  dy.segment<2>(6) = (rp_qs - rp) / c.attitude_tau;

  dy.segment<kNumJoints>(8) = qd;
  dy.segment<kNumJoints>(14) = c.kp_joint * (q_ref - q) + c.kd_joint * (qd_ref - qd);
  return dy;
}

}  // namespace

Vec3 arm_com_body(const Vec6& q, const ArmGeometry& geo) {
  const FkChain chain = fk_chain(q, geo);
  Vec3 sum = chain.p_ee;
  for (int i = 1; i < kNumJoints; ++i) sum += chain.origin[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(kNumJoints);
}

Vec3 coupling_disturbance(const CoMHistory& com_world, double mass_ratio, double step) {
  if (com_world.size() < 3) return Vec3::Zero();
  const std::size_t n = com_world.size();
  const Vec3 acc = (com_world[n - 1] - 2.0 * com_world[n - 2] + com_world[n - 3]) / (step * step);
  return -mass_ratio * acc;
}

Plant::Plant(const PlantConfig& config, const ArmGeometry& geometry, const PlantState& initial)
    : cfg_(config), geo_(geometry), s_(initial), rng_(config.disturbance.seed) {
  const Mat3 r = euler_to_rotation(s_.theta_B);
  com_history_.push_back(s_.p_B + r * arm_com_body(s_.q, geo_));
}

bool Plant::step(const PlantCommand& cmd, double dt) {
  if (diverged_) return false;
  const int n_sub = std::max(1, static_cast<int>(std::ceil(dt / cfg_.substep - 1e-9)));
  const double h = dt / n_sub;
  const double mass_ratio = cfg_.mass_arm / cfg_.mass_total;

  OdeInputs in;
  in.cfg = &cfg_;
  in.cmd = &cmd;

  OdeState y = pack(s_);
  double t_cycle = 0.0;

  for (int i = 0; i < n_sub; ++i) {
    d_couple_ = cfg_.enable_coupling ? coupling_disturbance(com_history_, mass_ratio, h)
                                     : Vec3::Zero();
    in.d_hold = d_couple_ + noise_;
    in.t_cycle = t_cycle;
    in.t_abs = s_.t;

    const OdeState k1 = derivative(y, 0.0, in);
    const OdeState k2 = derivative(y + 0.5 * h * k1, 0.5 * h, in);
    const OdeState k3 = derivative(y + 0.5 * h * k2, 0.5 * h, in);
    const OdeState k4 = derivative(y + h * k3, h, in);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    for (int j = 0; j < kNumJoints; ++j) {
      double& qj = y[8 + j];
      if (qj < cfg_.joint_min[j]) {
        qj = cfg_.joint_min[j];
        if (y[14 + j] < 0.0) y[14 + j] = 0.0;
        ++limit_events_;
      } else if (qj > cfg_.joint_max[j]) {
        qj = cfg_.joint_max[j];
        if (y[14 + j] > 0.0) y[14 + j] = 0.0;
        ++limit_events_;
      }
    }

    t_cycle += h;
    s_.t += h;

    if (cfg_.disturbance.noise_std > 0.0) {
      const double alpha = std::exp(-h / cfg_.disturbance.noise_tau);
      const double sigma = cfg_.disturbance.noise_std * std::sqrt(1.0 - alpha * alpha);
      for (int j = 0; j < 3; ++j) noise_[j] = alpha * noise_[j] + sigma * gauss_(rng_);
    }

    const Vec3 theta(y[6], y[7], 0.0);
    com_history_.push_back(y.segment<3>(0) + euler_to_rotation(theta) * arm_com_body(
                                                 y.segment<kNumJoints>(8), geo_));
    while (com_history_.size() > 3) com_history_.pop_front();
  }

  s_.p_B = y.segment<3>(0);
  s_.v_B = y.segment<3>(3);
  s_.theta_B = Vec3(y[6], y[7], 0.0);
  s_.q = y.segment<kNumJoints>(8);
  s_.qdot = y.segment<kNumJoints>(14);

  in.t_cycle = t_cycle - h;
  in.t_abs = s_.t - h;
  const OdeState dy = derivative(y, h, in);
  s_.a_B = dy.segment<3>(3);
  s_.theta_dot = Vec3(dy[6], dy[7], 0.0);
  d_ext_ = tone_disturbance(cfg_.disturbance, s_.t) + noise_;

  const bool out = s_.p_B.cwiseAbs().maxCoeff() > cfg_.envelope ||
                   s_.v_B.cwiseAbs().maxCoeff() > cfg_.envelope ||
                   s_.qdot.cwiseAbs().maxCoeff() > cfg_.envelope ||
                   !y.allFinite();
  if (out) diverged_ = true;
  return !diverged_;
}

}  // namespace ampc
