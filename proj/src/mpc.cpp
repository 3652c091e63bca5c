#include "ampc/mpc.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ampc {
namespace {

// Row maps from the 24-state vector into each quadratic term's residual.
// Shared by stage_cost and condense so the two stay consistent.

// End-effector velocity rows: pdot_E = J_c * [pdot_B; psidot; qdot] with the
// yaw rate held at zero, so only the velocity and joint-rate slots appear.
Eigen::Matrix<double, 3, kStateDim> velocity_rows(const FrozenData& fz) {
  Eigen::Matrix<double, 3, kStateDim> p = Eigen::Matrix<double, 3, kStateDim>::Zero();
  for (int axis = 0; axis < 3; ++axis) p.col(ix_vel(axis)) = fz.jac.J_c.col(axis);
  for (int j = 0; j < kNumJoints; ++j) p.col(ix_joint_rate(j)) = fz.jac.J_c.col(4 + j);
  return p;
}

Eigen::Matrix<double, kInputDim, kStateDim> selection_rows() {
  Eigen::Matrix<double, kInputDim, kStateDim> p =
      Eigen::Matrix<double, kInputDim, kStateDim>::Zero();
  for (int axis = 0; axis < 3; ++axis) p(axis, ix_vel(axis)) = 1.0;
  for (int j = 0; j < kNumJoints; ++j) p(3 + j, ix_joint_rate(j)) = 1.0;
  return p;
}

Eigen::Matrix<double, 3, kStateDim> manipulator_rows(const FrozenData& fz) {
  Eigen::Matrix<double, 3, kStateDim> p = Eigen::Matrix<double, 3, kStateDim>::Zero();
  for (int j = 0; j < kNumJoints; ++j) p.col(ix_joint(j)) = fz.J_m.col(j);
  return p;
}

Vec3 velocity_offset(const FrozenData& fz, int stage) {
  return fz.jac.J_u * fz.xi_u_dot - fz.ref_velocity[static_cast<std::size_t>(stage)];
}

Vec3 manipulator_offset(const FrozenData& fz) {
  return fz.p_EB0 - fz.J_m * fz.q0 - fz.p_learn_center;
}

struct BoundedEntry {
  int index;
  double lo;
  double hi;
};

std::vector<BoundedEntry> bounded_state_entries(const MpcConfig& cfg) {
  std::vector<BoundedEntry> out;
  for (int axis = 0; axis < 3; ++axis)
    out.push_back({ix_vel(axis), -cfg.quad_vel_limit, cfg.quad_vel_limit});
  for (int j = 0; j < kNumJoints; ++j) {
    out.push_back({ix_joint(j), cfg.joint_min[j], cfg.joint_max[j]});
    out.push_back({ix_joint_rate(j), -cfg.joint_rate_limit, cfg.joint_rate_limit});
  }
  return out;
}

}  // namespace

Vec3 reference_velocity(const Vec3& traj_velocity, const Vec3& p_E, const Vec3& p_E_des,
                        const Vec3& k_e) {
  return traj_velocity - k_e.cwiseProduct(p_E - p_E_des);
}

CostTerms stage_cost_terms(const StateX& x, const ControlU& u, const FrozenData& frozen,
                           int stage, const StageWeights& weights) {
  if (stage < 0 || stage >= static_cast<int>(frozen.ref_velocity.size()))
    throw std::out_of_range("stage outside the frozen horizon");
  CostTerms c;
  const Vec3 r1 = velocity_rows(frozen) * x + velocity_offset(frozen, stage);
  c.j1 = r1.dot(weights.w1.cwiseProduct(r1));
  const Vec9 r2 = selection_rows() * x;
  c.j2 = r2.dot(weights.w2.cwiseProduct(r2));
  c.j3 = u.dot(weights.w3.cwiseProduct(u));
  const Vec3 r4 = manipulator_rows(frozen) * x + manipulator_offset(frozen);
  c.j4 = r4.dot(weights.w4.cwiseProduct(r4));
  return c;
}

double stage_cost(const StateX& x, const ControlU& u, const FrozenData& frozen, int stage,
                  const StageWeights& weights) {
  return stage_cost_terms(x, u, frozen, stage, weights).total();
}

CondensedQp condense(const DiscreteModel& model, const StateX& x0, const FrozenData& frozen,
                     const StageWeights& weights, const MpcConfig& config,
                     const Vec3& delta_held) {
  const int n = config.horizon;
  if (n < 1) throw std::invalid_argument("horizon must be at least 1");
  if (frozen.ref_velocity.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("reference velocity count must be horizon + 1");
  const int dim = kInputDim * n;

  CondensedQp out;
  out.horizon = n;
  out.qp.H = MatX::Zero(dim, dim);
  out.qp.g = VecX::Zero(dim);
  out.qp.c0 = 0.0;
  out.qp.lo = VecX::Zero(dim);
  out.qp.hi = VecX::Zero(dim);
  for (int k = 0; k < n; ++k) {
    const int base = kInputDim * k;
    out.qp.lo.segment<3>(base).setConstant(-config.quad_acc_limit);
    out.qp.hi.segment<3>(base).setConstant(config.quad_acc_limit);
    out.qp.lo.segment<kNumJoints>(base + 3).setConstant(-config.joint_acc_limit);
    out.qp.hi.segment<kNumJoints>(base + 3).setConstant(config.joint_acc_limit);
  }

  const auto p1 = velocity_rows(frozen);
  const auto p2 = selection_rows();
  const auto p4 = manipulator_rows(frozen);
  const Vec3 c4 = manipulator_offset(frozen);
  const StateX drift = ResidualDelta{delta_held}.embedding();

  out.state_free.assign(static_cast<std::size_t>(n) + 1, StateX::Zero());
  out.state_sens.assign(static_cast<std::size_t>(n) + 1, MatX::Zero(kStateDim, dim));
  out.state_free[0] = x0;

  for (int k = 1; k <= n; ++k) {
    auto& gk = out.state_sens[static_cast<std::size_t>(k)];
    const auto& gp = out.state_sens[static_cast<std::size_t>(k) - 1];
    const int prev_cols = kInputDim * (k - 1);
    if (prev_cols > 0)
      gk.leftCols(prev_cols).noalias() = model.A * gp.leftCols(prev_cols);
    gk.middleCols(prev_cols, kInputDim) = model.B;
    out.state_free[static_cast<std::size_t>(k)] =
        model.A * out.state_free[static_cast<std::size_t>(k) - 1] + model.C * drift;
  }

  auto add_state_term = [&](int k, const auto& rows, const VecX& offset, const VecX& w) {
    const VecX m0 = rows * out.state_free[static_cast<std::size_t>(k)] + offset;
    out.qp.c0 += m0.dot(w.cwiseProduct(m0));
    const int nc = kInputDim * k;
    if (nc == 0) return;
    const MatX mk = rows * out.state_sens[static_cast<std::size_t>(k)].leftCols(nc);
    out.qp.H.topLeftCorner(nc, nc).noalias() += 2.0 * mk.transpose() * w.asDiagonal() * mk;
    out.qp.g.head(nc).noalias() += 2.0 * mk.transpose() * w.cwiseProduct(m0);
  };

  const VecX w1 = weights.w1, w2 = weights.w2, w4 = weights.w4;
  for (int k = 0; k <= n; ++k) {
    add_state_term(k, p1, velocity_offset(frozen, k), w1);
    add_state_term(k, p2, VecX::Zero(kInputDim), w2);
    add_state_term(k, p4, c4, w4);
    if (k < n) {
      const int base = kInputDim * k;
      for (int i = 0; i < kInputDim; ++i) out.qp.H(base + i, base + i) += 2.0 * weights.w3[i];
    }
  }
  return out;
}

QpResult solve_condensed(CondensedQp& cqp, const MpcConfig& config, const VecX* warm_start) {
  QpOptions opts;
  opts.tol = config.qp_tol;
  opts.max_iter = config.qp_max_iter;
  QpResult res = solve_qp(cqp.qp, opts, warm_start);

  const auto entries = bounded_state_entries(config);
  const double rho = config.state_penalty;
  for (int pass = 0; pass < config.state_penalty_passes; ++pass) {
    int added = 0;
    for (int k = 1; k <= cqp.horizon; ++k) {
      const auto& gk = cqp.state_sens[static_cast<std::size_t>(k)];
      const StateX xk =
          cqp.state_free[static_cast<std::size_t>(k)] + gk * res.u;
      for (const auto& e : entries) {
        double bound;
        if (xk[e.index] > e.hi)
          bound = e.hi;
        else if (xk[e.index] < e.lo)
          bound = e.lo;
        else
          continue;
        const auto row = gk.row(e.index);
        const double m0 = cqp.state_free[static_cast<std::size_t>(k)][e.index] - bound;
        cqp.qp.H.noalias() += (2.0 * rho) * row.transpose() * row;
        cqp.qp.g.noalias() += (2.0 * rho * m0) * row.transpose();
        cqp.qp.c0 += rho * m0 * m0;
        ++added;
      }
    }
    if (added == 0) break;
    res = solve_qp(cqp.qp, opts, &res.u);
  }
  return res;
}

Controller::Controller(ControllerVariant variant, const MpcConfig& mpc,
                       const AllocationParams& alloc, const ArmGeometry& geometry,
                       const Vec3& k_b, std::optional<MlpParams> residual_params,
                       double online_lr, std::size_t online_batch)
    : variant_(variant),
      mpc_(mpc),
      alloc_(alloc),
      geometry_(geometry),
      model_(variant == ControllerVariant::IntegralBaseline ? build_integrator_model(mpc.dt)
                                                            : build_discrete_model(k_b, mpc.dt)),
      residual_params_(std::move(residual_params)),
      online_lr_(online_lr),
      online_batch_(online_batch) {
  if (variant_ == ControllerVariant::ModifiedResidual && !residual_params_)
    throw std::invalid_argument("residual variant requires trained network parameters");
  model_.k_b = k_b;
}

ControlCommand Controller::step(const Measurement& meas, const TrajectoryFn& trajectory,
                                double t) {
  const Mat3 R = euler_to_rotation(meas.pose.theta_B);
  const Vec3 p_EB = fk_manipulator(meas.joints.q, geometry_);
  const Vec3 p_E = compose_end_effector(meas.pose.p_B, R, p_EB);
  const TrajectorySample now = trajectory(t);

  ControlCommand cmd;
  cmd.d_e = (p_E - now.p).norm();
  cmd.d_o = (p_EB - mpc_.p_learn_center).norm();

  const AllocationState alloc = allocate(cmd.d_e, cmd.d_o, now.d_g, alloc_);
  cmd.gamma = alloc.gamma;
  cmd.mode = alloc.mode;

  StageWeights weights;
  weights.w1 = mpc_.w1;
  weights.w2 = alloc.w2;
  weights.w3 = mpc_.w3;
  weights.w4 = alloc.w4;

  FrozenData fz;
  fz.jac = jacobians_aerial(meas.pose, meas.joints, geometry_);
  const Vec3 euler_rates = euler_rates_from_body_omega(meas.pose.theta_B, meas.pose.omega_B);
  fz.xi_u_dot = euler_rates.head<2>();
  fz.J_m = jacobian_manipulator(meas.joints.q, geometry_);
  fz.p_EB0 = p_EB;
  fz.q0 = meas.joints.q;
  fz.p_learn_center = mpc_.p_learn_center;
  fz.ref_velocity.resize(static_cast<std::size_t>(mpc_.horizon) + 1);
  for (int k = 0; k <= mpc_.horizon; ++k) {
    const TrajectorySample sk =
        (mpc_.per_stage_reference && k > 0) ? trajectory(t + k * mpc_.dt) : now;
    fz.ref_velocity[static_cast<std::size_t>(k)] = reference_velocity(sk.v, p_E, sk.p, mpc_.k_e);
  }

  const FeatureVector features = assemble_features(
      meas.pose.theta_B, meas.pose.v_B, meas.pose.omega_B, meas.joints.q, meas.joints.qdot,
      prev_u_);

  if (variant_ == ControllerVariant::ModifiedResidual) {
    Vec3 p_des;
    for (int axis = 0; axis < 3; ++axis) p_des[axis] = meas.x[ix_pos_des(axis)];
    TrainSample sample;
    sample.features = features;
    sample.target = residual_target(meas.pose.v_B, meas.pose.p_B, p_des, model_.k_b);
    buffer_.push_back(sample);
    while (buffer_.size() > online_batch_) buffer_.pop_front();
    if (buffer_.size() == online_batch_ && online_lr_ > 0.0)
      online_update(*residual_params_, {buffer_.begin(), buffer_.end()}, online_lr_,
                    online_batch_);
    cmd.delta_hat = mlp_forward(*residual_params_, features);
  }

  const auto t0 = std::chrono::steady_clock::now();
  CondensedQp cqp = condense(model_, meas.x, fz, weights, mpc_, cmd.delta_hat);
  const VecX* warm = warm_start_.size() == cqp.qp.H.rows() ? &warm_start_ : nullptr;
  const QpResult res = solve_condensed(cqp, mpc_, warm);
  const auto t1 = std::chrono::steady_clock::now();

  cmd.solve_time_s = std::chrono::duration<double>(t1 - t0).count();
  cmd.solve_iterations = res.iterations;
  cmd.qp_converged = res.converged;

  if (!res.u.allFinite()) {
    cmd.qp_converged = false;
    cmd.fatal = true;
    warm_start_.resize(0);
    prev_u_.setZero();
    return cmd;
  }

  cmd.quad_acc = res.u.segment<3>(0);
  cmd.joint_acc = res.u.segment<kNumJoints>(3);

  ControlU u0;
  u0 << cmd.quad_acc, cmd.joint_acc;
  cmd.cost = stage_cost_terms(meas.x, u0, fz, 0, weights);

  const int dim = static_cast<int>(res.u.size());
  warm_start_.resize(dim);
  warm_start_.head(dim - kInputDim) = res.u.tail(dim - kInputDim);
  warm_start_.tail(kInputDim) = res.u.tail(kInputDim);
  prev_u_ = u0;
  return cmd;
}

}  // namespace ampc
