#pragma once

#include "ampc/allocation.hpp"
#include "ampc/kinematics.hpp"
#include "ampc/model.hpp"
#include "ampc/qp.hpp"
#include "ampc/residual.hpp"
#include "ampc/trajectory.hpp"

#include <deque>
#include <functional>
#include <optional>
#include <vector>

namespace ampc {

struct MpcConfig {
  int horizon = 15;
  double dt = 0.02;
  Vec3 w1 = Vec3(10000.0, 10000.0, 10000.0);  // end-effector velocity tracking
  Vec9 w3 = Vec9::Constant(100.0);         // input effort
  Vec3 k_e = Vec3(0.8, 1.2, 1.2);
  Vec3 p_learn_center = Vec3::Zero();      // learning-space center, body frame

  // State box, enforced as quadratic penalties on predicted trajectories.
  double quad_vel_limit = 1.5;    // |pdot_B| per axis (m/s)
  Vec6 joint_min = Vec6::Constant(-2.6);
  Vec6 joint_max = Vec6::Constant(2.6);
  double joint_rate_limit = 3.0;  // |qdot| per joint (rad/s)

  // Input box, enforced exactly on the decisions.
  double quad_acc_limit = 4.0;    // m/s^2
  double joint_acc_limit = 20.0;  // rad/s^2

  double qp_tol = 1e-8;
  int qp_max_iter = 100;
  double state_penalty = 1e4;
  int state_penalty_passes = 2;
  bool per_stage_reference = true;
};

// Everything evaluated at the current measurement and held over the horizon.
struct FrozenData {
  JacobianSplit jac;
  Eigen::Vector2d xi_u_dot = Eigen::Vector2d::Zero();  // (phidot, thetadot)
  std::vector<Vec3> ref_velocity;                      // stages 0..N
  Eigen::Matrix<double, 3, kNumJoints> J_m;
  Vec3 p_EB0 = Vec3::Zero();
  Vec6 q0 = Vec6::Zero();
  Vec3 p_learn_center = Vec3::Zero();
};

struct StageWeights {
  Vec3 w1 = Vec3::Zero();
  Vec9 w2 = Vec9::Zero();
  Vec9 w3 = Vec9::Zero();
  Vec3 w4 = Vec3::Zero();
};

struct CostTerms {
  double j1 = 0.0, j2 = 0.0, j3 = 0.0, j4 = 0.0;
  double total() const { return j1 + j2 + j3 + j4; }
};

// pdot_E_des = pdot_E_cmd - K_e (p_E - p_E_des)
Vec3 reference_velocity(const Vec3& traj_velocity, const Vec3& p_E, const Vec3& p_E_des,
                        const Vec3& k_e);

CostTerms stage_cost_terms(const StateX& x, const ControlU& u, const FrozenData& frozen,
                           int stage, const StageWeights& weights);
double stage_cost(const StateX& x, const ControlU& u, const FrozenData& frozen, int stage,
                  const StageWeights& weights);

// States eliminated through the linear dynamics; decisions are u_0..u_{N-1}.
// The terminal stage is evaluated with u_N = 0. Keeps the per-stage affine
// maps x_k = state_free[k] + state_sens[k] * U for penalty passes and
// diagnostics.
struct CondensedQp {
  QpProblem qp;
  std::vector<StateX> state_free;
  std::vector<MatX> state_sens;
  int horizon = 0;
};

CondensedQp condense(const DiscreteModel& model, const StateX& x0, const FrozenData& frozen,
                     const StageWeights& weights, const MpcConfig& config,
                     const Vec3& delta_held);

// Box QP solve plus up to state_penalty_passes re-solves with quadratic
// penalties on predicted state-bound violations.
QpResult solve_condensed(CondensedQp& cqp, const MpcConfig& config, const VecX* warm_start);

enum class ControllerVariant { ModifiedResidual, ModifiedOnly, IntegralBaseline };

struct Measurement {
  QuadPose pose;
  JointConfig joints;
  StateX x = StateX::Zero();
};

struct ControlCommand {
  Vec3 quad_acc = Vec3::Zero();
  Vec6 joint_acc = Vec6::Zero();
  double gamma = 0.0;
  MotionMode mode = MotionMode::Flight;
  CostTerms cost;
  Vec3 delta_hat = Vec3::Zero();
  double d_e = 0.0, d_o = 0.0;
  int solve_iterations = 0;
  double solve_time_s = 0.0;
  bool qp_converged = true;
  bool fatal = false;  // solver produced non-finite values; command zeroed
};

using TrajectoryFn = std::function<TrajectorySample(double)>;

// One full control cycle: allocation, weight assembly, objective assembly,
// online residual update, residual refresh, condensed QP solve. Owns the
// residual parameters (single writer) and the warm-start cache.
class Controller {
 public:
  Controller(ControllerVariant variant, const MpcConfig& mpc, const AllocationParams& alloc,
             const ArmGeometry& geometry, const Vec3& k_b,
             std::optional<MlpParams> residual_params, double online_lr = 0.0015,
             std::size_t online_batch = 20);

  ControlCommand step(const Measurement& meas, const TrajectoryFn& trajectory, double t);

  const MlpParams* residual_params() const {
    return residual_params_ ? &*residual_params_ : nullptr;
  }
  const DiscreteModel& model() const { return model_; }
  ControllerVariant variant() const { return variant_; }

 private:
  ControllerVariant variant_;
  MpcConfig mpc_;
  AllocationParams alloc_;
  ArmGeometry geometry_;
  DiscreteModel model_;
  std::optional<MlpParams> residual_params_;
  double online_lr_;
  std::size_t online_batch_;
  std::deque<TrainSample> buffer_;
  VecX warm_start_;
  ControlU prev_u_ = ControlU::Zero();
};

}  // namespace ampc
