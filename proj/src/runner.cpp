#include "ampc/runner.hpp"

#include "ampc/csv.hpp"
#include "ampc/plant.hpp"
#include "ampc/residual.hpp"
#include "ampc/trajectory.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

namespace ampc {
namespace {

constexpr double kIkGain = 8.0;
constexpr double kIkDamping = 1e-4;

std::vector<std::string> run_columns() {
  std::vector<std::string> c = {"t"};
  const char* ax[3] = {"x", "y", "z"};
  for (auto a : ax) c.push_back(std::string("p") + a);
  for (auto a : ax) c.push_back(std::string("v") + a);
  c.insert(c.end(), {"roll", "pitch", "yaw"});
  for (auto a : ax) c.push_back(std::string("om") + a);
  for (int j = 1; j <= kNumJoints; ++j) c.push_back("q" + std::to_string(j));
  for (int j = 1; j <= kNumJoints; ++j) c.push_back("qd" + std::to_string(j));
  for (auto a : ax) c.push_back(std::string("pd") + a);
  for (auto a : ax) c.push_back(std::string("vd") + a);
  for (auto a : ax) c.push_back(std::string("ee") + a);
  for (auto a : ax) c.push_back(std::string("r") + a);
  for (auto a : ax) c.push_back(std::string("rv") + a);
  c.insert(c.end(), {"err", "gamma", "mode", "d_e", "d_o"});
  for (auto a : ax) c.push_back(std::string("dh") + a);
  for (auto a : ax) c.push_back(std::string("dt") + a);
  c.insert(c.end(), {"j1", "j2", "j3", "j4"});
  for (int i = 1; i <= kInputDim; ++i) c.push_back("u" + std::to_string(i));
  c.insert(c.end(), {"iters", "converged"});
  return c;
}

std::uint32_t effective_seed(const Config& cfg) {
  return cfg.plant.disturbance.seed + 0x9e3779b9u * cfg.run.seed;
}

std::vector<std::string> log_header(const Config& cfg, const char* scenario) {
  return {"ampc-log v1",
          std::string("config ") + config_hash_hex(cfg) + " scenario " + scenario +
              " variant " + cfg.run.variant + " seed " + std::to_string(cfg.run.seed)};
}

struct DesiredIntegrator {
  Vec3 p = Vec3::Zero(), v = Vec3::Zero();
  Vec6 q = Vec6::Zero(), qd = Vec6::Zero();

  void advance(const Vec3& a, const Vec6& qdd, double dt, const Vec6& qmin, const Vec6& qmax) {
    p += v * dt + 0.5 * a * dt * dt;
    v += a * dt;
    q += qd * dt + 0.5 * qdd * dt * dt;
    qd += qdd * dt;
    for (int j = 0; j < kNumJoints; ++j) {
      if (q[j] < qmin[j]) {
        q[j] = qmin[j];
        if (qd[j] < 0.0) qd[j] = 0.0;
      } else if (q[j] > qmax[j]) {
        q[j] = qmax[j];
        if (qd[j] > 0.0) qd[j] = 0.0;
      }
    }
  }
};

Measurement make_measurement(const PlantState& ps, const DesiredIntegrator& des) {
  Measurement m;
  m.pose.p_B = ps.p_B;
  m.pose.theta_B = ps.theta_B;
  m.pose.v_B = ps.v_B;
  m.pose.omega_B = body_omega_from_euler_rates(ps.theta_B, ps.theta_dot);
  m.joints.q = ps.q;
  m.joints.qdot = ps.qdot;
  for (int axis = 0; axis < 3; ++axis) {
    m.x[ix_pos(axis)] = ps.p_B[axis];
    m.x[ix_vel(axis)] = ps.v_B[axis];
    m.x[ix_pos_des(axis)] = des.p[axis];
    m.x[ix_vel_des(axis)] = des.v[axis];
  }
  for (int j = 0; j < kNumJoints; ++j) {
    m.x[ix_joint(j)] = ps.q[j];
    m.x[ix_joint_rate(j)] = ps.qdot[j];
  }
  return m;
}

}  // namespace

ControllerVariant parse_variant(const std::string& name) {
  if (name == "modified+residual") return ControllerVariant::ModifiedResidual;
  if (name == "modified-only") return ControllerVariant::ModifiedOnly;
  if (name == "integral-baseline") return ControllerVariant::IntegralBaseline;
  throw ConfigError("unknown variant '" + name + "'");
}

const char* variant_name(ControllerVariant v) {
  switch (v) {
    case ControllerVariant::ModifiedResidual: return "modified+residual";
    case ControllerVariant::ModifiedOnly: return "modified-only";
    case ControllerVariant::IntegralBaseline: return "integral-baseline";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "clover") return Scenario::Clover;
  if (name == "moving_target") return Scenario::MovingTarget;
  throw ConfigError("unknown scenario '" + name + "'");
}

Vec3 learning_center(const Config& cfg) {
  return fk_manipulator(cfg.q_op, default_arm_geometry());
}

RunResult run_experiment(const Config& cfg, Scenario scenario, const std::string& out_csv) {
  const ArmGeometry geo = default_arm_geometry();
  const Vec3 p_center = learning_center(cfg);
  const ControllerVariant variant = parse_variant(cfg.run.variant);

  std::optional<MlpParams> params;
  if (variant == ControllerVariant::ModifiedResidual) {
    if (!std::filesystem::exists(cfg.run.artifact))
      throw MissingArtifactError("model artifact not found: " + cfg.run.artifact);
    params = load_params(cfg.run.artifact);
  }

  MpcConfig mpc = cfg.mpc;
  mpc.dt = cfg.run.dt;
  mpc.p_learn_center = p_center;

  TrajectoryFn traj;
  const char* scenario_name = nullptr;
  if (scenario == Scenario::Clover) {
    scenario_name = "clover";
    const CloverParams cp = cfg.clover;
    traj = [cp](double t) { return clover_trajectory(t, cp); };
  } else {
    scenario_name = "moving_target";
    const MovingTargetParams tp = cfg.target;
    traj = [tp](double t) { return moving_target_trajectory(t, tp); };
  }

  // The end-effector starts on the trajectory for the clover and at the
  // configured offset point for target following; the quad pose realizes that
  // with the arm at the operating configuration.
  const Vec3 ee_start =
      scenario == Scenario::Clover ? traj(0.0).p : Vec3(0.0, 0.2, 1.2);

  PlantState ps0;
  ps0.p_B = ee_start - p_center;
  ps0.q = cfg.q_op;

  PlantConfig plant_cfg = cfg.plant;
  plant_cfg.disturbance.seed = effective_seed(cfg);
  Plant plant(plant_cfg, geo, ps0);

  DesiredIntegrator des;
  des.p = ps0.p_B;
  des.q = cfg.q_op;

  const double online_lr =
      variant == ControllerVariant::ModifiedResidual ? cfg.online.learning_rate : 0.0;
  Controller controller(variant, mpc, cfg.alloc, geo, cfg.k_b, std::move(params), online_lr,
                        static_cast<std::size_t>(cfg.online.batch));

  CsvWriter log(out_csv, run_columns(), log_header(cfg, scenario_name));
  CsvWriter timing(out_csv + ".timing.csv", {"t", "cycle_ms", "solve_ms"},
                   {"ampc-timing v1 (excluded from reproducibility comparisons)"});

  const std::size_t cycles =
      static_cast<std::size_t>(std::llround(std::max(0.0, cfg.run.duration) / cfg.run.dt));
  std::vector<double> col_t, col_err, col_gamma, col_mode, col_cycle_ms;
  col_t.reserve(cycles);
  col_err.reserve(cycles);
  col_gamma.reserve(cycles);
  col_mode.reserve(cycles);
  col_cycle_ms.reserve(cycles);

  RunResult result;
  for (std::size_t i = 0; i < cycles; ++i) {
    const double t = static_cast<double>(i) * cfg.run.dt;
    const Measurement meas = make_measurement(plant.state(), des);

    const auto c0 = std::chrono::steady_clock::now();
    const ControlCommand cmd = controller.step(meas, traj, t);
    const auto c1 = std::chrono::steady_clock::now();
    const double cycle_ms = std::chrono::duration<double, std::milli>(c1 - c0).count();

    if (cmd.fatal) {
      char msg[64];
      std::snprintf(msg, sizeof msg, "aborted solver t=%.17g", t);
      log.write_comment(msg);
      result.status = RunStatus::SolverFailure;
      break;
    }

    const Mat3 r = euler_to_rotation(meas.pose.theta_B);
    const Vec3 p_eb = fk_manipulator(meas.joints.q, geo);
    const Vec3 p_e = compose_end_effector(meas.pose.p_B, r, p_eb);
    const TrajectorySample ref = traj(t);
    const double err = (p_e - ref.p).norm();
    const Vec3 delta_target =
        residual_target(meas.pose.v_B, meas.pose.p_B, des.p, cfg.k_b);

    std::vector<double> row;
    row.reserve(66);
    row.push_back(t);
    for (int k = 0; k < 3; ++k) row.push_back(meas.pose.p_B[k]);
    for (int k = 0; k < 3; ++k) row.push_back(meas.pose.v_B[k]);
    for (int k = 0; k < 3; ++k) row.push_back(meas.pose.theta_B[k]);
    for (int k = 0; k < 3; ++k) row.push_back(meas.pose.omega_B[k]);
    for (int j = 0; j < kNumJoints; ++j) row.push_back(meas.joints.q[j]);
    for (int j = 0; j < kNumJoints; ++j) row.push_back(meas.joints.qdot[j]);
    for (int k = 0; k < 3; ++k) row.push_back(des.p[k]);
    for (int k = 0; k < 3; ++k) row.push_back(des.v[k]);
    for (int k = 0; k < 3; ++k) row.push_back(p_e[k]);
    for (int k = 0; k < 3; ++k) row.push_back(ref.p[k]);
    for (int k = 0; k < 3; ++k) row.push_back(ref.v[k]);
    row.push_back(err);
    row.push_back(cmd.gamma);
    row.push_back(static_cast<double>(static_cast<int>(cmd.mode)));
    row.push_back(cmd.d_e);
    row.push_back(cmd.d_o);
    for (int k = 0; k < 3; ++k) row.push_back(cmd.delta_hat[k]);
    for (int k = 0; k < 3; ++k) row.push_back(delta_target[k]);
    row.push_back(cmd.cost.j1);
    row.push_back(cmd.cost.j2);
    row.push_back(cmd.cost.j3);
    row.push_back(cmd.cost.j4);
    for (int k = 0; k < 3; ++k) row.push_back(cmd.quad_acc[k]);
    for (int j = 0; j < kNumJoints; ++j) row.push_back(cmd.joint_acc[j]);
    row.push_back(static_cast<double>(cmd.solve_iterations));
    row.push_back(cmd.qp_converged ? 1.0 : 0.0);
    log.write_row(row);
    timing.write_row({t, cycle_ms, cmd.solve_time_s * 1e3});

    col_t.push_back(t);
    col_err.push_back(err);
    col_gamma.push_back(cmd.gamma);
    col_mode.push_back(static_cast<double>(static_cast<int>(cmd.mode)));
    col_cycle_ms.push_back(cycle_ms);

    PlantCommand pc;
    pc.p_B_des = des.p;
    pc.v_B_des = des.v;
    pc.a_B_des = cmd.quad_acc;
    pc.q_des = des.q;
    pc.qdot_des = des.qd;
    pc.qddot_des = cmd.joint_acc;
    if (!plant.step(pc, cfg.run.dt)) {
      char msg[64];
      std::snprintf(msg, sizeof msg, "aborted divergence t=%.17g", t + cfg.run.dt);
      log.write_comment(msg);
      result.status = RunStatus::Diverged;
      break;
    }
    des.advance(cmd.quad_acc, cmd.joint_acc, cfg.run.dt, cfg.mpc.joint_min, cfg.mpc.joint_max);
  }

  log.close();
  timing.close();

  result.metrics = compute_metrics(col_t, col_err, col_gamma, col_mode, col_cycle_ms,
                                   MetricsOptions{});
  if (result.status != RunStatus::Ok) {
    result.metrics.aborted = true;
    result.metrics.abort_reason =
        result.status == RunStatus::Diverged ? "divergence" : "solver failure";
  }
  return result;
}

std::size_t collect_dataset(const Config& cfg, const std::string& out_csv) {
  const ArmGeometry geo = default_arm_geometry();
  const Vec3 p_center = learning_center(cfg);
  const double dt = cfg.run.dt;

  const Vec3 hover_center(0.0, 0.0, 1.0);
  CircleParams circle;
  circle.center = hover_center;
  circle.radius = cfg.collect.circle_radius;
  // All quad references pass through the circle start point so stage
  // boundaries are continuous.
  const Vec3 hold_point = hover_center + Vec3(cfg.collect.circle_radius, 0.0, 0.0);

  struct Stage {
    double lemn_period;
    bool circling;
    double circle_period;
  };
  // Periods sweep the quad from hover through accelerations comparable to
  // closed-loop tracking transients; the arm pattern runs throughout so the
  // samples pair base motion with manipulator reaction.
  const Stage kStages[6] = {{30.0, false, 0.0}, {15.0, false, 0.0}, {22.0, true, 20.0},
                            {11.0, true, 12.0}, {17.0, true, 6.0},  {13.0, true, 4.0}};

  PlantState ps0;
  ps0.p_B = hold_point;
  ps0.q = cfg.q_op;
  PlantConfig plant_cfg = cfg.plant;
  plant_cfg.disturbance.seed = effective_seed(cfg);
  Plant plant(plant_cfg, geo, ps0);

  std::vector<std::string> cols = {"t"};
  for (int i = 0; i < kFeatureDim; ++i) cols.push_back("f" + std::to_string(i));
  cols.insert(cols.end(), {"tx", "ty", "tz", "pbx", "pby", "pbz", "pdx", "pdy", "pdz",
                           "vbx", "vby", "vbz", "pebx", "peby", "pebz"});
  CsvWriter out(out_csv, cols, log_header(cfg, "collect"), /*atomic=*/true);

  LemniscateParams lemn;
  lemn.center = p_center;
  lemn.half_extent = cfg.collect.half_extent;

  Vec6 q_des = cfg.q_op;
  Vec6 qdot_des = Vec6::Zero();
  ControlU u_prev = ControlU::Zero();

  const std::size_t cycles = static_cast<std::size_t>(
      std::llround(std::max(0, cfg.collect.stages) * cfg.collect.stage_duration / dt));
  std::size_t rows = 0;

  for (std::size_t i = 0; i < cycles; ++i) {
    const double t = static_cast<double>(i) * dt;
    const int stage_idx = std::min(cfg.collect.stages - 1,
                                   static_cast<int>(t / cfg.collect.stage_duration));
    const Stage& stage = kStages[stage_idx % 6];
    const double t_stage = t - stage_idx * cfg.collect.stage_duration;

    Vec3 p_q = hold_point, v_q = Vec3::Zero(), a_q = Vec3::Zero();
    if (stage.circling) {
      circle.period = stage.circle_period;
      circle_reference(t_stage, circle, p_q, v_q, a_q);
    }

    lemn.period = stage.lemn_period;
    Vec3 p_ref_b, v_ref_b;
    lemniscate_body(t_stage, lemn, p_ref_b, v_ref_b);

    const Vec3 p_cur = fk_manipulator(q_des, geo);
    const Eigen::Matrix<double, 3, kNumJoints> jm = jacobian_manipulator(q_des, geo);
    const Vec3 v_cmd = v_ref_b + kIkGain * (p_ref_b - p_cur);
    const Mat3 jjt = jm * jm.transpose() + kIkDamping * Mat3::Identity();
    const Vec6 qdot_new = jm.transpose() * jjt.ldlt().solve(v_cmd);
    const Vec6 qddot = (qdot_new - qdot_des) / dt;

    const PlantState& ps = plant.state();
    const Vec3 omega = body_omega_from_euler_rates(ps.theta_B, ps.theta_dot);
    const FeatureVector feats =
        assemble_features(ps.theta_B, ps.v_B, omega, ps.q, ps.qdot, u_prev);
    const Vec3 target = residual_target(ps.v_B, ps.p_B, p_q, cfg.k_b);
    const Vec3 p_eb = fk_manipulator(ps.q, geo);

    std::vector<double> row;
    row.reserve(1 + kFeatureDim + 15);
    row.push_back(t);
    for (int k = 0; k < kFeatureDim; ++k) row.push_back(feats[k]);
    for (int k = 0; k < 3; ++k) row.push_back(target[k]);
    for (int k = 0; k < 3; ++k) row.push_back(ps.p_B[k]);
    for (int k = 0; k < 3; ++k) row.push_back(p_q[k]);
    for (int k = 0; k < 3; ++k) row.push_back(ps.v_B[k]);
    for (int k = 0; k < 3; ++k) row.push_back(p_eb[k]);
    out.write_row(row);
    ++rows;

    PlantCommand pc;
    pc.p_B_des = p_q;
    pc.v_B_des = v_q;
    pc.a_B_des = a_q;
    pc.q_des = q_des;
    pc.qdot_des = qdot_des;
    pc.qddot_des = qddot;
    if (!plant.step(pc, dt))
      throw std::runtime_error("plant diverged during collection at t=" + std::to_string(t));

    q_des += qdot_des * dt + 0.5 * qddot * dt * dt;
    qdot_des = qdot_new;
    u_prev.head<3>() = a_q;
    u_prev.tail<kNumJoints>() = qddot;
  }

  out.close();
  return rows;
}

TrainReport train_residual(const Config& cfg, const std::string& data_csv,
                           const std::string& artifact_path) {
  const CsvFile data = read_csv(data_csv);
  std::vector<TrainSample> samples;
  samples.reserve(data.rows.size());
  int fcol[kFeatureDim];
  for (int i = 0; i < kFeatureDim; ++i) {
    fcol[i] = data.column("f" + std::to_string(i));
    if (fcol[i] < 0) throw std::runtime_error(data_csv + ": missing feature column f" +
                                              std::to_string(i));
  }
  const int tx = data.column("tx"), ty = data.column("ty"), tz = data.column("tz");
  if (tx < 0 || ty < 0 || tz < 0)
    throw std::runtime_error(data_csv + ": missing target columns");
  for (const auto& r : data.rows) {
    TrainSample s;
    for (int i = 0; i < kFeatureDim; ++i) s.features[i] = r[static_cast<std::size_t>(fcol[i])];
    s.target =
        Vec3(r[static_cast<std::size_t>(tx)], r[static_cast<std::size_t>(ty)],
             r[static_cast<std::size_t>(tz)]);
    samples.push_back(s);
  }
  TrainReport report;
  const MlpParams params = train_offline(samples, cfg.train, &report);
  save_params(params, artifact_path);
  return report;
}

RunMetrics replay(const std::string& csv_path) {
  const CsvFile log = read_csv(csv_path);
  std::vector<double> solve_ms;
  const std::string sidecar = csv_path + ".timing.csv";
  if (std::filesystem::exists(sidecar)) {
    const CsvFile timing = read_csv(sidecar);
    if (timing.column("cycle_ms") >= 0) solve_ms = timing.column_values("cycle_ms");
  }
  return compute_metrics(log, solve_ms, MetricsOptions{});
}

}  // namespace ampc
