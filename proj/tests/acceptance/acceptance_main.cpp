// Acceptance gate: one PASS/FAIL line per criterion A1-A9, exit code equals
// the number of failures. Progress goes to stderr, the verdict table to
// stdout.

#include "ampc/csv.hpp"
#include "ampc/runner.hpp"

#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ampc;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

std::vector<Verdict> g_verdicts;

template <typename Body>
void criterion(const std::string& name, double budget_s, Body&& body) {
  std::fprintf(stderr, "[%s] running...\n", name.c_str());
  Verdict v;
  v.name = name;
  std::ostringstream detail;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    v.pass = body(detail);
  } catch (const std::exception& e) {
    v.pass = false;
    detail << "exception: " << e.what();
  }
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (v.pass && v.seconds > budget_s) {
    v.pass = false;
    detail << " [exceeded " << budget_s << " s budget]";
  }
  v.detail = detail.str();
  g_verdicts.push_back(v);
  std::fprintf(stderr, "[%s] %s (%.2f s)\n", name.c_str(), v.pass ? "pass" : "FAIL", v.seconds);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, sep)) out.push_back(tok);
  return out;
}

MlpParams random_mlp(std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  MlpParams p;
  auto fill = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  };
  fill(p.w1);
  fill(p.b1);
  fill(p.w2);
  fill(p.b2);
  fill(p.w3);
  fill(p.b3);
  return p;
}

bool bytes_equal(const double* a, const double* b, Eigen::Index n) {
  return std::memcmp(a, b, sizeof(double) * static_cast<std::size_t>(n)) == 0;
}

// ---------------------------------------------------------------------------
// A1: discrete model entries against closed forms; one step against a fine
// integration of the continuous equations.

bool check_a1(std::ostringstream& out) {
  const Vec3 k_b(6.67, 6.67, 2.38);
  const double dt = 0.02;
  const DiscreteModel m = build_discrete_model(k_b, dt);

  Eigen::Matrix<double, kStateDim, kStateDim> ea;
  Eigen::Matrix<double, kStateDim, kInputDim> eb;
  Eigen::Matrix<double, kStateDim, kStateDim> ec;
  ea.setZero();
  eb.setZero();
  ec.setZero();
  for (int axis = 0; axis < 3; ++axis) {
    const double k = k_b[axis];
    const int i = 4 * axis;
    ea(i + 0, i + 0) = 1.0 - k * dt;
    ea(i + 0, i + 2) = k * dt;
    ea(i + 0, i + 3) = k * dt * dt;
    ea(i + 1, i + 0) = -k;
    ea(i + 1, i + 2) = k;
    ea(i + 1, i + 3) = k * dt;
    ea(i + 2, i + 2) = 1.0;
    ea(i + 2, i + 3) = dt;
    ea(i + 3, i + 3) = 1.0;
    eb(i + 0, axis) = k * dt * dt * dt / 2.0;
    eb(i + 1, axis) = k * dt * dt / 2.0;
    eb(i + 2, axis) = dt * dt / 2.0;
    eb(i + 3, axis) = dt;
    ec(i + 0, i + 1) = dt;
    ec(i + 1, i + 1) = 1.0;
  }
  for (int j = 0; j < kNumJoints; ++j) {
    const int i = 12 + 2 * j;
    ea(i, i) = 1.0;
    ea(i, i + 1) = dt;
    ea(i + 1, i + 1) = 1.0;
    eb(i, 3 + j) = dt * dt / 2.0;
    eb(i + 1, 3 + j) = dt;
  }

  const double da = (m.A - ea).cwiseAbs().maxCoeff();
  const double db = (m.B - eb).cwiseAbs().maxCoeff();
  const double dc = (m.C - ec).cwiseAbs().maxCoeff();
  bool ok = da <= 1e-12 && db <= 1e-12 && dc <= 1e-12;

  // Spot values of the x-axis position row, evaluated by hand.
  ok = ok && std::abs(m.A(0, 0) - 0.8666) <= 1e-12 && std::abs(m.A(0, 2) - 0.1334) <= 1e-12 &&
       std::abs(m.A(0, 3) - 0.002668) <= 1e-12;

  // One-step prediction against RK4 of the continuous dynamics (200 substeps):
  // pdot = K_B (p_des - p) + delta, pddot_des = u, qddot = u.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double worst = 0.0, worst_fd = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    StateX x0;
    for (int i = 0; i < kStateDim; ++i) x0[i] = d(rng);
    ControlU u;
    for (int i = 0; i < kInputDim; ++i) u[i] = d(rng);
    const Vec3 delta(0.05 * d(rng), 0.05 * d(rng), 0.05 * d(rng));
    // First-order equivalent model: compare in its own regime (cm-scale
    // offsets, slow references).
    for (int axis = 0; axis < 3; ++axis) {
      x0[ix_pos_des(axis)] = x0[ix_pos(axis)] + 0.02 * d(rng);
      x0[ix_vel_des(axis)] = 0.1 * d(rng);
    }

    const StateX x1 = predict_step(m, x0, u, ResidualDelta{delta});

    auto deriv = [&](const VecX& y) -> VecX {
      VecX dy = VecX::Zero(kStateDim);
      for (int axis = 0; axis < 3; ++axis) {
        dy[ix_pos(axis)] =
            k_b[axis] * (y[ix_pos_des(axis)] - y[ix_pos(axis)]) + delta[axis];
        dy[ix_pos_des(axis)] = y[ix_vel_des(axis)];
        dy[ix_vel_des(axis)] = u[axis];
      }
      for (int j = 0; j < kNumJoints; ++j) {
        dy[ix_joint(j)] = y[ix_joint_rate(j)];
        dy[ix_joint_rate(j)] = u[3 + j];
      }
      return dy;
    };
    const VecX xe = test::rk4_integrate(deriv, x0, dt, 200);

    for (int axis = 0; axis < 3; ++axis) {
      worst = std::max(worst, std::abs(x1[ix_pos(axis)] - xe[ix_pos(axis)]));
      worst = std::max(worst, std::abs(x1[ix_pos_des(axis)] - xe[ix_pos_des(axis)]));
      worst = std::max(worst, std::abs(x1[ix_vel_des(axis)] - xe[ix_vel_des(axis)]));
      // The model's velocity slot is defined as the position forward
      // difference; that identity is exact.
      worst_fd = std::max(worst_fd, std::abs(x1[ix_vel(axis)] -
                                             (x1[ix_pos(axis)] - x0[ix_pos(axis)]) / dt));
    }
    for (int j = 0; j < kNumJoints; ++j) {
      worst = std::max(worst, std::abs(x1[ix_joint(j)] - xe[ix_joint(j)]));
      worst = std::max(worst, std::abs(x1[ix_joint_rate(j)] - xe[ix_joint_rate(j)]));
    }
  }
  ok = ok && worst <= 5e-4 && worst_fd <= 1e-12;

  out << "entry max diff A/B/C " << da << "/" << db << "/" << dc
      << "; one-step vs fine ODE max " << worst << " (limit 5e-4), velocity identity max "
      << worst_fd;
  return ok;
}

// ---------------------------------------------------------------------------
// A2: analytic gradients against finite differences; online updates touch the
// last layer only and never worsen the batch they just saw.

bool check_a2(std::ostringstream& out) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);

  double worst_rel = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    MlpParams p = random_mlp(500 + static_cast<std::uint32_t>(draw));
    TrainSample s;
    for (int i = 0; i < kFeatureDim; ++i) s.features[i] = d(rng);
    s.target = Vec3(d(rng), d(rng), d(rng));
    const MlpGrad g = mlp_backward(p, s.features, s.target);
    const double eps = 1e-6;
    auto block = [&](auto& param, const auto& grad) {
      for (Eigen::Index i = 0; i < param.size(); ++i) {
        const double saved = param.data()[i];
        param.data()[i] = saved + eps;
        const double lp = sample_loss(p, s);
        param.data()[i] = saved - eps;
        const double lm = sample_loss(p, s);
        param.data()[i] = saved;
        const double fd = (lp - lm) / (2.0 * eps);
        const double an = grad.data()[i];
        worst_rel = std::max(worst_rel,
                             std::abs(fd - an) / std::max({1.0, std::abs(fd), std::abs(an)}));
      }
    };
    block(p.w1, g.w1);
    block(p.b1, g.b1);
    block(p.w2, g.w2);
    block(p.b2, g.b2);
    block(p.w3, g.w3);
    block(p.b3, g.b3);
  }
  bool ok = worst_rel < 1e-4;

  // Hidden layers must be untouched byte-for-byte by the online update.
  MlpParams p = random_mlp(7);
  const MlpParams before = p;
  std::vector<TrainSample> batch(20);
  for (auto& s : batch) {
    for (int i = 0; i < kFeatureDim; ++i) s.features[i] = d(rng);
    s.target = Vec3(0.1, -0.1, 0.05);
  }
  online_update(p, batch, 0.0015, 20);
  const bool frozen = bytes_equal(p.w1.data(), before.w1.data(), p.w1.size()) &&
                      bytes_equal(p.b1.data(), before.b1.data(), p.b1.size()) &&
                      bytes_equal(p.w2.data(), before.w2.data(), p.w2.size()) &&
                      bytes_equal(p.b2.data(), before.b2.data(), p.b2.size());
  const bool moved = !bytes_equal(p.w3.data(), before.w3.data(), p.w3.size());
  ok = ok && frozen && moved;

  // 100 random batches: one online step must not increase that batch's loss.
  std::vector<TrainSample> data(400);
  for (auto& s : data) {
    for (int i = 0; i < kFeatureDim; ++i) s.features[i] = d(rng);
    s.target = Vec3(0.4 * s.features[3], -0.3 * s.features[4], 0.2 * s.features[5]);
  }
  MlpParams trained = train_offline(data, TrainOptions{0.01, 10, 64, 3});
  int increases = 0;
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TrainSample> b(20);
    for (auto& s : b) s = data[pick(rng)];
    const double l0 = batch_loss(trained, b);
    online_update(trained, b, 0.0015, 20);
    if (batch_loss(trained, b) > l0 + 1e-12) ++increases;
  }
  ok = ok && increases == 0;

  out << "gradcheck worst rel err " << worst_rel << " over 50 draws; hidden layers "
      << (frozen ? "byte-identical" : "CHANGED") << "; loss increases " << increases << "/100";
  return ok;
}

// ---------------------------------------------------------------------------
// A3: condensed MPC problems against an independent projected-gradient
// reference, exact box feasibility, and two-iteration warm restarts.

bool check_a3(std::ostringstream& out) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_real_distribution<double> wdist(0.1, 2.0);
  const DiscreteModel model = build_discrete_model(Vec3(6.67, 6.67, 2.38), 0.02);
  const int horizons[3] = {1, 3, 5};

  double worst_gap = 0.0;
  int infeasible = 0, warm_over = 0, unconverged = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = horizons[trial % 3];
    MpcConfig cfg;
    cfg.horizon = n;

    StateX x0;
    for (int i = 0; i < kStateDim; ++i) x0[i] = 0.3 * d(rng);
    FrozenData fz;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 10; ++c) fz.jac.J_c(r, c) = d(rng);
      for (int c = 0; c < 2; ++c) fz.jac.J_u(r, c) = d(rng);
      for (int c = 0; c < kNumJoints; ++c) fz.J_m(r, c) = d(rng);
    }
    fz.xi_u_dot = Eigen::Vector2d(d(rng), d(rng));
    fz.p_EB0 = Vec3(d(rng), d(rng), d(rng));
    for (int i = 0; i < kNumJoints; ++i) fz.q0[i] = d(rng);
    fz.p_learn_center = Vec3(d(rng), d(rng), d(rng));
    fz.ref_velocity.assign(static_cast<std::size_t>(n) + 1, Vec3::Zero());
    for (auto& v : fz.ref_velocity) v = Vec3(d(rng), d(rng), d(rng));

    StageWeights w;
    for (int i = 0; i < 3; ++i) w.w1[i] = wdist(rng);
    for (int i = 0; i < 9; ++i) w.w2[i] = wdist(rng);
    for (int i = 0; i < 9; ++i) w.w3[i] = wdist(rng);
    for (int i = 0; i < 3; ++i) w.w4[i] = wdist(rng);

    const Vec3 delta(0.2 * d(rng), 0.2 * d(rng), 0.2 * d(rng));
    CondensedQp cqp = condense(model, x0, fz, w, cfg, delta);

    const QpOptions opts;
    const QpResult res = solve_qp(cqp.qp, opts);
    if (!res.converged) ++unconverged;
    for (Eigen::Index i = 0; i < res.u.size(); ++i)
      if (res.u[i] < cqp.qp.lo[i] || res.u[i] > cqp.qp.hi[i]) ++infeasible;

    const VecX ref = test::projected_gradient_qp(cqp.qp);
    worst_gap = std::max(worst_gap,
                         std::abs(cqp.qp.objective(res.u) - cqp.qp.objective(ref)));

    const QpResult warm = solve_qp(cqp.qp, opts, &res.u);
    if (warm.iterations > 2) ++warm_over;
  }
  const bool ok = worst_gap <= 1e-6 && infeasible == 0 && warm_over == 0 && unconverged == 0;
  out << "200 problems (N in {1,3,5}): worst objective gap " << worst_gap
      << " (limit 1e-6), bound violations " << infeasible << ", warm restarts over 2 iters "
      << warm_over << ", unconverged " << unconverged;
  return ok;
}

// ---------------------------------------------------------------------------
// A8: allocation hand examples, bounds, monotonicity, and weight assembly.

bool check_a8(std::ostringstream& out) {
  const AllocationParams p;
  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) {
      ok = false;
      out << "[failed: " << what << "] ";
    }
  };

  expect(compute_gamma(1.5, 0.0, 2.0, p) == 0.0, "flight beyond d_f");
  expect(std::abs(compute_gamma(0.5, 0.0, 2.0, p) - (1.0 + 0.075) / 1.5) < 1e-15,
         "transition value at d_e=0.5");
  expect(compute_gamma(0.01, 0.01, 0.0, p) == 1.0, "hover manipulation");
  expect(std::abs(compute_gamma(0.01, 0.2, 0.0, p) + (0.2 - 0.075) / (0.38 - 0.075)) < 1e-15,
         "negative branch value");
  expect(compute_gamma(0.01, 5.0, 0.0, p) == -1.0, "clamp at -1");
  expect(compute_gamma(1.34, 0.0, 0.0, p) == 0.0, "point target far approach");

  double prev = 2.0;
  bool monotone = true;
  for (double de = 0.08; de <= 1.0; de += 0.002) {
    const double g = compute_gamma(de, 0.0, 2.0, p);
    if (g >= prev || g <= 0.0 || g > 1.0) monotone = false;
    prev = g;
  }
  expect(monotone, "transition monotone decreasing");

  bool in_range = true;
  for (double de = 0.0; de <= 2.0; de += 0.01)
    for (double dg : {0.0, 0.2, 2.0})
      for (double dn = 0.0; dn <= 0.6; dn += 0.01) {
        const double g = compute_gamma(de, dn, dg, p);
        if (g < -1.0 || g > 1.0) in_range = false;
      }
  expect(in_range, "gamma within [-1,1] on grid");

  const WeightScalars s0 = compute_weights(0.0, 0.05, p);
  expect(std::abs(s0.w_q - 100.0) < 1e-12, "w_q at gamma 0");
  expect(std::abs(s0.w_m - 1000.0) < 1e-12, "w_m at gamma 0");
  expect(std::abs(s0.w_d - 100.0 * 0.05 / 1.1) < 1e-12, "w_d at gamma 0");
  const WeightScalars s1 = compute_weights(1.0, 0.0, p);
  expect(std::abs(s1.w_q - 1100.0) < 1e-12, "w_q at gamma 1");
  expect(std::abs(s1.w_m - 10.0 / 1.01) < 1e-12, "w_m at gamma 1");

  AllocationParams scaled = p;
  std::mt19937 rng(81);
  std::uniform_real_distribution<double> wd(0.1, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    for (int i = 0; i < 9; ++i) scaled.w2_initial[i] = wd(rng);
    for (int i = 0; i < 3; ++i) scaled.w4_initial[i] = wd(rng);
    const double gamma = wd(rng) / 3.0;
    const WeightScalars s = compute_weights(gamma, 0.1, scaled);
    Vec9 w2;
    Vec3 w4;
    assemble_weight_matrices(s, scaled, w2, w4);
    for (int i = 0; i < 9; ++i) {
      const double want = (i < 3 ? s.w_q : s.w_m) * scaled.w2_initial[i];
      worst = std::max(worst, std::abs(w2[i] - want) / std::abs(want));
    }
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::abs(w4[i] - s.w_d * scaled.w4_initial[i]) /
                                  std::max(1e-300, std::abs(s.w_d * scaled.w4_initial[i])));
  }
  expect(worst <= 1e-12, "weight assembly scaling");

  out << "hand values exact, grids in range, assembly worst rel " << worst;
  return ok;
}

}  // namespace

// ---------------------------------------------------------------------------

int main() {
  const fs::path work = fs::temp_directory_path() / "ampc_acceptance";
  std::error_code ec;
  fs::remove_all(work, ec);
  fs::create_directories(work);

  criterion("A1", 1.0, check_a1);
  criterion("A2", 30.0, check_a2);
  criterion("A3", 60.0, check_a3);
  criterion("A8", 1.0, check_a8);

  // Shared pipeline for the closed-loop criteria: one collection run and one
  // offline training pass at the default configuration.
  const std::string data_csv = (work / "dataset.csv").string();
  const std::string artifact = (work / "residual_net.txt").string();
  bool pipeline_ok = false;
  std::string pipeline_note;
  double pipeline_s = 0.0;

  RunMetrics resid_m, base_m;
  bool a4_runs_ok = false;

  criterion("A4", 300.0, [&](std::ostringstream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    Config cfg = default_config();
    const std::size_t rows = collect_dataset(cfg, data_csv);
    const TrainReport tr = train_residual(cfg, data_csv, artifact);
    pipeline_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
      std::ostringstream note;
      note << rows << " samples, train mse " << tr.initial_mse << " -> " << tr.final_mse
           << " in " << pipeline_s << " s";
      pipeline_note = note.str();
    }
    pipeline_ok = true;

    Config base_cfg = cfg;
    base_cfg.run.variant = "integral-baseline";
    base_cfg.run.duration = 120.0;
    const RunResult base = run_experiment(base_cfg, Scenario::Clover,
                                          (work / "clover_baseline.csv").string());

    Config res_cfg = cfg;
    res_cfg.run.variant = "modified+residual";
    res_cfg.run.duration = 120.0;
    res_cfg.run.artifact = artifact;
    const RunResult resid = run_experiment(res_cfg, Scenario::Clover,
                                           (work / "clover_residual.csv").string());

    if (base.status != RunStatus::Ok || resid.status != RunStatus::Ok) {
      out << "run status base=" << static_cast<int>(base.status)
          << " residual=" << static_cast<int>(resid.status);
      return false;
    }
    base_m = base.metrics;
    resid_m = resid.metrics;
    a4_runs_ok = true;
    const double ratio = resid_m.mean_error_full / base_m.mean_error_full;
    out << "pipeline: " << pipeline_note << "; clover 120 s mean error "
        << resid_m.mean_error_full << " m vs baseline " << base_m.mean_error_full
        << " m, ratio " << ratio << " (limit 0.7)";
    return ratio <= 0.7;
  });

  criterion("A5", 300.0, [&](std::ostringstream& out) {
    if (!pipeline_ok || !a4_runs_ok) {
      out << "pipeline or A4 runs unavailable";
      return false;
    }
    Config cfg = default_config();
    cfg.run.variant = "modified-only";
    cfg.run.duration = 120.0;
    const RunResult monly = run_experiment(cfg, Scenario::Clover,
                                           (work / "clover_modonly.csv").string());
    if (monly.status != RunStatus::Ok) {
      out << "run status " << static_cast<int>(monly.status);
      return false;
    }
    const double improvement =
        1.0 - resid_m.mean_error_full / monly.metrics.mean_error_full;
    out << "disturbance battery: modified-only mean " << monly.metrics.mean_error_full
        << " m, with residual " << resid_m.mean_error_full << " m, improvement "
        << improvement * 100.0 << "% (needs >= 10%)";
    return improvement >= 0.10;
  });

  criterion("A6", 300.0, [&](std::ostringstream& out) {
    if (!pipeline_ok) {
      out << "pipeline unavailable";
      return false;
    }
    Config cfg = default_config();
    cfg.run.variant = "modified+residual";
    cfg.run.duration = 60.0;
    cfg.run.artifact = artifact;
    const std::string csv = (work / "follow.csv").string();
    const RunResult follow = run_experiment(cfg, Scenario::MovingTarget, csv);
    if (follow.status != RunStatus::Ok) {
      out << "run status " << static_cast<int>(follow.status);
      return false;
    }
    const RunMetrics& m = follow.metrics;

    const CsvFile log = read_csv(csv);
    const double gamma0 = log.rows.front()[static_cast<std::size_t>(log.column("gamma"))];
    const double mode0 = log.rows.front()[static_cast<std::size_t>(log.column("mode"))];

    const auto seq = split(m.mode_sequence, '>');
    const bool starts_flight = !seq.empty() && seq.front() == "flight";
    bool reaches_manip = false;
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i] == "hover" || seq[i] == "coordinated") reaches_manip = true;

    const bool ok = gamma0 == 0.0 && mode0 == 0.0 && m.gamma_max > 0.0 && m.window_reached &&
                    m.mean_error < 0.05 && starts_flight && reaches_manip;
    out << "starts flight (gamma " << gamma0 << "), gamma max " << m.gamma_max
        << ", caught up at t=" << m.catch_up_time << " s, stable mean " << m.mean_error
        << " m (limit 0.05), sequence " << m.mode_sequence;
    return ok;
  });

  criterion("A7", 10.0, [&](std::ostringstream& out) {
    if (!a4_runs_ok) {
      out << "A4 runs unavailable";
      return false;
    }
    const MpcConfig defaults;
    out << "controller cycle over " << resid_m.cycles << " cycles at N=" << defaults.horizon
        << ": p50 " << resid_m.solve_p50_ms << " ms, p99 " << resid_m.solve_p99_ms
        << " ms, max " << resid_m.solve_max_ms << " ms (p99 limit 20 ms)";
    return resid_m.timing_available && resid_m.cycles >= 3000 && defaults.horizon == 15 &&
           resid_m.solve_p99_ms < 20.0;
  });

  criterion("A9", 600.0, [&](std::ostringstream& out) {
    // Same config, same paths, run twice; outputs are snapshotted between
    // runs so the second pass overwrites the first.
    const fs::path dir = work / "chain";
    fs::create_directories(dir);
    auto chain = [&]() -> std::array<std::string, 3> {
      Config cfg = default_config();
      cfg.collect.stages = 2;
      cfg.collect.stage_duration = 10.0;
      cfg.train.epochs = 10;
      cfg.run.variant = "modified+residual";
      cfg.run.duration = 10.0;
      cfg.run.artifact = (dir / "net.txt").string();
      collect_dataset(cfg, (dir / "data.csv").string());
      train_residual(cfg, (dir / "data.csv").string(), cfg.run.artifact);
      const RunResult r =
          run_experiment(cfg, Scenario::Clover, (dir / "run.csv").string());
      if (r.status != RunStatus::Ok)
        throw std::runtime_error("chain run failed with status " +
                                 std::to_string(static_cast<int>(r.status)));
      return {slurp((dir / "data.csv").string()), slurp((dir / "net.txt").string()),
              slurp((dir / "run.csv").string())};
    };
    const auto first = chain();
    const auto second = chain();
    const bool data_eq = !first[0].empty() && first[0] == second[0];
    const bool net_eq = !first[1].empty() && first[1] == second[1];
    const bool run_eq = !first[2].empty() && first[2] == second[2];
    out << "collect/train/track repeated: dataset " << (data_eq ? "identical" : "DIFFERS")
        << ", artifact " << (net_eq ? "identical" : "DIFFERS") << ", run log "
        << (run_eq ? "identical" : "DIFFERS") << " (" << first[0].size() + first[2].size()
        << " log bytes compared)";
    return data_eq && net_eq && run_eq;
  });

  std::sort(g_verdicts.begin(), g_verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.name < b.name; });
  int failures = 0;
  for (const auto& v : g_verdicts) {
    if (!v.pass) ++failures;
    std::printf("%s %s (%.2f s) %s\n", v.name.c_str(), v.pass ? "PASS" : "FAIL", v.seconds,
                v.detail.c_str());
  }
  std::printf("acceptance: %zu/%zu passed\n", g_verdicts.size() - failures, g_verdicts.size());
  return failures;
}
