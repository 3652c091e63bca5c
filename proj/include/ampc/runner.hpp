#pragma once

#include "ampc/config.hpp"
#include "ampc/metrics.hpp"
#include "ampc/mpc.hpp"

#include <stdexcept>
#include <string>

namespace ampc {

enum class Scenario { Clover, MovingTarget };

// Values double as process exit codes.
enum class RunStatus {
  Ok = 0,
  BadConfig = 2,
  MissingArtifact = 3,
  Diverged = 4,
  SolverFailure = 5,
};

struct MissingArtifactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  RunStatus status = RunStatus::Ok;
  RunMetrics metrics;
};

ControllerVariant parse_variant(const std::string& name);  // throws ConfigError
const char* variant_name(ControllerVariant v);
Scenario parse_scenario(const std::string& name);  // throws ConfigError

// End-effector body position at the operating configuration; the learning
// space is centered here.
Vec3 learning_center(const Config& cfg);

// Closed-loop run: plant and controller in lockstep at 1/dt, commands double
// integrated into plant references. Writes the per-cycle log to out_csv and
// wall times to "<out_csv>.timing.csv" (kept apart so logs stay
// byte-reproducible).
RunResult run_experiment(const Config& cfg, Scenario scenario, const std::string& out_csv);

// Scripted data-collection schedule; returns rows written. The file appears
// only on completion.
std::size_t collect_dataset(const Config& cfg, const std::string& out_csv);

TrainReport train_residual(const Config& cfg, const std::string& data_csv,
                           const std::string& artifact_path);

// Recomputes metrics from a run log (plus its timing sidecar when present).
RunMetrics replay(const std::string& csv_path);

}  // namespace ampc
