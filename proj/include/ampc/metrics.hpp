#pragma once

#include "ampc/csv.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace ampc {

struct MetricsOptions {
  double stable_threshold = 0.05;  // m
  double stable_hold = 2.0;        // s below threshold before tracking counts as stable
};

struct RunMetrics {
  std::size_t cycles = 0;
  bool window_reached = false;
  double catch_up_time = 0.0;  // entry time of the stable window
  double mean_error = 0.0;     // over the stable window; whole log when never reached
  double max_error = 0.0;
  double mean_error_full = 0.0;
  double gamma_mean = 0.0, gamma_min = 0.0, gamma_max = 0.0;
  std::array<double, 4> mode_fraction{};  // flight, coordinated, hover, config_adjust
  std::string mode_sequence;
  bool timing_available = false;
  double solve_p50_ms = 0.0, solve_p99_ms = 0.0, solve_max_ms = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

RunMetrics compute_metrics(const std::vector<double>& t, const std::vector<double>& error,
                           const std::vector<double>& gamma, const std::vector<double>& mode,
                           const std::vector<double>& solve_ms, const MetricsOptions& opts);

// Reads the t/err/gamma/mode columns of a run log; timings come from the
// optional sidecar values.
RunMetrics compute_metrics(const CsvFile& log, const std::vector<double>& solve_ms,
                           const MetricsOptions& opts);

std::string metrics_text(const RunMetrics& m);

bool metrics_equal(const RunMetrics& a, const RunMetrics& b);

}  // namespace ampc
