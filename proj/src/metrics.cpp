#include "ampc/metrics.hpp"

#include "ampc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ampc {
namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(v.size()) - 1.0,
                       std::max(0.0, std::ceil(q * static_cast<double>(v.size())) - 1.0)));
  return v[idx];
}

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

RunMetrics compute_metrics(const std::vector<double>& t, const std::vector<double>& error,
                           const std::vector<double>& gamma, const std::vector<double>& mode,
                           const std::vector<double>& solve_ms, const MetricsOptions& opts) {
  RunMetrics m;
  m.cycles = t.size();
  if (t.size() != error.size() || t.size() != gamma.size() || t.size() != mode.size())
    throw std::invalid_argument("metrics input columns differ in length");
  if (t.empty()) return m;

  // Stable window: starts at the first sample from which the error stays
  // below threshold for stable_hold seconds without interruption.
  std::size_t run_start = 0;
  std::size_t window = t.size();
  bool run_active = false;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (error[j] >= opts.stable_threshold) {
      run_active = false;
      continue;
    }
    if (!run_active) {
      run_start = j;
      run_active = true;
    }
    if (t[j] - t[run_start] >= opts.stable_hold) {
      window = run_start;
      break;
    }
  }
  m.window_reached = window < t.size();

  double sum_full = 0.0;
  for (const double e : error) sum_full += e;
  m.mean_error_full = sum_full / static_cast<double>(error.size());

  const std::size_t from = m.window_reached ? window : 0;
  double sum = 0.0, mx = 0.0;
  for (std::size_t j = from; j < error.size(); ++j) {
    sum += error[j];
    mx = std::max(mx, error[j]);
  }
  m.mean_error = sum / static_cast<double>(error.size() - from);
  m.max_error = mx;
  m.catch_up_time = m.window_reached ? t[window] : 0.0;

  m.gamma_min = gamma[0];
  m.gamma_max = gamma[0];
  double gsum = 0.0;
  for (const double g : gamma) {
    gsum += g;
    m.gamma_min = std::min(m.gamma_min, g);
    m.gamma_max = std::max(m.gamma_max, g);
  }
  m.gamma_mean = gsum / static_cast<double>(gamma.size());

  int prev_mode = -1;
  int segments = 0;
  for (const double md : mode) {
    const int mi = std::min(3, std::max(0, static_cast<int>(md)));
    m.mode_fraction[static_cast<std::size_t>(mi)] += 1.0;
    if (mi != prev_mode) {
      if (segments < 12) {
        if (!m.mode_sequence.empty()) m.mode_sequence += '>';
        m.mode_sequence += mode_name(static_cast<MotionMode>(mi));
      } else if (segments == 12) {
        m.mode_sequence += ">...";
      }
      ++segments;
      prev_mode = mi;
    }
  }
  for (auto& f : m.mode_fraction) f /= static_cast<double>(mode.size());

  if (!solve_ms.empty()) {
    m.timing_available = true;
    m.solve_p50_ms = percentile(solve_ms, 0.50);
    m.solve_p99_ms = percentile(solve_ms, 0.99);
    m.solve_max_ms = *std::max_element(solve_ms.begin(), solve_ms.end());
  }
  return m;
}

RunMetrics compute_metrics(const CsvFile& log, const std::vector<double>& solve_ms,
                           const MetricsOptions& opts) {
  if (log.rows.empty()) {
    RunMetrics m;
    for (const auto& c : log.comments)
      if (c.rfind("aborted", 0) == 0) {
        m.aborted = true;
        m.abort_reason = c;
      }
    return m;
  }
  RunMetrics m =
      compute_metrics(log.column_values("t"), log.column_values("err"),
                      log.column_values("gamma"), log.column_values("mode"), solve_ms, opts);
  for (const auto& c : log.comments)
    if (c.rfind("aborted", 0) == 0) {
      m.aborted = true;
      m.abort_reason = c;
    }
  return m;
}

std::string metrics_text(const RunMetrics& m) {
  std::ostringstream o;
  o << "cycles: " << m.cycles << "\n";
  if (m.cycles == 0) {
    if (m.aborted) o << "aborted: " << m.abort_reason << "\n";
    return o.str();
  }
  if (m.window_reached)
    o << "stable_window: entered at t=" << fmt6(m.catch_up_time) << " s\n";
  else
    o << "stable_window: not reached\n";
  o << "mean_error_m: " << fmt6(m.mean_error) << "\n";
  o << "max_error_m: " << fmt6(m.max_error) << "\n";
  o << "mean_error_full_m: " << fmt6(m.mean_error_full) << "\n";
  o << "gamma: mean=" << fmt6(m.gamma_mean) << " min=" << fmt6(m.gamma_min)
    << " max=" << fmt6(m.gamma_max) << "\n";
  o << "modes: flight=" << fmt6(m.mode_fraction[0])
    << " coordinated=" << fmt6(m.mode_fraction[1]) << " hover=" << fmt6(m.mode_fraction[2])
    << " config_adjust=" << fmt6(m.mode_fraction[3]) << "\n";
  o << "mode_sequence: " << m.mode_sequence << "\n";
  if (m.timing_available)
    o << "solve_ms: p50=" << fmt6(m.solve_p50_ms) << " p99=" << fmt6(m.solve_p99_ms)
      << " max=" << fmt6(m.solve_max_ms) << "\n";
  else
    o << "solve_ms: unavailable\n";
  if (m.aborted) o << "aborted: " << m.abort_reason << "\n";
  return o.str();
}

bool metrics_equal(const RunMetrics& a, const RunMetrics& b) {
  return a.cycles == b.cycles && a.window_reached == b.window_reached &&
         a.catch_up_time == b.catch_up_time && a.mean_error == b.mean_error &&
         a.max_error == b.max_error && a.mean_error_full == b.mean_error_full &&
         a.gamma_mean == b.gamma_mean && a.gamma_min == b.gamma_min &&
         a.gamma_max == b.gamma_max && a.mode_fraction == b.mode_fraction &&
         a.mode_sequence == b.mode_sequence && a.aborted == b.aborted;
}

}  // namespace ampc
