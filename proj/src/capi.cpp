#include "ampc.h"

#include "ampc/config.hpp"
#include "ampc/metrics.hpp"
#include "ampc/runner.hpp"

#include <cstdio>
#include <cstring>
#include <exception>
#include <string>

struct ampc_ctx {
  ampc::Config config = ampc::default_config();
  std::string last_error;
  std::string report;
};

namespace {

int fail(ampc_ctx* ctx, int code, const std::string& message) {
  if (ctx != nullptr) ctx->last_error = message;
  return code;
}

int copy_out(const std::string& text, char* buf, size_t cap) {
  if (buf != nullptr && cap > 0) {
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return static_cast<int>(text.size());
}

// Runs body() and maps exceptions onto error codes.
template <typename Fn>
int guarded(ampc_ctx* ctx, Fn&& body) {
  if (ctx == nullptr) return AMPC_ERROR;
  try {
    return body();
  } catch (const ampc::ConfigError& e) {
    return fail(ctx, AMPC_BAD_CONFIG, e.what());
  } catch (const ampc::MissingArtifactError& e) {
    return fail(ctx, AMPC_MISSING_ARTIFACT, e.what());
  } catch (const std::exception& e) {
    return fail(ctx, AMPC_ERROR, e.what());
  } catch (...) {
    return fail(ctx, AMPC_ERROR, "unknown failure");
  }
}

int status_code(ampc::RunStatus s) { return static_cast<int>(s); }

}  // namespace

extern "C" {

ampc_ctx* ampc_create(void) {
  try {
    return new ampc_ctx();
  } catch (...) {
    return nullptr;
  }
}

void ampc_destroy(ampc_ctx* ctx) { delete ctx; }

const char* ampc_version(void) { return "ampc 1.0.0"; }

const char* ampc_last_error(const ampc_ctx* ctx) {
  return ctx == nullptr ? "" : ctx->last_error.c_str();
}

int ampc_load_config(ampc_ctx* ctx, const char* path) {
  return guarded(ctx, [&]() -> int {
    ctx->config = (path == nullptr) ? ampc::default_config() : ampc::load_config(path);
    return AMPC_OK;
  });
}

int ampc_set_option(ampc_ctx* ctx, const char* dotted_key, const char* value) {
  return guarded(ctx, [&]() -> int {
    if (dotted_key == nullptr || value == nullptr)
      return fail(ctx, AMPC_BAD_CONFIG, "null option key or value");
    const std::string key(dotted_key);
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
      return fail(ctx, AMPC_BAD_CONFIG, "option key must be section.key: " + key);
    ampc::apply_config_entry(ctx->config, key.substr(0, dot), key.substr(dot + 1), value);
    return AMPC_OK;
  });
}

int ampc_collect(ampc_ctx* ctx, const char* out_csv) {
  return guarded(ctx, [&]() -> int {
    if (out_csv == nullptr) return fail(ctx, AMPC_BAD_CONFIG, "null output path");
    const std::size_t rows = ampc::collect_dataset(ctx->config, out_csv);
    char line[128];
    std::snprintf(line, sizeof line, "collect: %zu samples -> %s\n", rows, out_csv);
    ctx->report = line;
    return AMPC_OK;
  });
}

int ampc_train(ampc_ctx* ctx, const char* data_csv, const char* artifact_out) {
  return guarded(ctx, [&]() -> int {
    if (data_csv == nullptr || artifact_out == nullptr)
      return fail(ctx, AMPC_BAD_CONFIG, "null dataset or artifact path");
    const ampc::TrainReport r = ampc::train_residual(ctx->config, data_csv, artifact_out);
    char line[192];
    std::snprintf(line, sizeof line,
                  "train: %zu samples, %d epochs, mse %.6g -> %.6g, artifact %s\n", r.samples,
                  r.epochs, r.initial_mse, r.final_mse, artifact_out);
    ctx->report = line;
    return AMPC_OK;
  });
}

int ampc_run(ampc_ctx* ctx, const char* scenario, const char* out_csv) {
  return guarded(ctx, [&]() -> int {
    if (scenario == nullptr || out_csv == nullptr)
      return fail(ctx, AMPC_BAD_CONFIG, "null scenario or output path");
    const ampc::Scenario sc = ampc::parse_scenario(scenario);
    const ampc::RunResult result = ampc::run_experiment(ctx->config, sc, out_csv);
    ctx->report = ampc::metrics_text(result.metrics);
    if (result.status != ampc::RunStatus::Ok)
      return fail(ctx, status_code(result.status), result.metrics.abort_reason);
    return AMPC_OK;
  });
}

int ampc_replay(ampc_ctx* ctx, const char* csv_path) {
  return guarded(ctx, [&]() -> int {
    if (csv_path == nullptr) return fail(ctx, AMPC_BAD_CONFIG, "null log path");
    ctx->report = ampc::metrics_text(ampc::replay(csv_path));
    return AMPC_OK;
  });
}

int ampc_report_text(const ampc_ctx* ctx, char* buf, size_t cap) {
  if (ctx == nullptr) return 0;
  return copy_out(ctx->report, buf, cap);
}

int ampc_config_text(const ampc_ctx* ctx, char* buf, size_t cap) {
  if (ctx == nullptr) return 0;
  return copy_out(ampc::canonical_config_text(ctx->config), buf, cap);
}

}  // extern "C"
