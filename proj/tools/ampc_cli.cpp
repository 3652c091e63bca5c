#include "ampc.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct CtxDeleter {
  void operator()(ampc_ctx* ctx) const { ampc_destroy(ctx); }
};
using CtxPtr = std::unique_ptr<ampc_ctx, CtxDeleter>;

std::string report_text(const ampc_ctx* ctx) {
  const int n = ampc_report_text(ctx, nullptr, 0);
  std::string out(static_cast<size_t>(n), '\0');
  ampc_report_text(ctx, out.data(), out.size() + 1);
  return out;
}

std::string config_text(const ampc_ctx* ctx) {
  const int n = ampc_config_text(ctx, nullptr, 0);
  std::string out(static_cast<size_t>(n), '\0');
  ampc_config_text(ctx, out.data(), out.size() + 1);
  return out;
}

// Applies --config, then the named flags, then --set entries (most specific
// last). Returns AMPC_OK or the first failing code.
int apply_options(ampc_ctx* ctx, const std::string& config_path,
                  const std::vector<std::pair<std::string, std::string>>& named,
                  const std::vector<std::string>& sets) {
  if (!config_path.empty()) {
    if (int rc = ampc_load_config(ctx, config_path.c_str()); rc != AMPC_OK) return rc;
  }
  for (const auto& [key, value] : named) {
    if (int rc = ampc_set_option(ctx, key.c_str(), value.c_str()); rc != AMPC_OK) return rc;
  }
  for (const std::string& entry : sets) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n", entry.c_str());
      return AMPC_BAD_CONFIG;
    }
    const std::string key = entry.substr(0, eq);
    const std::string value = entry.substr(eq + 1);
    if (int rc = ampc_set_option(ctx, key.c_str(), value.c_str()); rc != AMPC_OK) return rc;
  }
  return AMPC_OK;
}

int finish(const ampc_ctx* ctx, int rc) {
  const std::string report = report_text(ctx);
  if (!report.empty()) std::fputs(report.c_str(), stdout);
  if (rc != AMPC_OK) std::fprintf(stderr, "error (%d): %s\n", rc, ampc_last_error(ctx));
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial manipulator predictive coordinate control harness"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", ampc_version());

  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "Config file (defaults built in)");
  app.add_option("--set", sets, "Override one entry, section.key=value (repeatable)");

  std::string variant;
  std::string seed;
  std::string duration;
  std::string artifact;
  std::string out_path;
  std::string data_path;
  std::string log_path;

  CLI::App* collect = app.add_subcommand("collect", "Record a training dataset");
  collect->add_option("--out", out_path, "Dataset CSV path")->required();
  collect->add_option("--seed", seed, "Run seed");

  CLI::App* train = app.add_subcommand("train", "Train the residual network offline");
  train->add_option("--data", data_path, "Dataset CSV from collect")->required();
  train->add_option("--out", out_path, "Artifact path")->required();

  CLI::App* track = app.add_subcommand("track", "Clover trajectory tracking run");
  CLI::App* follow = app.add_subcommand("follow", "Moving target following run");
  for (CLI::App* sub : {track, follow}) {
    sub->add_option("--out", out_path, "Run log CSV path")->required();
    sub->add_option("--variant", variant,
                    "modified+residual | modified-only | integral-baseline");
    sub->add_option("--seed", seed, "Run seed");
    sub->add_option("--duration", duration, "Run length, seconds");
    sub->add_option("--artifact", artifact, "Residual network artifact");
  }

  CLI::App* replay = app.add_subcommand("replay", "Recompute metrics from a run log");
  replay->add_option("--log", log_path, "Run log CSV")->required();

  CLI::App* show = app.add_subcommand("print-config", "Print the effective config");

  CLI11_PARSE(app, argc, argv);

  CtxPtr ctx(ampc_create());
  if (!ctx) {
    std::fputs("error: out of memory\n", stderr);
    return AMPC_ERROR;
  }

  std::vector<std::pair<std::string, std::string>> named;
  if (!variant.empty()) named.emplace_back("run.variant", variant);
  if (!seed.empty()) named.emplace_back("run.seed", seed);
  if (!duration.empty()) named.emplace_back("run.duration", duration);
  if (!artifact.empty()) named.emplace_back("run.artifact", artifact);

  if (int rc = apply_options(ctx.get(), config_path, named, sets); rc != AMPC_OK) {
    std::fprintf(stderr, "error (%d): %s\n", rc, ampc_last_error(ctx.get()));
    return rc;
  }

  if (show->parsed()) {
    std::fputs(config_text(ctx.get()).c_str(), stdout);
    return AMPC_OK;
  }
  if (collect->parsed())
    return finish(ctx.get(), ampc_collect(ctx.get(), out_path.c_str()));
  if (train->parsed())
    return finish(ctx.get(), ampc_train(ctx.get(), data_path.c_str(), out_path.c_str()));
  if (track->parsed())
    return finish(ctx.get(), ampc_run(ctx.get(), "clover", out_path.c_str()));
  if (follow->parsed())
    return finish(ctx.get(), ampc_run(ctx.get(), "moving_target", out_path.c_str()));
  if (replay->parsed())
    return finish(ctx.get(), ampc_replay(ctx.get(), log_path.c_str()));

  std::fputs(app.help().c_str(), stderr);
  return AMPC_ERROR;
}
