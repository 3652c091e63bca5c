#include "ampc.h"

#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string report(const ampc_ctx* ctx) {
  char buf[4096];
  ampc_report_text(ctx, buf, sizeof buf);
  return buf;
}

struct CtxGuard {
  ampc_ctx* ctx = ampc_create();
  ~CtxGuard() { ampc_destroy(ctx); }
};

}  // namespace

TEST_CASE("context lifecycle, version, and error text") {
  CtxGuard g;
  REQUIRE(g.ctx != nullptr);
  CHECK(std::strncmp(ampc_version(), "ampc ", 5) == 0);
  CHECK(std::string(ampc_last_error(g.ctx)).empty());
  CHECK(std::string(ampc_last_error(nullptr)).empty());
  ampc_destroy(nullptr);  // must be a harmless no-op
}

TEST_CASE("set_option validates keys and records errors") {
  CtxGuard g;
  CHECK(ampc_set_option(g.ctx, "mpc.horizon", "12") == AMPC_OK);
  CHECK(ampc_set_option(g.ctx, "nope.key", "1") == AMPC_BAD_CONFIG);
  CHECK(std::string(ampc_last_error(g.ctx)).find("nope") != std::string::npos);
  CHECK(ampc_set_option(g.ctx, "mpc", "1") == AMPC_BAD_CONFIG);  // no dot
  CHECK(ampc_set_option(g.ctx, "mpc.horizon", "abc") == AMPC_BAD_CONFIG);
  CHECK(ampc_set_option(g.ctx, nullptr, "1") == AMPC_BAD_CONFIG);

  char buf[1 << 16];
  const int n = ampc_config_text(g.ctx, buf, sizeof buf);
  REQUIRE(n > 0);
  REQUIRE(n < int(sizeof buf));
  const std::string text(buf);
  CHECK(text.find("horizon = 12") != std::string::npos);
  CHECK(text.find("[allocation]") != std::string::npos);
}

TEST_CASE("config loads from file; missing or malformed files fail cleanly") {
  CtxGuard g;
  const std::string path = tmp_path("ampc_capi_cfg.txt");
  std::ofstream(path) << "[mpc]\nhorizon = 9\n";
  CHECK(ampc_load_config(g.ctx, path.c_str()) == AMPC_OK);
  char buf[1 << 16];
  ampc_config_text(g.ctx, buf, sizeof buf);
  CHECK(std::string(buf).find("horizon = 9") != std::string::npos);

  CHECK(ampc_load_config(g.ctx, tmp_path("ampc_capi_none.txt").c_str()) == AMPC_BAD_CONFIG);
  std::ofstream(path) << "[mpc]\nbogus = 1\n";
  CHECK(ampc_load_config(g.ctx, path.c_str()) == AMPC_BAD_CONFIG);
  // nullptr resets to defaults
  CHECK(ampc_load_config(g.ctx, nullptr) == AMPC_OK);
  ampc_config_text(g.ctx, buf, sizeof buf);
  CHECK(std::string(buf).find("horizon = 15") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("report text is truncated but its full length is returned") {
  CtxGuard g;
  const std::string csv = tmp_path("ampc_capi_short.csv");
  REQUIRE(ampc_set_option(g.ctx, "run.variant", "modified-only") == AMPC_OK);
  REQUIRE(ampc_set_option(g.ctx, "run.duration", "0.2") == AMPC_OK);
  REQUIRE(ampc_run(g.ctx, "clover", csv.c_str()) == AMPC_OK);
  char big[4096];
  const int full = ampc_report_text(g.ctx, big, sizeof big);
  REQUIRE(full > 8);
  char small[8];
  CHECK(ampc_report_text(g.ctx, small, sizeof small) == full);
  CHECK(std::strlen(small) == 7);
  CHECK(std::strncmp(small, big, 7) == 0);
  std::filesystem::remove(csv);
  std::filesystem::remove(csv + ".timing.csv");
}

TEST_CASE("run maps missing artifacts and bad scenarios to their codes") {
  CtxGuard g;
  const std::string csv = tmp_path("ampc_capi_codes.csv");
  CHECK(ampc_run(g.ctx, "spiral", csv.c_str()) == AMPC_BAD_CONFIG);
  REQUIRE(ampc_set_option(g.ctx, "run.artifact",
                          tmp_path("ampc_capi_missing_net.txt").c_str()) == AMPC_OK);
  CHECK(ampc_run(g.ctx, "clover", csv.c_str()) == AMPC_MISSING_ARTIFACT);
  CHECK(std::string(ampc_last_error(g.ctx)).find("artifact") != std::string::npos);
  CHECK(ampc_run(g.ctx, nullptr, csv.c_str()) == AMPC_BAD_CONFIG);
  CHECK(ampc_replay(g.ctx, tmp_path("ampc_capi_nolog.csv").c_str()) == AMPC_ERROR);
}

TEST_CASE("miniature collect-train-run-replay chain through the C API") {
  CtxGuard g;
  const std::string data = tmp_path("ampc_capi_data.csv");
  const std::string artifact = tmp_path("ampc_capi_net.txt");
  const std::string csv = tmp_path("ampc_capi_run.csv");

  REQUIRE(ampc_set_option(g.ctx, "collect.stages", "1") == AMPC_OK);
  REQUIRE(ampc_set_option(g.ctx, "collect.stage_duration", "2") == AMPC_OK);
  REQUIRE(ampc_set_option(g.ctx, "train.epochs", "5") == AMPC_OK);
  REQUIRE(ampc_set_option(g.ctx, "run.duration", "1") == AMPC_OK);
  REQUIRE(ampc_set_option(g.ctx, "run.artifact", artifact.c_str()) == AMPC_OK);

  REQUIRE(ampc_collect(g.ctx, data.c_str()) == AMPC_OK);
  CHECK(report(g.ctx).find("collect: 100 samples") == 0);

  REQUIRE(ampc_train(g.ctx, data.c_str(), artifact.c_str()) == AMPC_OK);
  CHECK(report(g.ctx).find("train: 100 samples") == 0);

  REQUIRE(ampc_run(g.ctx, "clover", csv.c_str()) == AMPC_OK);
  const std::string run_report = report(g.ctx);
  CHECK(run_report.find("cycles: 50") != std::string::npos);

  REQUIRE(ampc_replay(g.ctx, csv.c_str()) == AMPC_OK);
  CHECK(report(g.ctx).find("cycles: 50") != std::string::npos);

  for (const auto& p : {data, artifact, csv, csv + ".timing.csv"})
    std::filesystem::remove(p);
}
