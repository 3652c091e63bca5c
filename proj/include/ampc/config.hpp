#pragma once

#include "ampc/allocation.hpp"
#include "ampc/mpc.hpp"
#include "ampc/plant.hpp"
#include "ampc/residual.hpp"
#include "ampc/trajectory.hpp"
#include "ampc/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ampc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunSettings {
  std::string variant = "modified+residual";  // modified+residual | modified-only | integral-baseline
  double duration = 120.0;
  std::uint32_t seed = 1;
  double dt = 0.02;
  std::string artifact = "residual_net.txt";
};

struct CollectSettings {
  int stages = 6;
  double stage_duration = 100.0;
  Vec3 half_extent = Vec3(0.06, 0.055, 0.035);
  double circle_radius = 0.10;
};

struct OnlineSettings {
  double learning_rate = 0.0015;
  int batch = 20;
};

// Everything a run needs, from one sectioned text file. Unknown sections or
// keys are rejected, not ignored.
struct Config {
  RunSettings run;
  Vec3 k_b = Vec3(6.67, 6.67, 2.38);
  Vec6 q_op = (Vec6() << 0.0, -0.2, -0.7, 0.0, -0.6, 0.0).finished();
  MpcConfig mpc;
  AllocationParams alloc;
  PlantConfig plant;
  CloverParams clover;
  MovingTargetParams target;
  CollectSettings collect;
  TrainOptions train;
  OnlineSettings online;
};

Config default_config();

// Applies one "section.key = value" entry. Throws ConfigError on unknown
// section/key or malformed value.
void apply_config_entry(Config& cfg, const std::string& section, const std::string& key,
                        const std::string& value);

Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

// Full key set in fixed order with %.17g values; equal configs produce equal
// text, and parsing the text reproduces the config exactly.
std::string canonical_config_text(const Config& cfg);

std::uint64_t config_hash(const Config& cfg);  // FNV-1a over the canonical text
std::string config_hash_hex(const Config& cfg);

}  // namespace ampc
