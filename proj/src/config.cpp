#include "ampc/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace ampc {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(section + "." + key + ": not a number: '" + v + "'");
  return x;
}

std::uint32_t parse_u32(const std::string& section, const std::string& key,
                        const std::string& v) {
  char* end = nullptr;
  const unsigned long x = std::strtoul(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || x > 0xffffffffUL)
    throw ConfigError(section + "." + key + ": not an unsigned integer: '" + v + "'");
  return static_cast<std::uint32_t>(x);
}

int parse_int(const std::string& section, const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(section + "." + key + ": not an integer: '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(section + "." + key + ": not a boolean: '" + v + "'");
}

std::vector<double> parse_vector(const std::string& section, const std::string& key,
                                 const std::string& v, std::size_t n) {
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(section, key, tok));
  if (out.size() != n) {
    throw ConfigError(section + "." + key + ": expected " + std::to_string(n) +
                      " values, got " + std::to_string(out.size()));
  }
  return out;
}

template <typename Derived>
void assign_vec(Eigen::MatrixBase<Derived>& dst, const std::vector<double>& src) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[static_cast<Eigen::Index>(i)] = src[i];
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename Derived>
std::string fmt_vec(const Eigen::MatrixBase<Derived>& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

Config default_config() {
  Config c;
  DisturbanceConfig& d = c.plant.disturbance;
  d.bias = Vec3(0.5, -0.4, 0.3);
  d.amp1 = Vec3(0.12, 0.10, 0.06);
  d.freq1 = Vec3(0.23, 0.19, 0.31);
  d.amp2 = Vec3(0.08, 0.07, 0.05);
  d.freq2 = Vec3(0.47, 0.53, 0.41);
  d.phase2 = Vec3(1.1, 2.3, 0.7);
  d.noise_std = 0.05;
  d.noise_tau = 0.5;
  d.seed = 99;
  return c;
}

void apply_config_entry(Config& cfg, const std::string& section, const std::string& key,
                        const std::string& value) {
  auto num = [&] { return parse_double(section, key, value); };
  auto vec = [&](auto& dst, std::size_t n) {
    auto parsed = parse_vector(section, key, value, n);
    assign_vec(dst, parsed);
  };

  if (section == "run") {
    if (key == "variant") {
      if (value != "modified+residual" && value != "modified-only" &&
          value != "integral-baseline")
        throw ConfigError("run.variant: unknown variant '" + value + "'");
      cfg.run.variant = value;
    } else if (key == "duration") cfg.run.duration = num();
    else if (key == "seed") cfg.run.seed = parse_u32(section, key, value);
    else if (key == "dt") cfg.run.dt = num();
    else if (key == "artifact") cfg.run.artifact = value;
    else throw ConfigError("unknown key run." + key);
    return;
  }
  if (section == "model") {
    if (key == "k_b") vec(cfg.k_b, 3);
    else throw ConfigError("unknown key model." + key);
    return;
  }
  if (section == "arm") {
    if (key == "q_op") vec(cfg.q_op, 6);
    else if (key == "joint_limit") {
      const double lim = num();
      cfg.mpc.joint_min.setConstant(-lim);
      cfg.mpc.joint_max.setConstant(lim);
      cfg.plant.joint_min.setConstant(-lim);
      cfg.plant.joint_max.setConstant(lim);
    } else throw ConfigError("unknown key arm." + key);
    return;
  }
  if (section == "mpc") {
    if (key == "horizon") cfg.mpc.horizon = parse_int(section, key, value);
    else if (key == "w1") vec(cfg.mpc.w1, 3);
    else if (key == "w3") vec(cfg.mpc.w3, 9);
    else if (key == "k_e") vec(cfg.mpc.k_e, 3);
    else if (key == "quad_vel_limit") cfg.mpc.quad_vel_limit = num();
    else if (key == "joint_rate_limit") cfg.mpc.joint_rate_limit = num();
    else if (key == "quad_acc_limit") cfg.mpc.quad_acc_limit = num();
    else if (key == "joint_acc_limit") cfg.mpc.joint_acc_limit = num();
    else if (key == "qp_tol") cfg.mpc.qp_tol = num();
    else if (key == "qp_max_iter") cfg.mpc.qp_max_iter = parse_int(section, key, value);
    else if (key == "state_penalty") cfg.mpc.state_penalty = num();
    else if (key == "state_penalty_passes")
      cfg.mpc.state_penalty_passes = parse_int(section, key, value);
    else if (key == "per_stage_reference")
      cfg.mpc.per_stage_reference = parse_bool(section, key, value);
    else throw ConfigError("unknown key mpc." + key);
    return;
  }
  if (section == "allocation") {
    if (key == "d_f") cfg.alloc.d_f = num();
    else if (key == "d_h") cfg.alloc.d_h = num();
    else if (key == "d_edge") cfg.alloc.d_edge = num();
    else if (key == "k_mp") cfg.alloc.k_mp = num();
    else if (key == "k_mn") cfg.alloc.k_mn = num();
    else if (key == "k_q") cfg.alloc.k_q = num();
    else if (key == "k_m") cfg.alloc.k_m = num();
    else if (key == "k_d") cfg.alloc.k_d = num();
    else if (key == "w2_base") vec(cfg.alloc.w2_initial, 9);
    else if (key == "w4_base") vec(cfg.alloc.w4_initial, 3);
    else throw ConfigError("unknown key allocation." + key);
    return;
  }
  if (section == "plant") {
    if (key == "omega_n") vec(cfg.plant.omega_n, 3);
    else if (key == "zeta") cfg.plant.zeta = num();
    else if (key == "attitude_tau") cfg.plant.attitude_tau = num();
    else if (key == "gravity") cfg.plant.gravity = num();
    else if (key == "kp_joint") cfg.plant.kp_joint = num();
    else if (key == "kd_joint") cfg.plant.kd_joint = num();
    else if (key == "substep") cfg.plant.substep = num();
    else if (key == "mass_arm") cfg.plant.mass_arm = num();
    else if (key == "mass_total") cfg.plant.mass_total = num();
    else if (key == "enable_coupling")
      cfg.plant.enable_coupling = parse_bool(section, key, value);
    else if (key == "envelope") cfg.plant.envelope = num();
    else throw ConfigError("unknown key plant." + key);
    return;
  }
  if (section == "disturbance") {
    DisturbanceConfig& d = cfg.plant.disturbance;
    if (key == "bias") vec(d.bias, 3);
    else if (key == "amp1") vec(d.amp1, 3);
    else if (key == "freq1") vec(d.freq1, 3);
    else if (key == "phase1") vec(d.phase1, 3);
    else if (key == "amp2") vec(d.amp2, 3);
    else if (key == "freq2") vec(d.freq2, 3);
    else if (key == "phase2") vec(d.phase2, 3);
    else if (key == "noise_std") d.noise_std = num();
    else if (key == "noise_tau") d.noise_tau = num();
    else if (key == "seed") d.seed = parse_u32(section, key, value);
    else throw ConfigError("unknown key disturbance." + key);
    return;
  }
  if (section == "clover") {
    if (key == "scale") cfg.clover.scale = num();
    else if (key == "period") cfg.clover.period = num();
    else if (key == "center") vec(cfg.clover.center, 3);
    else throw ConfigError("unknown key clover." + key);
    return;
  }
  if (section == "target") {
    if (key == "start") vec(cfg.target.start, 3);
    else if (key == "velocity") vec(cfg.target.velocity, 3);
    else if (key == "follow_height") cfg.target.follow_height = num();
    else throw ConfigError("unknown key target." + key);
    return;
  }
  if (section == "collect") {
    if (key == "stages") cfg.collect.stages = parse_int(section, key, value);
    else if (key == "stage_duration") cfg.collect.stage_duration = num();
    else if (key == "half_extent") vec(cfg.collect.half_extent, 3);
    else if (key == "circle_radius") cfg.collect.circle_radius = num();
    else throw ConfigError("unknown key collect." + key);
    return;
  }
  if (section == "train") {
    if (key == "learning_rate") cfg.train.learning_rate = num();
    else if (key == "epochs") cfg.train.epochs = parse_int(section, key, value);
    else if (key == "batch_size") cfg.train.batch_size = parse_int(section, key, value);
    else if (key == "seed") cfg.train.seed = parse_u32(section, key, value);
    else throw ConfigError("unknown key train." + key);
    return;
  }
  if (section == "online") {
    if (key == "learning_rate") cfg.online.learning_rate = num();
    else if (key == "batch") cfg.online.batch = parse_int(section, key, value);
    else throw ConfigError("unknown key online." + key);
    return;
  }
  throw ConfigError("unknown section [" + section + "]");
}

Config parse_config_text(const std::string& text) {
  Config cfg = default_config();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_config_entry(cfg, section, key, value);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config_text(const Config& c) {
  std::ostringstream o;
  o << "[run]\n";
  o << "variant = " << c.run.variant << "\n";
  o << "duration = " << fmt(c.run.duration) << "\n";
  o << "seed = " << c.run.seed << "\n";
  o << "dt = " << fmt(c.run.dt) << "\n";
  o << "artifact = " << c.run.artifact << "\n";
  o << "[model]\n";
  o << "k_b = " << fmt_vec(c.k_b) << "\n";
  o << "[arm]\n";
  o << "q_op = " << fmt_vec(c.q_op) << "\n";
  o << "joint_limit = " << fmt(c.plant.joint_max[0]) << "\n";
  o << "[mpc]\n";
  o << "horizon = " << c.mpc.horizon << "\n";
  o << "w1 = " << fmt_vec(c.mpc.w1) << "\n";
  o << "w3 = " << fmt_vec(c.mpc.w3) << "\n";
  o << "k_e = " << fmt_vec(c.mpc.k_e) << "\n";
  o << "quad_vel_limit = " << fmt(c.mpc.quad_vel_limit) << "\n";
  o << "joint_rate_limit = " << fmt(c.mpc.joint_rate_limit) << "\n";
  o << "quad_acc_limit = " << fmt(c.mpc.quad_acc_limit) << "\n";
  o << "joint_acc_limit = " << fmt(c.mpc.joint_acc_limit) << "\n";
  o << "qp_tol = " << fmt(c.mpc.qp_tol) << "\n";
  o << "qp_max_iter = " << c.mpc.qp_max_iter << "\n";
  o << "state_penalty = " << fmt(c.mpc.state_penalty) << "\n";
  o << "state_penalty_passes = " << c.mpc.state_penalty_passes << "\n";
  o << "per_stage_reference = " << (c.mpc.per_stage_reference ? "true" : "false") << "\n";
  o << "[allocation]\n";
  o << "d_f = " << fmt(c.alloc.d_f) << "\n";
  o << "d_h = " << fmt(c.alloc.d_h) << "\n";
  o << "d_edge = " << fmt(c.alloc.d_edge) << "\n";
  o << "k_mp = " << fmt(c.alloc.k_mp) << "\n";
  o << "k_mn = " << fmt(c.alloc.k_mn) << "\n";
  o << "k_q = " << fmt(c.alloc.k_q) << "\n";
  o << "k_m = " << fmt(c.alloc.k_m) << "\n";
  o << "k_d = " << fmt(c.alloc.k_d) << "\n";
  o << "w2_base = " << fmt_vec(c.alloc.w2_initial) << "\n";
  o << "w4_base = " << fmt_vec(c.alloc.w4_initial) << "\n";
  o << "[plant]\n";
  o << "omega_n = " << fmt_vec(c.plant.omega_n) << "\n";
  o << "zeta = " << fmt(c.plant.zeta) << "\n";
  o << "attitude_tau = " << fmt(c.plant.attitude_tau) << "\n";
  o << "gravity = " << fmt(c.plant.gravity) << "\n";
  o << "kp_joint = " << fmt(c.plant.kp_joint) << "\n";
  o << "kd_joint = " << fmt(c.plant.kd_joint) << "\n";
  o << "substep = " << fmt(c.plant.substep) << "\n";
  o << "mass_arm = " << fmt(c.plant.mass_arm) << "\n";
  o << "mass_total = " << fmt(c.plant.mass_total) << "\n";
  o << "enable_coupling = " << (c.plant.enable_coupling ? "true" : "false") << "\n";
  o << "envelope = " << fmt(c.plant.envelope) << "\n";
  o << "[disturbance]\n";
  const DisturbanceConfig& d = c.plant.disturbance;
  o << "bias = " << fmt_vec(d.bias) << "\n";
  o << "amp1 = " << fmt_vec(d.amp1) << "\n";
  o << "freq1 = " << fmt_vec(d.freq1) << "\n";
  o << "phase1 = " << fmt_vec(d.phase1) << "\n";
  o << "amp2 = " << fmt_vec(d.amp2) << "\n";
  o << "freq2 = " << fmt_vec(d.freq2) << "\n";
  o << "phase2 = " << fmt_vec(d.phase2) << "\n";
  o << "noise_std = " << fmt(d.noise_std) << "\n";
  o << "noise_tau = " << fmt(d.noise_tau) << "\n";
  o << "seed = " << d.seed << "\n";
  o << "[clover]\n";
  o << "scale = " << fmt(c.clover.scale) << "\n";
  o << "period = " << fmt(c.clover.period) << "\n";
  o << "center = " << fmt_vec(c.clover.center) << "\n";
  o << "[target]\n";
  o << "start = " << fmt_vec(c.target.start) << "\n";
  o << "velocity = " << fmt_vec(c.target.velocity) << "\n";
  o << "follow_height = " << fmt(c.target.follow_height) << "\n";
  o << "[collect]\n";
  o << "stages = " << c.collect.stages << "\n";
  o << "stage_duration = " << fmt(c.collect.stage_duration) << "\n";
  o << "half_extent = " << fmt_vec(c.collect.half_extent) << "\n";
  o << "circle_radius = " << fmt(c.collect.circle_radius) << "\n";
  o << "[train]\n";
  o << "learning_rate = " << fmt(c.train.learning_rate) << "\n";
  o << "epochs = " << c.train.epochs << "\n";
  o << "batch_size = " << c.train.batch_size << "\n";
  o << "seed = " << c.train.seed << "\n";
  o << "[online]\n";
  o << "learning_rate = " << fmt(c.online.learning_rate) << "\n";
  o << "batch = " << c.online.batch << "\n";
  return o.str();
}

std::uint64_t config_hash(const Config& cfg) {
  const std::string text = canonical_config_text(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const Config& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash(cfg));
  return buf;
}

}  // namespace ampc
