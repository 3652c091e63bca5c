#include "ampc/config.hpp"

#include "doctest.h"

using namespace ampc;

TEST_CASE("canonical text round-trips the default config exactly") {
  const Config a = default_config();
  const std::string text = canonical_config_text(a);
  const Config b = parse_config_text(text);
  CHECK(canonical_config_text(b) == text);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash_hex(a).size() == 16);
}

TEST_CASE("defaults carry the documented controller numbers") {
  const Config c = default_config();
  CHECK((c.k_b - Vec3(6.67, 6.67, 2.38)).norm() == 0.0);
  CHECK(c.mpc.horizon == 15);
  CHECK(c.mpc.dt == 0.02);
  CHECK(c.run.dt == 0.02);
  CHECK((c.mpc.k_e - Vec3(0.8, 1.2, 1.2)).norm() == 0.0);
  CHECK(c.alloc.d_h == 0.075);
  CHECK(c.alloc.d_f == 1.0);
  CHECK(c.plant.zeta == 1.0);
  // The plant's natural frequency sits where the first-order gain maps back
  // to k_b: 0.4 * omega_n = k_b per axis.
  CHECK((0.4 * c.plant.omega_n - c.k_b).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(c.run.variant == "modified+residual");
  CHECK(c.collect.stages == 6);
  CHECK(c.online.batch == 20);
}

TEST_CASE("unknown sections and keys are rejected") {
  Config c = default_config();
  CHECK_THROWS_AS(apply_config_entry(c, "nope", "x", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(c, "mpc", "nope", "1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[mpc]\nbogus = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nosuch]\nhorizon = 3\n"), ConfigError);
}

TEST_CASE("malformed values and structure are rejected") {
  Config c = default_config();
  CHECK_THROWS_AS(apply_config_entry(c, "mpc", "horizon", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(c, "mpc", "w1", "1 2"), ConfigError);       // too short
  CHECK_THROWS_AS(apply_config_entry(c, "mpc", "w1", "1 2 3 4"), ConfigError);   // too long
  CHECK_THROWS_AS(apply_config_entry(c, "mpc", "quad_vel_limit", "1.5x"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(c, "plant", "enable_coupling", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(c, "run", "variant", "other"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(c, "run", "seed", "-3"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("horizon = 3\n"), ConfigError);  // key before any section
  CHECK_THROWS_AS(parse_config_text("[mpc\nhorizon = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[mpc]\nhorizon 3\n"), ConfigError);
}

TEST_CASE("entries land on the right fields") {
  Config c = default_config();
  apply_config_entry(c, "mpc", "w1", "1 2 3");
  CHECK((c.mpc.w1 - Vec3(1, 2, 3)).norm() == 0.0);
  apply_config_entry(c, "allocation", "w2_base", "1 2 3 4 5 6 7 8 9");
  CHECK(c.alloc.w2_initial[8] == 9.0);
  apply_config_entry(c, "arm", "joint_limit", "1.9");
  CHECK(c.mpc.joint_min[2] == -1.9);
  CHECK(c.plant.joint_max[5] == 1.9);
  apply_config_entry(c, "run", "variant", "integral-baseline");
  CHECK(c.run.variant == "integral-baseline");
  apply_config_entry(c, "disturbance", "seed", "123");
  CHECK(c.plant.disturbance.seed == 123u);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
  const Config c = parse_config_text(
      "# leading comment\n"
      "\n"
      "[mpc]   \n"
      "  horizon = 7   # trailing comment\n"
      "\n"
      "[plant]\n"
      "zeta = 0.9\n");
  CHECK(c.mpc.horizon == 7);
  CHECK(c.plant.zeta == 0.9);
}

TEST_CASE("hash tracks content changes and nothing else") {
  const Config a = default_config();
  Config b = default_config();
  CHECK(config_hash(a) == config_hash(b));
  apply_config_entry(b, "mpc", "horizon", "14");
  CHECK(config_hash(a) != config_hash(b));
  apply_config_entry(b, "mpc", "horizon", "15");
  CHECK(config_hash(a) == config_hash(b));
}
