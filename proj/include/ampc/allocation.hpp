#pragma once

#include "ampc/types.hpp"

#include <string>

namespace ampc {

enum class MotionMode { Flight, Coordinated, Hover, ConfigAdjust };

const char* mode_name(MotionMode mode);

struct AllocationParams {
  double d_f = 1.0;      // flight/manipulation boundary (m)
  double d_h = 0.075;    // hover manipulation boundary (m)
  double d_edge = 0.38;  // workspace edge distance (m)
  double k_mp = 1.0;
  double k_mn = 1.0;
  double k_q = 1000.0;
  double k_m = 10.0;
  double k_d = 100.0;
  Vec9 w2_initial = Vec9::Ones();
  Vec3 w4_initial = Vec3::Ones();
};

struct WeightScalars {
  double w_q = 0.0;
  double w_m = 0.0;
  double w_d = 0.0;
};

struct AllocationState {
  double gamma = 0.0;
  MotionMode mode = MotionMode::Flight;
  WeightScalars scalars;
  Vec9 w2 = Vec9::Ones();
  Vec3 w4 = Vec3::Ones();
  double d_e = 0.0, d_o = 0.0;
};

// Expected-motion metric. d_e: end-effector distance to the current reference
// point; d_o: distance to the learning-space center; d_g: trajectory max
// diameter. Cases are evaluated in printed order, first match wins; the
// flight boundary collapses to d_h for point-like trajectories (d_g < d_h).
double compute_gamma(double d_e, double d_o, double d_g, const AllocationParams& params);

// w_q = k_q (gamma^2 + 0.1); w_m = k_m / (|gamma| + 0.01);
// w_d = k_d d_o / (1.1 + gamma).
WeightScalars compute_weights(double gamma, double d_o, const AllocationParams& params);

// W2 = diag(w_q x3, w_m x6) .* W2_initial; W4 = w_d * W4_initial.
void assemble_weight_matrices(const WeightScalars& s, const AllocationParams& params,
                              Vec9& w2, Vec3& w4);

// gamma = 0 -> Flight; 0 < gamma < 1 -> Coordinated; gamma = 1 -> Hover;
// gamma < 0 -> ConfigAdjust.
MotionMode classify_mode(double gamma);

AllocationState allocate(double d_e, double d_o, double d_g, const AllocationParams& params);

}  // namespace ampc
