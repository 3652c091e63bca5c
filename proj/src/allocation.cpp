#include "ampc/allocation.hpp"

#include <algorithm>
#include <cmath>

namespace ampc {

const char* mode_name(MotionMode mode) {
  switch (mode) {
    case MotionMode::Flight: return "flight";
    case MotionMode::Coordinated: return "coordinated";
    case MotionMode::Hover: return "hover";
    case MotionMode::ConfigAdjust: return "config_adjust";
  }
  return "unknown";
}

double compute_gamma(double d_e, double d_o, double d_g, const AllocationParams& p) {
  const double d_f = d_g < p.d_h ? p.d_h : p.d_f;

  if (d_e > d_f) return 0.0;
  if (d_e > p.d_h && d_e <= d_f && d_o < p.d_h) return (p.k_mp + p.d_h) / (p.k_mp + d_e);
  if (d_e <= p.d_h && d_o < p.d_h && d_g < p.d_h) return 1.0;
  // The negative branch leaves [-1, 0) only when the end-effector is pushed
  // past the nominal workspace edge; clamp keeps gamma a valid metric there.
  if (d_o >= p.d_h)
    return std::max(-1.0, -p.k_mn * (d_o - p.d_h) / (p.d_edge - p.d_h));
  // Remaining region (d_e <= d_h, d_o < d_h, d_g >= d_h): a trajectory too
  // large for hover manipulation, tracked well. The case list leaves this
  // uncovered. No manipulator motion is expected here: the pattern exceeds
  // the hover space, so the quadcopter has to carry it and the arm stays
  // centered. Any positive value frees the arm through w_m and lets it
  // drift out of the hover sphere, so treat the region as flight.
  return 0.0;
}

WeightScalars compute_weights(double gamma, double d_o, const AllocationParams& p) {
  WeightScalars s;
  s.w_q = p.k_q * (gamma * gamma + 0.1);
  s.w_m = p.k_m / (std::abs(gamma) + 0.01);
  s.w_d = p.k_d * d_o / (1.1 + gamma);
  return s;
}

void assemble_weight_matrices(const WeightScalars& s, const AllocationParams& p,
                              Vec9& w2, Vec3& w4) {
  Vec9 scale;
  scale << s.w_q, s.w_q, s.w_q, s.w_m, s.w_m, s.w_m, s.w_m, s.w_m, s.w_m;
  w2 = scale.cwiseProduct(p.w2_initial);
  w4 = s.w_d * p.w4_initial;
}

MotionMode classify_mode(double gamma) {
  if (gamma < 0.0) return MotionMode::ConfigAdjust;
  if (gamma == 0.0) return MotionMode::Flight;
  if (gamma >= 1.0) return MotionMode::Hover;
  return MotionMode::Coordinated;
}

AllocationState allocate(double d_e, double d_o, double d_g, const AllocationParams& p) {
  AllocationState st;
  st.d_e = d_e;
  st.d_o = d_o;
  st.gamma = compute_gamma(d_e, d_o, d_g, p);
  st.mode = classify_mode(st.gamma);
  st.scalars = compute_weights(st.gamma, d_o, p);
  assemble_weight_matrices(st.scalars, p, st.w2, st.w4);
  return st;
}

}  // namespace ampc
