#pragma once

#include "ampc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ampc {

inline constexpr int kFeatureDim = 30;
inline constexpr int kMlpHidden = 32;
inline constexpr int kMlpOutputs = 3;

// Normalized inputs are clamped to this many standard deviations before the
// first layer; outside the collected envelope the network holds its boundary
// value instead of extrapolating.
inline constexpr double kFeatureClipSigma = 5.0;

// Fixed assembly order: Euler angles, quad linear velocity, quad angular
// velocity, joint angles, joint rates, control input.
using FeatureVector = Eigen::Matrix<double, kFeatureDim, 1>;

FeatureVector assemble_features(const Vec3& theta_B, const Vec3& v_B, const Vec3& omega_B,
                                const Vec6& q, const Vec6& qdot, const ControlU& u);

// 30-32-32-3 feedforward network, ELU hidden activations, linear output.
// Input normalization is frozen at offline-training time and stored with the
// parameters.
struct MlpParams {
  MatX w1{kMlpHidden, kFeatureDim};
  VecX b1{kMlpHidden};
  MatX w2{kMlpHidden, kMlpHidden};
  VecX b2{kMlpHidden};
  MatX w3{kMlpOutputs, kMlpHidden};
  VecX b3{kMlpOutputs};
  VecX feat_mean = VecX::Zero(kFeatureDim);
  VecX feat_scale = VecX::Ones(kFeatureDim);  // 1/std, frozen at training time

  void set_zero();
};

struct MlpGrad {
  MatX w1{kMlpHidden, kFeatureDim};
  VecX b1{kMlpHidden};
  MatX w2{kMlpHidden, kMlpHidden};
  VecX b2{kMlpHidden};
  MatX w3{kMlpOutputs, kMlpHidden};
  VecX b3{kMlpOutputs};

  void set_zero();
  void accumulate(const MlpGrad& other);
  void scale(double s);
};

struct TrainSample {
  FeatureVector features;
  Vec3 target = Vec3::Zero();
};

double elu(double x);
double elu_derivative(double x);

Vec3 mlp_forward(const MlpParams& params, const FeatureVector& features);

// Gradient of ||forward(features) - target||^2 with respect to every
// parameter (exact reverse mode).
MlpGrad mlp_backward(const MlpParams& params, const FeatureVector& features,
                     const Vec3& target);

double sample_loss(const MlpParams& params, const TrainSample& s);
double batch_loss(const MlpParams& params, const std::vector<TrainSample>& batch);

// Measured residual per the equivalent model rearrangement:
// target = vdot-free measured velocity minus K_B (p_des - p).
Vec3 residual_target(const Vec3& v_meas, const Vec3& p_B, const Vec3& p_B_des,
                     const Vec3& k_b);

struct TrainOptions {
  double learning_rate = 0.01;
  int epochs = 60;
  int batch_size = 64;
  std::uint32_t seed = 1;
};

struct TrainReport {
  double initial_mse = 0.0;
  double final_mse = 0.0;
  int epochs = 0;
  std::size_t samples = 0;
};

// Mini-batch SGD over all layers. Normalization statistics are computed from
// the dataset and frozen into the returned parameters. Deterministic given
// the seed. Throws std::invalid_argument on an empty dataset.
MlpParams train_offline(const std::vector<TrainSample>& dataset, const TrainOptions& opts,
                        TrainReport* report = nullptr);

// One SGD step on the final layer only, averaged over the recent batch.
// No-op unless recent.size() == batch_size (buffer warm-up).
void online_update(MlpParams& params, const std::vector<TrainSample>& recent,
                   double learning_rate, std::size_t batch_size = 20);

// Flat text artifact: magic/version line, layer dims, row-major hex-float
// weights and biases, then the normalization vectors.
void save_params(const MlpParams& params, const std::string& path);
MlpParams load_params(const std::string& path);

}  // namespace ampc
