#include "ampc/residual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ampc {

namespace {

struct ForwardTrace {
  VecX xn{kFeatureDim};  // normalized input
  VecX z1{kMlpHidden}, a1{kMlpHidden};
  VecX z2{kMlpHidden}, a2{kMlpHidden};
  Vec3 y;
};

ForwardTrace forward_trace(const MlpParams& p, const FeatureVector& features) {
  ForwardTrace t;
  t.xn = (features - p.feat_mean).cwiseProduct(p.feat_scale);
  // The network is only trustworthy over the range it saw; clamping the
  // normalized input bounds extrapolation when the controller visits states
  // the collection runs never produced.
  t.xn = t.xn.cwiseMax(-kFeatureClipSigma).cwiseMin(kFeatureClipSigma);
  t.z1 = p.w1 * t.xn + p.b1;
  t.a1 = t.z1.unaryExpr([](double v) { return elu(v); });
  t.z2 = p.w2 * t.a1 + p.b2;
  t.a2 = t.z2.unaryExpr([](double v) { return elu(v); });
  t.y = p.w3 * t.a2 + p.b3;
  return t;
}

}  // namespace

void MlpParams::set_zero() {
  w1.setZero(); b1.setZero();
  w2.setZero(); b2.setZero();
  w3.setZero(); b3.setZero();
}

void MlpGrad::set_zero() {
  w1.setZero(); b1.setZero();
  w2.setZero(); b2.setZero();
  w3.setZero(); b3.setZero();
}

void MlpGrad::accumulate(const MlpGrad& o) {
  w1 += o.w1; b1 += o.b1;
  w2 += o.w2; b2 += o.b2;
  w3 += o.w3; b3 += o.b3;
}

void MlpGrad::scale(double s) {
  w1 *= s; b1 *= s;
  w2 *= s; b2 *= s;
  w3 *= s; b3 *= s;
}

FeatureVector assemble_features(const Vec3& theta_B, const Vec3& v_B, const Vec3& omega_B,
                                const Vec6& q, const Vec6& qdot, const ControlU& u) {
  FeatureVector f;
  f.segment<3>(0) = theta_B;
  f.segment<3>(3) = v_B;
  f.segment<3>(6) = omega_B;
  f.segment<6>(9) = q;
  f.segment<6>(15) = qdot;
  f.segment<9>(21) = u;
  return f;
}

double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }

double elu_derivative(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

Vec3 mlp_forward(const MlpParams& params, const FeatureVector& features) {
  return forward_trace(params, features).y;
}

MlpGrad mlp_backward(const MlpParams& params, const FeatureVector& features,
                     const Vec3& target) {
  const ForwardTrace t = forward_trace(params, features);

  MlpGrad g;
  const Vec3 dy = 2.0 * (t.y - target);
  g.w3 = dy * t.a2.transpose();
  g.b3 = dy;

  VecX da2 = params.w3.transpose() * dy;
  VecX dz2 = da2.cwiseProduct(t.z2.unaryExpr([](double v) { return elu_derivative(v); }));
  g.w2 = dz2 * t.a1.transpose();
  g.b2 = dz2;

  VecX da1 = params.w2.transpose() * dz2;
  VecX dz1 = da1.cwiseProduct(t.z1.unaryExpr([](double v) { return elu_derivative(v); }));
  g.w1 = dz1 * t.xn.transpose();
  g.b1 = dz1;
  return g;
}

double sample_loss(const MlpParams& params, const TrainSample& s) {
  return (mlp_forward(params, s.features) - s.target).squaredNorm();
}

double batch_loss(const MlpParams& params, const std::vector<TrainSample>& batch) {
  if (batch.empty()) return 0.0;
  double sum = 0.0;
  for (const TrainSample& s : batch) sum += sample_loss(params, s);
  return sum / static_cast<double>(batch.size());
}

Vec3 residual_target(const Vec3& v_meas, const Vec3& p_B, const Vec3& p_B_des,
                     const Vec3& k_b) {
  return v_meas - k_b.cwiseProduct(p_B_des - p_B);
}

MlpParams train_offline(const std::vector<TrainSample>& dataset, const TrainOptions& opts,
                        TrainReport* report) {
  if (dataset.empty()) throw std::invalid_argument("train_offline: empty dataset");

  std::mt19937 rng(opts.seed);
  MlpParams p;
  auto init_layer = [&rng](MatX& w, VecX& b) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = dist(rng);
  };
  init_layer(p.w1, p.b1);
  init_layer(p.w2, p.b2);
  init_layer(p.w3, p.b3);

  // Normalization statistics frozen before any update.
  VecX mean = VecX::Zero(kFeatureDim);
  for (const TrainSample& s : dataset) mean += s.features;
  mean /= static_cast<double>(dataset.size());
  VecX var = VecX::Zero(kFeatureDim);
  for (const TrainSample& s : dataset) {
    const VecX d = s.features - mean;
    var += d.cwiseProduct(d);
  }
  var /= static_cast<double>(dataset.size());
  p.feat_mean = mean;
  for (int i = 0; i < kFeatureDim; ++i) {
    const double sd = std::sqrt(var[i]);
    p.feat_scale[i] = sd > 1e-8 ? 1.0 / sd : 1.0;
  }

  const double initial_mse = batch_loss(p, dataset);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(
      1, std::min<std::size_t>(dataset.size(), static_cast<std::size_t>(opts.batch_size)));

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start + batch <= order.size(); start += batch) {
      MlpGrad acc;
      acc.set_zero();
      for (std::size_t i = start; i < start + batch; ++i) {
        acc.accumulate(mlp_backward(p, dataset[order[i]].features, dataset[order[i]].target));
      }
      const double step = opts.learning_rate / static_cast<double>(batch);
      p.w1 -= step * acc.w1; p.b1 -= step * acc.b1;
      p.w2 -= step * acc.w2; p.b2 -= step * acc.b2;
      p.w3 -= step * acc.w3; p.b3 -= step * acc.b3;
    }
  }

  if (report) {
    report->initial_mse = initial_mse;
    report->final_mse = batch_loss(p, dataset);
    report->epochs = opts.epochs;
    report->samples = dataset.size();
  }
  return p;
}

void online_update(MlpParams& params, const std::vector<TrainSample>& recent,
                   double learning_rate, std::size_t batch_size) {
  if (recent.size() != batch_size) return;

  MatX gw3 = MatX::Zero(kMlpOutputs, kMlpHidden);
  VecX gb3 = VecX::Zero(kMlpOutputs);
  for (const TrainSample& s : recent) {
    const ForwardTrace t = forward_trace(params, s.features);
    const Vec3 dy = 2.0 * (t.y - s.target);
    gw3 += dy * t.a2.transpose();
    gb3 += dy;
  }
  const double step = learning_rate / static_cast<double>(batch_size);
  params.w3 -= step * gw3;
  params.b3 -= step * gb3;
}

namespace {

constexpr const char* kMagic = "AMPC_RESIDUAL_NET";
constexpr int kFormatVersion = 1;

void write_vector(std::FILE* f, const char* name, const double* data, std::size_t n) {
  std::fprintf(f, "%s %zu", name, n);
  for (std::size_t i = 0; i < n; ++i) std::fprintf(f, " %a", data[i]);
  std::fprintf(f, "\n");
}

std::vector<double> read_vector(std::istream& in, const std::string& expect_name,
                                std::size_t expect_n) {
  std::string name;
  std::size_t n = 0;
  if (!(in >> name >> n) || name != expect_name || n != expect_n)
    throw std::runtime_error("residual artifact: bad section '" + name + "'");
  std::vector<double> v(n);
  std::string tok;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> tok)) throw std::runtime_error("residual artifact: truncated " + expect_name);
    v[i] = std::strtod(tok.c_str(), nullptr);
  }
  return v;
}

}  // namespace

void save_params(const MlpParams& p, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("save_params: cannot open " + path);
  std::fprintf(f, "%s %d\n", kMagic, kFormatVersion);
  std::fprintf(f, "layers %d %d %d %d\n", kFeatureDim, kMlpHidden, kMlpHidden, kMlpOutputs);
  write_vector(f, "w1", p.w1.data(), static_cast<std::size_t>(p.w1.size()));
  write_vector(f, "b1", p.b1.data(), static_cast<std::size_t>(p.b1.size()));
  write_vector(f, "w2", p.w2.data(), static_cast<std::size_t>(p.w2.size()));
  write_vector(f, "b2", p.b2.data(), static_cast<std::size_t>(p.b2.size()));
  write_vector(f, "w3", p.w3.data(), static_cast<std::size_t>(p.w3.size()));
  write_vector(f, "b3", p.b3.data(), static_cast<std::size_t>(p.b3.size()));
  write_vector(f, "feat_mean", p.feat_mean.data(), kFeatureDim);
  write_vector(f, "feat_scale", p.feat_scale.data(), kFeatureDim);
  std::fclose(f);
}

MlpParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_params: cannot open " + path);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic)
    throw std::runtime_error("load_params: not a residual artifact: " + path);
  if (version != kFormatVersion)
    throw std::runtime_error("load_params: unsupported artifact version");
  std::string tag;
  int d0, d1, d2, d3;
  if (!(in >> tag >> d0 >> d1 >> d2 >> d3) || tag != "layers" || d0 != kFeatureDim ||
      d1 != kMlpHidden || d2 != kMlpHidden || d3 != kMlpOutputs)
    throw std::runtime_error("load_params: unexpected layer sizes");

  MlpParams p;
  auto fill = [&](MatX& m, const std::string& name) {
    const std::vector<double> v = read_vector(in, name, static_cast<std::size_t>(m.size()));
    std::memcpy(m.data(), v.data(), v.size() * sizeof(double));
  };
  auto fillv = [&](VecX& m, const std::string& name) {
    const std::vector<double> v = read_vector(in, name, static_cast<std::size_t>(m.size()));
    std::memcpy(m.data(), v.data(), v.size() * sizeof(double));
  };
  fill(p.w1, "w1"); fillv(p.b1, "b1");
  fill(p.w2, "w2"); fillv(p.b2, "b2");
  fill(p.w3, "w3"); fillv(p.b3, "b3");
  fillv(p.feat_mean, "feat_mean");
  fillv(p.feat_scale, "feat_scale");
  return p;
}

}  // namespace ampc
