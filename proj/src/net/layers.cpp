#include "qint/net/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace qint::net {

namespace {

void fill_uniform(Rng& rng, double bound, double* data, Eigen::Index n) {
  std::uniform_real_distribution<double> uniform(-bound, bound);
  for (Eigen::Index i = 0; i < n; ++i) data[i] = uniform(rng);
}

}  // namespace

Vector linear_forward(const DenseLayerParams& params, const Vector& x) {
  if (params.weights.cols() != x.size() || params.weights.rows() != params.bias.size()) {
    throw std::invalid_argument("linear_forward: shape mismatch");
  }
  return params.weights * x + params.bias;
}

double noise_transform(double g) {
  if (g == 0.0) return 0.0;
  return std::copysign(std::sqrt(std::abs(g)), g);
}

FactorizedNoise sample_factorized_noise(Rng& rng, int n_in, int n_out) {
  if (n_in < 1 || n_out < 1) throw std::invalid_argument("noise dimensions must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  FactorizedNoise noise{Vector(n_in), Vector(n_out)};
  for (int i = 0; i < n_in; ++i) noise.eps_in[i] = noise_transform(normal(rng));
  for (int j = 0; j < n_out; ++j) noise.eps_out[j] = noise_transform(normal(rng));
  return noise;
}

Matrix noisy_weight(const NoisyLayerParams& params) {
  return params.weight_mu + params.weight_sigma.cwiseProduct(params.eps_out * params.eps_in.transpose());
}

Vector noisy_bias(const NoisyLayerParams& params) {
  return params.bias_mu + params.bias_sigma.cwiseProduct(params.eps_out);
}

Vector noisy_forward(const NoisyLayerParams& params, const Vector& x, bool deterministic) {
  const auto out = params.weight_mu.rows();
  const auto in = params.weight_mu.cols();
  if (x.size() != in || params.weight_sigma.rows() != out || params.weight_sigma.cols() != in ||
      params.bias_mu.size() != out || params.bias_sigma.size() != out) {
    throw std::invalid_argument("noisy_forward: shape mismatch");
  }
  if (deterministic) return params.weight_mu * x + params.bias_mu;
  if (params.eps_in.size() != in || params.eps_out.size() != out) {
    throw std::invalid_argument("noisy_forward: noise sample has the wrong shape");
  }
  return noisy_weight(params) * x + noisy_bias(params);
}

NoisyLayerParams init_noisy(Rng& rng, int in, int out, double sigma0) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  NoisyLayerParams p;
  p.weight_mu.resize(out, in);
  p.bias_mu.resize(out);
  fill_uniform(rng, bound, p.weight_mu.data(), p.weight_mu.size());
  fill_uniform(rng, bound, p.bias_mu.data(), p.bias_mu.size());
  p.weight_sigma = Matrix::Constant(out, in, sigma0 * bound);
  p.bias_sigma = Vector::Constant(out, sigma0 * bound);
  p.eps_in = Vector::Zero(in);
  p.eps_out = Vector::Zero(out);
  return p;
}

DenseLayerParams init_dense(Rng& rng, int in, int out) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  DenseLayerParams p;
  p.weights.resize(out, in);
  p.bias.resize(out);
  fill_uniform(rng, bound, p.weights.data(), p.weights.size());
  fill_uniform(rng, bound, p.bias.data(), p.bias.size());
  return p;
}

}  // namespace qint::net
