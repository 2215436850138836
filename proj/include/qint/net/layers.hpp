#pragma once

#include "qint/core/linalg.hpp"
#include "qint/core/rng.hpp"

namespace qint::net {

struct DenseLayerParams {
  Matrix weights;  // out x in
  Vector bias;     // out
};

/// Linear layer with learned per-weight noise scales. The current factorized
/// noise sample lives alongside the parameters; bias noise reuses eps_out.
struct NoisyLayerParams {
  Matrix weight_mu;     // out x in
  Matrix weight_sigma;  // out x in
  Vector bias_mu;       // out
  Vector bias_sigma;    // out
  Vector eps_in;        // in
  Vector eps_out;       // out

  int in() const { return static_cast<int>(weight_mu.cols()); }
  int out() const { return static_cast<int>(weight_mu.rows()); }
};

struct FactorizedNoise {
  Vector eps_in;
  Vector eps_out;
};

/// y = W x + b. Throws std::invalid_argument on shape mismatch.
Vector linear_forward(const DenseLayerParams& params, const Vector& x);

/// sgn(g) * sqrt(|g|)
double noise_transform(double g);

FactorizedNoise sample_factorized_noise(Rng& rng, int n_in, int n_out);

/// mu_w + sigma_w .* (eps_out eps_in^T)
Matrix noisy_weight(const NoisyLayerParams& params);
Vector noisy_bias(const NoisyLayerParams& params);

/// Deterministic mode ignores the noise sample and uses the mean parameters.
Vector noisy_forward(const NoisyLayerParams& params, const Vector& x, bool deterministic);

/// Fresh parameters: mu ~ U(-1/sqrt(in), 1/sqrt(in)), sigma = sigma0 / sqrt(in),
/// noise zeroed.
NoisyLayerParams init_noisy(Rng& rng, int in, int out, double sigma0);
DenseLayerParams init_dense(Rng& rng, int in, int out);

}  // namespace qint::net
