#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qint/core/linalg.hpp"
#include "qint/core/rng.hpp"
#include "qint/net/layers.hpp"

namespace qint::net {

struct Relu {};
struct Identity {};

using Layer = std::variant<DenseLayerParams, NoisyLayerParams, Relu, Identity>;

/// Shape of the dueling network: a plain-linear ReLU trunk producing the shared
/// representation, then a value head (n_atoms outputs) and an advantage head
/// (n_actions * n_atoms outputs) built from noisy layers. `head_hidden` = 0
/// makes each head a single noisy layer.
struct NetworkSpec {
  int input_dim = 0;
  std::vector<int> trunk_widths;
  int head_hidden = 0;
  int n_actions = 6;
  int n_atoms = 51;
  double sigma0 = 0.5;

  bool operator==(const NetworkSpec&) const = default;
};

enum class Segment : std::size_t { trunk = 0, value = 1, advantage = 2 };
inline constexpr std::array<const char*, 3> kSegmentNames = {"trunk", "value", "advantage"};

/// A named view of one parameter tensor inside a network.
struct ParamRef {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::span<double> values;
};

struct ConstParamRef {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::span<const double> values;
};

/// One flat gradient array per parameter tensor, in `Network::parameters()` order.
using ParamGradients = std::vector<Vector>;

struct LayerRecord {
  Matrix input;
  Matrix weight;      // effective weight used (noisy layers)
  Vector eps_in;      // noise used; empty when deterministic
  Vector eps_out;
};

/// Everything backward needs from a forward pass.
struct Tape {
  std::array<std::vector<LayerRecord>, 3> segments;
  std::array<std::vector<int>, 3> layer_shapes;  // output width per layer, for mismatch checks
  Eigen::Index batch = 0;
};

struct ForwardResult {
  Matrix phi;               // batch x trunk output
  Matrix value_logits;      // batch x n_atoms
  Matrix advantage_logits;  // batch x (n_actions * n_atoms), action-major
  Tape tape;
};

class Network {
 public:
  Network() = default;

  /// Randomly initialized network (see init_dense / init_noisy).
  static Network build(const NetworkSpec& spec, Rng& rng);
  /// All parameters zero, including sigmas.
  static Network zeros(const NetworkSpec& spec);
  /// Network from explicit layer lists; throws std::invalid_argument if
  /// adjacent dimensions disagree or the heads do not match the spec.
  static Network from_layers(const NetworkSpec& spec, std::vector<Layer> trunk,
                             std::vector<Layer> value_head, std::vector<Layer> advantage_head);

  const NetworkSpec& spec() const { return spec_; }
  int trunk_output_dim() const;

  std::vector<Layer>& segment(Segment s) { return segments_[static_cast<std::size_t>(s)]; }
  const std::vector<Layer>& segment(Segment s) const {
    return segments_[static_cast<std::size_t>(s)];
  }

  /// Rows of `x` are samples. Deterministic mode ignores noise in every noisy layer.
  ForwardResult forward(const Matrix& x, bool deterministic) const;

  /// Reverse-mode gradients given upstream gradients on the head logits.
  /// Noise values recorded on the tape are constants.
  ParamGradients backward(const Tape& tape, const Matrix& d_value_logits,
                          const Matrix& d_advantage_logits) const;

  /// Draws a fresh factorized noise sample for every noisy layer.
  void resample_noise(Rng& rng);

  std::vector<ParamRef> parameters();
  std::vector<ConstParamRef> parameters() const;
  std::size_t parameter_count() const;
  ParamGradients zero_gradients() const;

  bool operator==(const Network& other) const;

 private:
  void check_dimensions() const;

  NetworkSpec spec_;
  std::array<std::vector<Layer>, 3> segments_;
};

}  // namespace qint::net
