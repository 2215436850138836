#include "qint/net/network.hpp"

#include <array>
#include <stdexcept>

namespace qint::net {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

int layer_output(const Layer& layer, int in) {
  return std::visit(overloaded{[](const DenseLayerParams& p) { return static_cast<int>(p.weights.rows()); },
                               [](const NoisyLayerParams& p) { return p.out(); },
                               [in](const Relu&) { return in; },
                               [in](const Identity&) { return in; }},
                    layer);
}

int layer_input(const Layer& layer, int fallback) {
  return std::visit(overloaded{[](const DenseLayerParams& p) { return static_cast<int>(p.weights.cols()); },
                               [](const NoisyLayerParams& p) { return p.in(); },
                               [fallback](const Relu&) { return fallback; },
                               [fallback](const Identity&) { return fallback; }},
                    layer);
}

std::uint32_t u32(Eigen::Index v) { return static_cast<std::uint32_t>(v); }

// Visits every parameter tensor in canonical order.
template <class Segments, class Fn>
void visit_params(Segments& segments, Fn&& fn) {
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (std::size_t i = 0; i < segments[s].size(); ++i) {
      const std::string prefix = std::string(kSegmentNames[s]) + "." + std::to_string(i) + ".";
      auto& layer = segments[s][i];
      if (auto* dense = std::get_if<DenseLayerParams>(&layer)) {
        fn(prefix + "weight", std::vector<std::uint32_t>{u32(dense->weights.rows()), u32(dense->weights.cols())},
           dense->weights.data(), dense->weights.size());
        fn(prefix + "bias", std::vector<std::uint32_t>{u32(dense->bias.size())}, dense->bias.data(),
           dense->bias.size());
      } else if (auto* noisy = std::get_if<NoisyLayerParams>(&layer)) {
        const std::vector<std::uint32_t> wdims{u32(noisy->weight_mu.rows()), u32(noisy->weight_mu.cols())};
        const std::vector<std::uint32_t> bdims{u32(noisy->bias_mu.size())};
        fn(prefix + "weight_mu", wdims, noisy->weight_mu.data(), noisy->weight_mu.size());
        fn(prefix + "weight_sigma", wdims, noisy->weight_sigma.data(), noisy->weight_sigma.size());
        fn(prefix + "bias_mu", bdims, noisy->bias_mu.data(), noisy->bias_mu.size());
        fn(prefix + "bias_sigma", bdims, noisy->bias_sigma.data(), noisy->bias_sigma.size());
      }
    }
  }
}

std::vector<Layer> make_head(const NetworkSpec& spec, int in, int out, Rng* rng) {
  std::vector<Layer> head;
  auto noisy = [&](int i, int o) -> Layer {
    if (rng) return init_noisy(*rng, i, o, spec.sigma0);
    NoisyLayerParams p;
    p.weight_mu = Matrix::Zero(o, i);
    p.weight_sigma = Matrix::Zero(o, i);
    p.bias_mu = Vector::Zero(o);
    p.bias_sigma = Vector::Zero(o);
    p.eps_in = Vector::Zero(i);
    p.eps_out = Vector::Zero(o);
    return p;
  };
  if (spec.head_hidden > 0) {
    head.push_back(noisy(in, spec.head_hidden));
    head.push_back(Relu{});
    head.push_back(noisy(spec.head_hidden, out));
  } else {
    head.push_back(noisy(in, out));
  }
  return head;
}

Network build_impl(const NetworkSpec& spec, Rng* rng) {
  if (spec.input_dim < 1 || spec.n_actions < 1 || spec.n_atoms < 2) {
    throw std::invalid_argument("network spec: input_dim, n_actions >= 1 and n_atoms >= 2 required");
  }
  std::vector<Layer> trunk;
  int width = spec.input_dim;
  for (int w : spec.trunk_widths) {
    if (w < 1) throw std::invalid_argument("network spec: trunk widths must be >= 1");
    if (rng) {
      trunk.push_back(init_dense(*rng, width, w));
    } else {
      trunk.push_back(DenseLayerParams{Matrix::Zero(w, width), Vector::Zero(w)});
    }
    trunk.push_back(Relu{});
    width = w;
  }
  auto value = make_head(spec, width, spec.n_atoms, rng);
  auto advantage = make_head(spec, width, spec.n_actions * spec.n_atoms, rng);
  return Network::from_layers(spec, std::move(trunk), std::move(value), std::move(advantage));
}

}  // namespace

Network Network::build(const NetworkSpec& spec, Rng& rng) { return build_impl(spec, &rng); }

Network Network::zeros(const NetworkSpec& spec) { return build_impl(spec, nullptr); }

Network Network::from_layers(const NetworkSpec& spec, std::vector<Layer> trunk,
                             std::vector<Layer> value_head, std::vector<Layer> advantage_head) {
  Network net;
  net.spec_ = spec;
  net.segments_ = {std::move(trunk), std::move(value_head), std::move(advantage_head)};
  net.check_dimensions();
  return net;
}

void Network::check_dimensions() const {
  auto walk = [](const std::vector<Layer>& layers, int in) {
    int width = in;
    for (const auto& layer : layers) {
      if (layer_input(layer, width) != width) {
        throw std::invalid_argument("network: adjacent layer dimensions disagree");
      }
      width = layer_output(layer, width);
    }
    return width;
  };
  const int phi = walk(segment(Segment::trunk), spec_.input_dim);
  if (walk(segment(Segment::value), phi) != spec_.n_atoms) {
    throw std::invalid_argument("network: value head must output n_atoms logits");
  }
  if (walk(segment(Segment::advantage), phi) != spec_.n_actions * spec_.n_atoms) {
    throw std::invalid_argument("network: advantage head must output n_actions * n_atoms logits");
  }
}

int Network::trunk_output_dim() const {
  int width = spec_.input_dim;
  for (const auto& layer : segment(Segment::trunk)) width = layer_output(layer, width);
  return width;
}

ForwardResult Network::forward(const Matrix& x, bool deterministic) const {
  if (x.cols() != spec_.input_dim) {
    throw std::invalid_argument("forward: input has " + std::to_string(x.cols()) + " columns, expected " +
                                std::to_string(spec_.input_dim));
  }
  ForwardResult result;
  result.tape.batch = x.rows();

  auto run = [&](Segment seg, const Matrix& input) {
    const auto s = static_cast<std::size_t>(seg);
    auto& records = result.tape.segments[s];
    auto& shapes = result.tape.layer_shapes[s];
    Matrix current = input;
    for (const auto& layer : segments_[s]) {
      LayerRecord record;
      Matrix out;
      std::visit(overloaded{[&](const DenseLayerParams& p) {
                              out.noalias() = current * p.weights.transpose();
                              out.rowwise() += p.bias.transpose();
                            },
                            [&](const NoisyLayerParams& p) {
                              if (deterministic) {
                                out.noalias() = current * p.weight_mu.transpose();
                                out.rowwise() += p.bias_mu.transpose();
                              } else {
                                record.weight = noisy_weight(p);
                                record.eps_in = p.eps_in;
                                record.eps_out = p.eps_out;
                                out.noalias() = current * record.weight.transpose();
                                out.rowwise() += noisy_bias(p).transpose();
                              }
                            },
                            [&](const Relu&) { out = current.cwiseMax(0.0); },
                            [&](const Identity&) { out = current; }},
                 layer);
      record.input = std::move(current);
      records.push_back(std::move(record));
      shapes.push_back(static_cast<int>(out.cols()));
      current = std::move(out);
    }
    return current;
  };

  result.phi = run(Segment::trunk, x);
  result.value_logits = run(Segment::value, result.phi);
  result.advantage_logits = run(Segment::advantage, result.phi);
  return result;
}

ParamGradients Network::backward(const Tape& tape, const Matrix& d_value_logits,
                                 const Matrix& d_advantage_logits) const {
  for (std::size_t s = 0; s < 3; ++s) {
    if (tape.segments[s].size() != segments_[s].size()) {
      throw std::logic_error("backward: tape does not match this network");
    }
    int width = s == 0 ? spec_.input_dim : trunk_output_dim();
    for (std::size_t i = 0; i < segments_[s].size(); ++i) {
      width = layer_output(segments_[s][i], width);
      if (tape.layer_shapes[s][i] != width) throw std::logic_error("backward: tape does not match this network");
    }
  }
  if (d_value_logits.rows() != tape.batch || d_value_logits.cols() != spec_.n_atoms ||
      d_advantage_logits.rows() != tape.batch ||
      d_advantage_logits.cols() != spec_.n_actions * spec_.n_atoms) {
    throw std::logic_error("backward: upstream gradient shape mismatch");
  }

  ParamGradients grads = zero_gradients();

  // First parameter index of each segment in canonical order.
  std::array<std::size_t, 3> first_param{};
  {
    std::size_t count = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      first_param[s] = count;
      for (const auto& layer : segments_[s]) {
        if (std::holds_alternative<DenseLayerParams>(layer)) count += 2;
        if (std::holds_alternative<NoisyLayerParams>(layer)) count += 4;
      }
    }
  }

  auto run_back = [&](Segment seg, Matrix upstream, bool need_input_grad) {
    const auto s = static_cast<std::size_t>(seg);
    const auto& layers = segments_[s];
    // Parameter index just past the last layer of this segment.
    std::size_t param = first_param[s];
    for (const auto& layer : layers) {
      if (std::holds_alternative<DenseLayerParams>(layer)) param += 2;
      if (std::holds_alternative<NoisyLayerParams>(layer)) param += 4;
    }
    for (std::size_t k = layers.size(); k-- > 0;) {
      const LayerRecord& rec = tape.segments[s][k];
      const Layer& layer = layers[k];
      const bool propagate = need_input_grad || k > 0;
      Matrix down;
      std::visit(overloaded{[&](const DenseLayerParams& p) {
                              param -= 2;
                              Eigen::Map<Matrix>(grads[param].data(), p.weights.rows(), p.weights.cols())
                                  .noalias() = upstream.transpose() * rec.input;
                              grads[param + 1] = upstream.colwise().sum().transpose();
                              if (propagate) down.noalias() = upstream * p.weights;
                            },
                            [&](const NoisyLayerParams& p) {
                              param -= 4;
                              const Matrix d_weight = upstream.transpose() * rec.input;
                              const Vector d_bias = upstream.colwise().sum().transpose();
                              Eigen::Map<Matrix>(grads[param].data(), p.out(), p.in()) = d_weight;
                              grads[param + 2] = d_bias;
                              const bool noisy = rec.eps_in.size() > 0;
                              if (noisy) {
                                Eigen::Map<Matrix>(grads[param + 1].data(), p.out(), p.in()) =
                                    d_weight.cwiseProduct(rec.eps_out * rec.eps_in.transpose());
                                grads[param + 3] = d_bias.cwiseProduct(rec.eps_out);
                              }
                              if (propagate) {
                                down.noalias() = upstream * (noisy ? rec.weight : p.weight_mu);
                              }
                            },
                            [&](const Relu&) {
                              down = upstream.cwiseProduct((rec.input.array() > 0.0).cast<double>().matrix());
                            },
                            [&](const Identity&) { down = upstream; }},
                 layer);
      upstream = std::move(down);
    }
    return upstream;
  };

  Matrix d_phi = run_back(Segment::value, d_value_logits, true);
  d_phi += run_back(Segment::advantage, d_advantage_logits, true);
  run_back(Segment::trunk, std::move(d_phi), false);
  return grads;
}

void Network::resample_noise(Rng& rng) {
  for (auto& seg : segments_) {
    for (auto& layer : seg) {
      if (auto* noisy = std::get_if<NoisyLayerParams>(&layer)) {
        auto noise = sample_factorized_noise(rng, noisy->in(), noisy->out());
        noisy->eps_in = std::move(noise.eps_in);
        noisy->eps_out = std::move(noise.eps_out);
      }
    }
  }
}

std::vector<ParamRef> Network::parameters() {
  std::vector<ParamRef> refs;
  visit_params(segments_, [&](std::string name, std::vector<std::uint32_t> dims, double* data, Eigen::Index n) {
    refs.push_back({std::move(name), std::move(dims), std::span<double>(data, static_cast<std::size_t>(n))});
  });
  return refs;
}

std::vector<ConstParamRef> Network::parameters() const {
  std::vector<ConstParamRef> refs;
  visit_params(segments_,
               [&](std::string name, std::vector<std::uint32_t> dims, const double* data, Eigen::Index n) {
                 refs.push_back({std::move(name), std::move(dims),
                                 std::span<const double>(data, static_cast<std::size_t>(n))});
               });
  return refs;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.values.size();
  return n;
}

ParamGradients Network::zero_gradients() const {
  ParamGradients grads;
  for (const auto& p : parameters()) grads.push_back(Vector::Zero(static_cast<Eigen::Index>(p.values.size())));
  return grads;
}

bool Network::operator==(const Network& other) const {
  if (!(spec_ == other.spec_)) return false;
  const auto a = parameters();
  const auto b = other.parameters();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].dims != b[i].dims) return false;
    if (!std::equal(a[i].values.begin(), a[i].values.end(), b[i].values.begin(), b[i].values.end())) return false;
  }
  return true;
}

}  // namespace qint::net
