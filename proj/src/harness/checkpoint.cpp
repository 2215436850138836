#include "qint/harness/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <zlib.h>

#include "qint/core/errors.hpp"

namespace qint::harness {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[4] = {'Q', 'I', 'N', 'T'};

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

void put_bytes(std::vector<std::uint8_t>& out, const std::string& s) {
  put(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_bytes() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  void get_doubles(std::vector<double>& out, std::uint64_t count) {
    if (count > (bytes_.size() - pos_) / sizeof(double)) throw truncated();
    out.resize(static_cast<std::size_t>(count));
    std::memcpy(out.data(), bytes_.data() + pos_, out.size() * sizeof(double));
    pos_ += out.size() * sizeof(double);
  }

  std::size_t pos() const { return pos_; }

 private:
  static CheckpointError truncated() {
    return CheckpointError(CheckpointErrorKind::truncated, "checkpoint is truncated");
  }
  void need(std::size_t n) const {
    if (n > bytes_.size() - pos_) throw truncated();
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Checkpoint parse_body(Reader& r) {
  Checkpoint ck;
  r.get<std::uint32_t>();  // magic
  r.get<std::uint32_t>();  // version
  ck.global_step = r.get<std::uint64_t>();
  ck.rng_state = r.get_bytes();
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor t;
    t.name = r.get_bytes();
    const auto rank = r.get<std::uint32_t>();
    std::uint64_t size = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      t.dims.push_back(r.get<std::uint32_t>());
      size *= t.dims.back();
    }
    r.get_doubles(t.values, size);
    ck.tensors.push_back(std::move(t));
  }
  r.get<std::uint32_t>();  // crc
  return ck;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& checkpoint) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put(out, kCheckpointVersion);
  put(out, checkpoint.global_step);
  put_bytes(out, checkpoint.rng_state);
  put(out, static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const auto& t : checkpoint.tensors) {
    std::uint64_t size = 1;
    for (auto d : t.dims) size *= d;
    if (size != t.values.size()) throw std::invalid_argument("tensor " + t.name + ": dims do not match values");
    put_bytes(out, t.name);
    put(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) put(out, d);
    const auto* p = reinterpret_cast<const std::uint8_t*>(t.values.data());
    out.insert(out.end(), p, p + t.values.size() * sizeof(double));
  }
  put(out, crc_of(out));
  return out;
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    if (bytes.size() < sizeof kMagic && std::memcmp(bytes.data(), kMagic, bytes.size()) == 0) {
      throw CheckpointError(CheckpointErrorKind::truncated, "checkpoint is truncated");
    }
    throw CheckpointError(CheckpointErrorKind::bad_magic, "not a checkpoint (bad magic)");
  }

  Reader reader(bytes);
  Checkpoint ck = parse_body(reader);
  const std::size_t end = reader.pos();

  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + end - sizeof stored, sizeof stored);
  if (crc_of(bytes.first(end - sizeof stored)) != stored) {
    throw CheckpointError(CheckpointErrorKind::crc_mismatch, "checkpoint CRC mismatch");
  }
  if (end != bytes.size()) throw CheckpointError(CheckpointErrorKind::malformed, "trailing bytes after checkpoint");

  std::uint32_t version;
  std::memcpy(&version, bytes.data() + sizeof kMagic, sizeof version);
  if (version != kCheckpointVersion) {
    throw CheckpointError(CheckpointErrorKind::unknown_version,
                          "unsupported checkpoint version " + std::to_string(version));
  }
  return ck;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

Checkpoint make_checkpoint(const net::Network& net, std::uint64_t global_step, const Rng& rng) {
  Checkpoint ck;
  ck.global_step = global_step;
  ck.rng_state = rng_state(rng);
  for (const auto& p : net.parameters()) {
    ck.tensors.push_back({p.name, p.dims, std::vector<double>(p.values.begin(), p.values.end())});
  }
  return ck;
}

net::Network network_from_checkpoint(const Checkpoint& checkpoint, double sigma0) {
  auto bad = [](const std::string& why) {
    return CheckpointError(CheckpointErrorKind::malformed, "checkpoint tensors do not describe a network: " + why);
  };

  // segment -> layer index -> parameter name -> tensor
  std::map<std::string, std::map<int, std::map<std::string, const Tensor*>>> table;
  for (const auto& t : checkpoint.tensors) {
    const auto a = t.name.find('.');
    const auto b = t.name.find('.', a + 1);
    if (a == std::string::npos || b == std::string::npos) throw bad("unexpected tensor name " + t.name);
    int index = 0;
    try {
      index = std::stoi(t.name.substr(a + 1, b - a - 1));
    } catch (const std::exception&) {
      throw bad("unexpected tensor name " + t.name);
    }
    table[t.name.substr(0, a)][index][t.name.substr(b + 1)] = &t;
  }
  for (const auto& [seg, _] : table) {
    if (seg != "trunk" && seg != "value" && seg != "advantage") throw bad("unknown segment " + seg);
  }

  auto matrix = [&](const Tensor* t, std::size_t rank) -> const Tensor& {
    if (!t) throw bad("missing tensor");
    if (t->dims.size() != rank) throw bad(t->name + " has rank " + std::to_string(t->dims.size()));
    return *t;
  };
  auto to_matrix = [](const Tensor& t) {
    return Matrix(Eigen::Map<const Matrix>(t.values.data(), t.dims[0], t.dims[1]));
  };
  auto to_vector = [](const Tensor& t) {
    return Vector(Eigen::Map<const Vector>(t.values.data(), static_cast<Eigen::Index>(t.values.size())));
  };
  auto get = [](const std::map<std::string, const Tensor*>& m, const std::string& k) -> const Tensor* {
    const auto it = m.find(k);
    return it == m.end() ? nullptr : it->second;
  };

  auto build_segment = [&](const std::string& name, bool trailing_relu, std::vector<int>& outs) {
    std::vector<net::Layer> layers;
    const auto it = table.find(name);
    if (it == table.end()) return layers;
    int next = 0;
    for (const auto& [index, params] : it->second) {
      for (; next < index; ++next) layers.push_back(net::Relu{});
      if (params.contains("weight")) {
        net::DenseLayerParams p{to_matrix(matrix(get(params, "weight"), 2)),
                                to_vector(matrix(get(params, "bias"), 1))};
        outs.push_back(static_cast<int>(p.weights.rows()));
        layers.push_back(std::move(p));
      } else {
        net::NoisyLayerParams p;
        p.weight_mu = to_matrix(matrix(get(params, "weight_mu"), 2));
        p.weight_sigma = to_matrix(matrix(get(params, "weight_sigma"), 2));
        p.bias_mu = to_vector(matrix(get(params, "bias_mu"), 1));
        p.bias_sigma = to_vector(matrix(get(params, "bias_sigma"), 1));
        p.eps_in = Vector::Zero(p.weight_mu.cols());
        p.eps_out = Vector::Zero(p.weight_mu.rows());
        outs.push_back(static_cast<int>(p.weight_mu.rows()));
        layers.push_back(std::move(p));
      }
      next = index + 1;
    }
    if (trailing_relu) layers.push_back(net::Relu{});
    return layers;
  };

  std::vector<int> trunk_outs, value_outs, adv_outs;
  auto trunk = build_segment("trunk", true, trunk_outs);
  auto value = build_segment("value", false, value_outs);
  auto advantage = build_segment("advantage", false, adv_outs);
  if (value_outs.empty() || adv_outs.empty()) throw bad("missing head tensors");

  auto first_input = [](const net::Layer& layer) {
    if (const auto* d = std::get_if<net::DenseLayerParams>(&layer)) return static_cast<int>(d->weights.cols());
    if (const auto* n = std::get_if<net::NoisyLayerParams>(&layer)) return n->in();
    return -1;
  };

  net::NetworkSpec spec;
  spec.input_dim = first_input(trunk.empty() ? value.front() : trunk.front());
  spec.trunk_widths = trunk_outs;
  spec.head_hidden = value_outs.size() > 1 ? value_outs.front() : 0;
  spec.n_atoms = value_outs.back();
  if (spec.n_atoms < 1 || adv_outs.back() % spec.n_atoms != 0) throw bad("advantage width is not actions * atoms");
  spec.n_actions = adv_outs.back() / spec.n_atoms;
  spec.sigma0 = sigma0;
  try {
    return net::Network::from_layers(spec, std::move(trunk), std::move(value), std::move(advantage));
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
}

}  // namespace qint::harness
