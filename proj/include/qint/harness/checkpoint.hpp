#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qint/core/rng.hpp"
#include "qint/net/network.hpp"

namespace qint::harness {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Tensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  bool operator==(const Tensor&) const = default;
};

/// Binary layout, all integers little-endian:
///
///     "QINT"                      magic
///     u32                         format version
///     u64                         global step
///     u32 + bytes                 RNG state (text form of the engine)
///     u32                         tensor count
///     per tensor:
///       u32 + bytes               name
///       u32                       rank
///       u32 * rank                dims
///       f64 * prod(dims)          values, row-major
///     u32                         CRC-32 of every preceding byte
struct Checkpoint {
  std::uint64_t global_step = 0;
  std::string rng_state;
  std::vector<Tensor> tensors;

  bool operator==(const Checkpoint&) const = default;
};

enum class CheckpointErrorKind { truncated, bad_magic, crc_mismatch, unknown_version, malformed };

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(CheckpointErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  CheckpointErrorKind kind() const { return kind_; }

 private:
  CheckpointErrorKind kind_;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& checkpoint);

/// Checks magic, then CRC, then version. A file too short to hold its own
/// structure reports `truncated` even when the CRC also fails.
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

/// Throws IoError when the file cannot be written or read.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint make_checkpoint(const net::Network& net, std::uint64_t global_step, const Rng& rng);

/// Rebuilds a network from the tensor table. The architecture is read off the
/// tensor names and shapes; noise buffers start at zero.
net::Network network_from_checkpoint(const Checkpoint& checkpoint, double sigma0 = 0.5);

}  // namespace qint::harness
