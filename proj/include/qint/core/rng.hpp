#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace qint {

using Rng = std::mt19937_64;

/// Textual engine state (the standard stream format), used by checkpoints.
std::string rng_state(const Rng& rng);
void restore_rng_state(Rng& rng, const std::string& state);

}  // namespace qint
