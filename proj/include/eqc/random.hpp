#pragma once

#include <cstdint>
#include <random>

namespace eqc {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seeding contract: master seed -> per-command stream -> per-trial substream.
//   stream_seed(seed, tag)      = splitmix64(seed ^ splitmix64(tag))
//   substream(seed, index)      = mt19937_64 seeded from splitmix64 of (seed, index)
// A trial's draws depend only on (stream seed, trial index), never on the worker
// that ran it.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t tag);
Rng substream(std::uint64_t seed, std::uint64_t index);

}  // namespace eqc
