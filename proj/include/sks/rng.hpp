#pragma once

// Counter-derived random streams.
//
// A stream is fully determined by (master seed, stream id): the pair is mixed
// through SplitMix64 into the seed sequence of a 64-bit Mersenne twister, so
// any path of an ensemble can be regenerated independently of the schedule
// that produced it.

#include <cstdint>
#include <random>

namespace sks {

/// Stream identifiers are namespaced by purpose so that, e.g., calibration
/// draws never collide with simulation paths under the same master seed.
enum class StreamPurpose : std::uint64_t {
    path = 1,
    calibration = 2,
    check = 3,
    local_interval = 4,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index) {
    return (static_cast<std::uint64_t>(purpose) << 56) | (index & ((std::uint64_t{1} << 56) - 1));
}

std::uint64_t splitmix64(std::uint64_t& state);

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t id() const { return id_; }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

private:
    std::uint64_t seed_;
    std::uint64_t id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sks
