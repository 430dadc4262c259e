#pragma once
// The 16-pattern FOA spatial augmentation: azimuth rotations by multiples of
// 90 degrees, azimuth reflection, and elevation flip, all realizable by
// channel swaps and sign inversions on X, Y, Z. W is never touched.
//
// Pattern id = azimuth_op + 8 * elevation_flip, with azimuth ops enumerated
//   0: az        1: az+90     2: az+180    3: az-90
//   4: -az       5: -az+90    6: -az+180   7: -az-90
// Id 0 is the identity.

#include <cstdint>
#include <random>
#include <string>

#include "seldkit/events.hpp"
#include "seldkit/geometry.hpp"

namespace seldkit {

inline constexpr int kNumPatterns = 16;

struct SpatialPattern {
    int id = 0;  // 0..15

    int azimuth_op() const { return id % 8; }
    bool elevation_flip() const { return id >= 8; }
};

// Signed source-channel assignment for X', Y', Z'. source is an FoaChannel
// index, sign is +-1. W maps to itself.
struct ChannelMap {
    int source[3];
    int sign[3];
};

// The linear map a pattern applies to channels (X, Y, Z).
ChannelMap pattern_channel_map(const SpatialPattern& p);

// Human-readable azimuth op, e.g. "phi+90" or "-phi-90".
std::string pattern_azimuth_op_name(const SpatialPattern& p);

AmbisonicClip transform_channels(const AmbisonicClip& clip, const SpatialPattern& p);

DirectionOfArrival transform_doa(const DirectionOfArrival& d, const SpatialPattern& p);

EventList transform_event_list(const EventList& events, const SpatialPattern& p);

// Pattern p followed by q, as a member of the same 16-element set.
SpatialPattern compose_patterns(const SpatialPattern& p, const SpatialPattern& q);

SpatialPattern inverse_pattern(const SpatialPattern& p);

// Deterministic seedable PRNG (std::mt19937_64 under the hood, with
// rejection-based range reduction so draws are identical across platforms).
class PatternRng {
  public:
    explicit PatternRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform over the 15 non-identity patterns.
    SpatialPattern sample_pattern() { return {1 + static_cast<int>(next_below(15))}; }

    // Uniform integer in [0, bound), by rejection sampling.
    std::uint64_t next_below(std::uint64_t bound);

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace seldkit
