#pragma once

#include <vector>

#include "seldkit/geometry.hpp"

namespace seldkit {

inline constexpr int kNumClasses = 14;
inline constexpr double kLabelFrameSeconds = 0.1;

// One active (class, track) at one 100 ms label frame.
struct EventRecord {
    int frame = 0;  // 100 ms label frame index
    int cls = 0;    // 0..13
    int track = 0;
    DirectionOfArrival doa;
};

using EventList = std::vector<EventRecord>;

}  // namespace seldkit
