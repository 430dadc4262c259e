#include "seldkit/augment.hpp"

#include <array>
#include <stdexcept>

namespace seldkit {

namespace {

// Per azimuth op: X' and Y' as (source, sign) over (X, Y).
// Ops: az, az+90, az+180, az-90, -az, -az+90, -az+180, -az-90.
struct XyMap {
    int xs, xsign, ys, ysign;
};
constexpr std::array<XyMap, 8> kXyMaps = {{
    {kX, +1, kY, +1},  // az:       X'= X, Y'= Y
    {kY, -1, kX, +1},  // az+90:    X'=-Y, Y'= X
    {kX, -1, kY, -1},  // az+180:   X'=-X, Y'=-Y
    {kY, +1, kX, -1},  // az-90:    X'= Y, Y'=-X
    {kX, +1, kY, -1},  // -az:      X'= X, Y'=-Y
    {kY, +1, kX, +1},  // -az+90:   X'= Y, Y'= X
    {kX, -1, kY, +1},  // -az+180:  X'=-X, Y'= Y
    {kY, -1, kX, -1},  // -az-90:   X'=-Y, Y'=-X
}};

constexpr std::array<const char*, 8> kOpNames = {
    "phi", "phi+90", "phi+180", "phi-90", "-phi", "-phi+90", "-phi+180", "-phi-90"};

// Azimuth offsets per op; reflect==true means az -> -az first.
constexpr std::array<double, 8> kOpOffsets = {0, 90, 180, -90, 0, 90, 180, -90};

}  // namespace

ChannelMap pattern_channel_map(const SpatialPattern& p) {
    if (p.id < 0 || p.id >= kNumPatterns) throw std::invalid_argument("pattern id out of range");
    const XyMap& m = kXyMaps[static_cast<std::size_t>(p.azimuth_op())];
    ChannelMap cm;
    cm.source[0] = m.xs;
    cm.sign[0] = m.xsign;
    cm.source[1] = m.ys;
    cm.sign[1] = m.ysign;
    cm.source[2] = kZ;
    cm.sign[2] = p.elevation_flip() ? -1 : +1;
    return cm;
}

std::string pattern_azimuth_op_name(const SpatialPattern& p) {
    return kOpNames[static_cast<std::size_t>(p.azimuth_op())];
}

AmbisonicClip transform_channels(const AmbisonicClip& clip, const SpatialPattern& p) {
    const ChannelMap cm = pattern_channel_map(p);
    AmbisonicClip out;
    out.sample_rate = clip.sample_rate;
    out.channels[kW] = clip.channels[kW];
    for (int c = 0; c < 3; ++c) {
        const auto& src = clip.channels[static_cast<std::size_t>(cm.source[c])];
        auto& dst = out.channels[static_cast<std::size_t>(c) + 1];
        if (cm.sign[c] > 0) {
            dst = src;
        } else {
            dst.resize(src.size());
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = -src[i];
        }
    }
    return out;
}

DirectionOfArrival transform_doa(const DirectionOfArrival& d, const SpatialPattern& p) {
    const int op = p.azimuth_op();
    double az = op >= 4 ? -d.azimuth_deg : d.azimuth_deg;
    az = wrap_azimuth(az + kOpOffsets[static_cast<std::size_t>(op)]);
    const double el = p.elevation_flip() ? -d.elevation_deg : d.elevation_deg;
    return {az, el};
}

EventList transform_event_list(const EventList& events, const SpatialPattern& p) {
    EventList out = events;
    for (auto& e : out) e.doa = transform_doa(e.doa, p);
    return out;
}

SpatialPattern compose_patterns(const SpatialPattern& p, const SpatialPattern& q) {
    // Track the composed azimuth map az -> sign*az + offset.
    const int ps = p.azimuth_op() >= 4 ? -1 : 1;
    const int qs = q.azimuth_op() >= 4 ? -1 : 1;
    const double po = kOpOffsets[static_cast<std::size_t>(p.azimuth_op())];
    const double qo = kOpOffsets[static_cast<std::size_t>(q.azimuth_op())];
    const int sign = ps * qs;
    const double offset = wrap_azimuth(qs * po + qo);
    int op = -1;
    for (int i = 0; i < 8; ++i) {
        const int is = i >= 4 ? -1 : 1;
        if (is == sign && wrap_azimuth(kOpOffsets[static_cast<std::size_t>(i)] - offset) == 0.0) {
            op = i;
            break;
        }
    }
    if (op < 0) throw std::logic_error("pattern composition not closed");
    const bool flip = p.elevation_flip() != q.elevation_flip();
    return {op + (flip ? 8 : 0)};
}

SpatialPattern inverse_pattern(const SpatialPattern& p) {
    for (int id = 0; id < kNumPatterns; ++id) {
        if (compose_patterns(p, {id}).id == 0) return {id};
    }
    throw std::logic_error("pattern has no inverse");
}

std::uint64_t PatternRng::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("bound must be positive");
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % bound;
}

}  // namespace seldkit
