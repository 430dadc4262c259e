#pragma once
// Synthetic scene generation: a scene is a list of plane-wave events (noise
// bursts or tones) with known directions, summed into an FOA clip with
// matching 100 ms ground-truth labels. This is the end-to-end test oracle.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seldkit/events.hpp"
#include "seldkit/geometry.hpp"

namespace seldkit {

enum class SourceKind { kNoiseBurst, kTone };

struct SceneEvent {
    int cls = 0;
    int track = 0;
    double onset_s = 0.0;
    double offset_s = 0.0;
    DirectionOfArrival doa;
    SourceKind kind = SourceKind::kNoiseBurst;
    double tone_hz = 440.0;  // only for kTone
    double gain = 0.5;
};

struct SceneSpec {
    double duration_s = 10.0;
    std::uint64_t seed = 0;
    std::vector<SceneEvent> events;
};

// Parses a TOML subset: top-level `duration` / `seed` keys plus [[event]]
// tables with class, track, onset, offset, azimuth, elevation, kind
// ("noise" or "tone"), freq and gain keys.
SceneSpec parse_scene_spec(const std::string& path);

// Sums the encoded events; a label frame is active when the event covers at
// least half of it. Throws on invalid event bounds or on clipping.
std::pair<AmbisonicClip, EventList> synth_scene(const SceneSpec& spec);

}  // namespace seldkit
