#include "seldkit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "seldkit/features.hpp"

namespace seldkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& v, int line) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("scene spec: bad number at line " + std::to_string(line));
    }
    if (used != v.size())
        throw std::runtime_error("scene spec: bad number at line " + std::to_string(line));
    return x;
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    SceneSpec spec;
    SceneEvent* current = nullptr;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s == "[[event]]") {
            spec.events.emplace_back();
            current = &spec.events.back();
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("scene spec: expected key = value at line " +
                                     std::to_string(line));
        const std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (current == nullptr) {
            if (key == "duration")
                spec.duration_s = parse_number(value, line);
            else if (key == "seed")
                spec.seed = static_cast<std::uint64_t>(parse_number(value, line));
            else
                throw std::runtime_error("scene spec: unknown key '" + key + "' at line " +
                                         std::to_string(line));
            continue;
        }
        if (key == "kind") {
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            if (value == "noise")
                current->kind = SourceKind::kNoiseBurst;
            else if (value == "tone")
                current->kind = SourceKind::kTone;
            else
                throw std::runtime_error("scene spec: unknown source kind '" + value +
                                         "' at line " + std::to_string(line));
        } else if (key == "class") {
            current->cls = static_cast<int>(parse_number(value, line));
        } else if (key == "track") {
            current->track = static_cast<int>(parse_number(value, line));
        } else if (key == "onset") {
            current->onset_s = parse_number(value, line);
        } else if (key == "offset") {
            current->offset_s = parse_number(value, line);
        } else if (key == "azimuth") {
            current->doa.azimuth_deg = parse_number(value, line);
        } else if (key == "elevation") {
            current->doa.elevation_deg = parse_number(value, line);
        } else if (key == "freq") {
            current->tone_hz = parse_number(value, line);
        } else if (key == "gain") {
            current->gain = parse_number(value, line);
        } else {
            throw std::runtime_error("scene spec: unknown key '" + key + "' at line " +
                                     std::to_string(line));
        }
    }
    return spec;
}

std::pair<AmbisonicClip, EventList> synth_scene(const SceneSpec& spec) {
    const auto total = static_cast<std::size_t>(
        std::llround(spec.duration_s * static_cast<double>(kSampleRate)));
    AmbisonicClip clip;
    clip.sample_rate = kSampleRate;
    for (auto& ch : clip.channels) ch.assign(total, 0.0f);

    std::mt19937_64 engine(spec.seed);
    EventList labels;
    for (std::size_t ei = 0; ei < spec.events.size(); ++ei) {
        const SceneEvent& ev = spec.events[ei];
        if (ev.cls < 0 || ev.cls >= kNumClasses)
            throw std::invalid_argument("event " + std::to_string(ei) + ": class out of range");
        if (!(ev.onset_s < ev.offset_s) || ev.offset_s > spec.duration_s + 1e-9)
            throw std::invalid_argument("event " + std::to_string(ei) +
                                        ": onset must precede offset within the scene duration");

        const auto start = static_cast<std::size_t>(
            std::llround(ev.onset_s * static_cast<double>(kSampleRate)));
        const auto stop = std::min(total, static_cast<std::size_t>(std::llround(
                                              ev.offset_s * static_cast<double>(kSampleRate))));
        std::vector<float> signal(stop - start);
        if (ev.kind == SourceKind::kNoiseBurst) {
            for (auto& s : signal) {
                const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
                s = static_cast<float>(ev.gain * (2.0 * u - 1.0));
            }
        } else {
            for (std::size_t i = 0; i < signal.size(); ++i)
                signal[i] = static_cast<float>(
                    ev.gain * std::sin(2.0 * kPi * ev.tone_hz * static_cast<double>(i) /
                                       static_cast<double>(kSampleRate)));
        }

        const AmbisonicClip enc = encode_plane_wave(signal, ev.doa, kSampleRate);
        for (int c = 0; c < 4; ++c) {
            const auto& src = enc.channels[static_cast<std::size_t>(c)];
            auto& dst = clip.channels[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < src.size(); ++i) dst[start + i] += src[i];
        }

        // A label frame is active when the event covers at least half of it.
        const int first = static_cast<int>(std::floor(ev.onset_s / kLabelFrameSeconds));
        const int last = static_cast<int>(std::ceil(ev.offset_s / kLabelFrameSeconds));
        for (int f = first; f < last; ++f) {
            const double fs = f * kLabelFrameSeconds, fe = fs + kLabelFrameSeconds;
            const double covered = std::min(fe, ev.offset_s) - std::max(fs, ev.onset_s);
            if (covered >= 0.5 * kLabelFrameSeconds)
                labels.push_back({f, ev.cls, ev.track, ev.doa});
        }
    }

    for (const auto& ch : clip.channels)
        for (float s : ch)
            if (std::abs(s) > 1.0f)
                throw std::runtime_error(
                    "synthesized scene clips (|sample| > 1); reduce event gains");

    std::sort(labels.begin(), labels.end(), [](const EventRecord& a, const EventRecord& b) {
        return std::tie(a.frame, a.cls, a.track) < std::tie(b.frame, b.cls, b.track);
    });
    return {std::move(clip), std::move(labels)};
}

}  // namespace seldkit
