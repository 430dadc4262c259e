#pragma once
// STFT, mel filterbank, log-mel magnitudes and mel-space acoustic intensity.
//
// Fixed front-end: 24 kHz input, 960-point periodic Hann window, 480-sample
// hop, 64 HTK-mel triangular bands spanning 0-12 kHz. Feature maps per frame:
// 4 log-mel channels (W, X, Y, Z) followed by the normalized intensity
// vector (x, y, z), 64 bands each.

#include <complex>
#include <cstddef>
#include <vector>

#include "seldkit/geometry.hpp"

namespace seldkit {

inline constexpr int kSampleRate = 24000;
inline constexpr std::size_t kFftSize = 960;
inline constexpr std::size_t kHopSize = 480;
inline constexpr std::size_t kNumBins = kFftSize / 2 + 1;  // 481
inline constexpr std::size_t kNumMels = 64;
inline constexpr std::size_t kNumFeatureMaps = 7;
inline constexpr float kEpsFloor = 1e-8f;
// Five 20 ms feature frames per 100 ms label frame.
inline constexpr std::size_t kFramesPerLabel = 5;

struct Spectrogram {
    std::size_t frames = 0;
    // Per FOA channel, frames x 481 row-major.
    std::array<std::vector<std::complex<float>>, 4> channels;

    const std::complex<float>* row(int ch, std::size_t frame) const {
        return channels[static_cast<std::size_t>(ch)].data() + frame * kNumBins;
    }
};

struct MelBank {
    // 64 x 481 row-major, non-negative.
    std::vector<float> weights;
    std::vector<double> center_hz;  // 64 band centers

    float at(std::size_t band, std::size_t bin) const { return weights[band * kNumBins + bin]; }
};

// frames x 64 x 7 row-major.
struct FeatureTensor {
    std::size_t frames = 0;
    std::vector<float> data;

    float& at(std::size_t frame, std::size_t band, std::size_t map) {
        return data[(frame * kNumMels + band) * kNumFeatureMaps + map];
    }
    float at(std::size_t frame, std::size_t band, std::size_t map) const {
        return data[(frame * kNumMels + band) * kNumFeatureMaps + map];
    }
};

// floor((n - 960) / 480) + 1; requires n >= 960.
std::size_t stft_frame_count(std::size_t num_samples);

// Throws if the clip is shorter than one window.
Spectrogram stft(const AmbisonicClip& clip);

MelBank build_mel_bank(int sample_rate = kSampleRate, std::size_t n_fft = kFftSize,
                       std::size_t n_mels = kNumMels);

// Per channel: ln(bank * |STFT|^2 + eps). Output frames x 64 x 4 row-major.
std::vector<float> logmel(const Spectrogram& spec, const MelBank& bank);

// Mel-projected Re(W* . [X,Y,Z]), normalized per (frame, band) to unit length
// (with an eps guard), pointing toward the source. Output frames x 64 x 3.
std::vector<float> intensity(const Spectrogram& spec, const MelBank& bank);

FeatureTensor extract_features(const AmbisonicClip& clip);

}  // namespace seldkit
