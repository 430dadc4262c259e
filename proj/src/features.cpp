#include "seldkit/features.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "seldkit/kernels.hpp"

namespace seldkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// FFTW plan creation is not thread-safe.
std::mutex g_fftw_mutex;

struct RealFft {
    std::vector<double> in;
    std::vector<std::complex<double>> out;
    fftw_plan plan;

    RealFft() : in(kFftSize), out(kNumBins) {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(kFftSize), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
    }
};

}  // namespace

std::size_t stft_frame_count(std::size_t num_samples) {
    return (num_samples - kFftSize) / kHopSize + 1;
}

Spectrogram stft(const AmbisonicClip& clip) {
    if (clip.num_samples() < kFftSize) throw std::invalid_argument("signal too short");

    std::vector<double> window(kFftSize);
    for (std::size_t n = 0; n < kFftSize; ++n)
        window[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                         static_cast<double>(kFftSize));

    Spectrogram spec;
    spec.frames = stft_frame_count(clip.num_samples());
    RealFft fft;
    for (int ch = 0; ch < 4; ++ch) {
        const auto& samples = clip.channels[static_cast<std::size_t>(ch)];
        auto& dst = spec.channels[static_cast<std::size_t>(ch)];
        dst.resize(spec.frames * kNumBins);
        for (std::size_t t = 0; t < spec.frames; ++t) {
            const std::size_t start = t * kHopSize;
            for (std::size_t n = 0; n < kFftSize; ++n)
                fft.in[n] = window[n] * static_cast<double>(samples[start + n]);
            fftw_execute(fft.plan);
            for (std::size_t k = 0; k < kNumBins; ++k)
                dst[t * kNumBins + k] = std::complex<float>(
                    static_cast<float>(fft.out[k].real()), static_cast<float>(fft.out[k].imag()));
        }
    }
    return spec;
}

MelBank build_mel_bank(int sample_rate, std::size_t n_fft, std::size_t n_mels) {
    const double f_max = sample_rate / 2.0;
    const std::size_t n_bins = n_fft / 2 + 1;
    const double mel_max = hz_to_mel(f_max);

    // n_mels + 2 edge points, evenly spaced on the mel scale.
    std::vector<double> edges(n_mels + 2);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = mel_max * static_cast<double>(i) / static_cast<double>(n_mels + 1);

    MelBank bank;
    bank.weights.assign(n_mels * n_bins, 0.0f);
    bank.center_hz.resize(n_mels);
    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(n_fft);
    for (std::size_t m = 0; m < n_mels; ++m) {
        const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
        bank.center_hz[m] = mel_to_hz(center);
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double mel_k = hz_to_mel(bin_hz * static_cast<double>(k));
            double w = 0.0;
            if (mel_k > lo && mel_k < hi) {
                w = mel_k <= center ? (mel_k - lo) / (center - lo) : (hi - mel_k) / (hi - center);
            }
            bank.weights[m * n_bins + k] = static_cast<float>(w);
        }
    }
    return bank;
}

std::vector<float> logmel(const Spectrogram& spec, const MelBank& bank) {
    std::vector<float> out(spec.frames * kNumMels * 4);
    std::vector<float> power(kNumBins);
    for (int ch = 0; ch < 4; ++ch) {
        for (std::size_t t = 0; t < spec.frames; ++t) {
            const std::complex<float>* row = spec.row(ch, t);
            for (std::size_t k = 0; k < kNumBins; ++k) power[k] = std::norm(row[k]);
            for (std::size_t m = 0; m < kNumMels; ++m) {
                const float e =
                    kernels::dot(bank.weights.data() + m * kNumBins, power.data(), kNumBins);
                out[(t * kNumMels + m) * 4 + static_cast<std::size_t>(ch)] =
                    std::log(e + kEpsFloor);
            }
        }
    }
    return out;
}

std::vector<float> intensity(const Spectrogram& spec, const MelBank& bank) {
    std::vector<float> out(spec.frames * kNumMels * 3);
    std::array<std::vector<float>, 3> raw;
    for (auto& r : raw) r.resize(kNumBins);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const std::complex<float>* w = spec.row(kW, t);
        const std::complex<float>* dir[3] = {spec.row(kX, t), spec.row(kY, t), spec.row(kZ, t)};
        for (int c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < kNumBins; ++k)
                raw[static_cast<std::size_t>(c)][k] =
                    w[k].real() * dir[c][k].real() + w[k].imag() * dir[c][k].imag();
        for (std::size_t m = 0; m < kNumMels; ++m) {
            float v[3];
            for (int c = 0; c < 3; ++c)
                v[c] = kernels::dot(bank.weights.data() + m * kNumBins,
                                    raw[static_cast<std::size_t>(c)].data(), kNumBins);
            const float norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            for (int c = 0; c < 3; ++c)
                out[(t * kNumMels + m) * 3 + static_cast<std::size_t>(c)] =
                    v[c] / (norm + kEpsFloor);
        }
    }
    return out;
}

FeatureTensor extract_features(const AmbisonicClip& clip) {
    const Spectrogram spec = stft(clip);
    const MelBank bank = build_mel_bank();
    const std::vector<float> lm = logmel(spec, bank);
    const std::vector<float> iv = intensity(spec, bank);

    FeatureTensor out;
    out.frames = spec.frames;
    out.data.resize(out.frames * kNumMels * kNumFeatureMaps);
    for (std::size_t t = 0; t < out.frames; ++t) {
        for (std::size_t m = 0; m < kNumMels; ++m) {
            for (std::size_t c = 0; c < 4; ++c)
                out.at(t, m, c) = lm[(t * kNumMels + m) * 4 + c];
            for (std::size_t c = 0; c < 3; ++c)
                out.at(t, m, 4 + c) = iv[(t * kNumMels + m) * 3 + c];
        }
    }
    return out;
}

}  // namespace seldkit
