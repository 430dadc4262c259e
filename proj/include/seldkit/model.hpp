#pragma once
// Deterministic forward pass of the SELD CRNN: five conv blocks with 1xM
// rectangular filters (conv -> ReLU -> batch norm -> max pool), two
// bidirectional GRU layers, and parallel SED / DOA fully-connected heads.
// Inference only; dropout is the identity here.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "seldkit/features.hpp"

namespace seldkit {

struct ModelConfig {
    int n_classes = 14;
    int filter_freq = 48;  // M of the 1xM conv kernels
    int conv_channels = 64;
    int n_conv_blocks = 5;
    // (time, freq) pool factors per block.
    std::vector<std::pair<int, int>> pool_schedule = {{5, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}};
    int gru_units = 128;
    int n_gru_layers = 2;
    int fc_units = 128;
    float dropout_rate = 0.2f;  // part of the architecture; no-op at inference

    int doa_width() const { return 3 * n_classes; }
};

struct Tensor {
    std::vector<std::size_t> dims;
    std::vector<float> data;

    std::size_t size() const { return data.size(); }
};

// Named weight tensors; validated against the config-derived manifest.
using WeightSet = std::map<std::string, Tensor>;

struct Prediction {
    std::size_t label_frames = 0;
    std::vector<float> sed;  // label_frames x 14, in (0,1)
    std::vector<float> doa;  // label_frames x 42, (x,y,z) per class, class-major
};

// Expected tensor name -> shape for a config.
std::map<std::string, std::vector<std::size_t>> weight_manifest(const ModelConfig& cfg);

// Throws listing the first missing/misshapen tensor. Also rejects
// non-positive batch-norm running variances.
void validate_weights(const WeightSet& w, const ModelConfig& cfg);

// Deterministic pseudo-random weights (uniform in [-scale, scale]; batch-norm
// variances 1, means 0, gammas 1).
WeightSet random_weights(const ModelConfig& cfg, std::uint64_t seed, float scale = 0.08f);

WeightSet zero_weights(const ModelConfig& cfg);

// --- layer primitives (rank-3 activations are T x F x C row-major) ---

// "same" zero padding along frequency: floor((M-1)/2) left, ceil((M-1)/2)
// right. Cross-correlation, no kernel flip. kernel dims: C_out x C_in x 1 x M.
std::vector<float> conv2d_same(const std::vector<float>& input, std::size_t t, std::size_t f,
                               std::size_t c_in, const Tensor& kernel, const Tensor& bias);

void batch_norm_infer(std::vector<float>& x, std::size_t channels, const Tensor& gamma,
                      const Tensor& beta, const Tensor& mean, const Tensor& var,
                      float eps = 1e-5f);

std::vector<float> maxpool2d(const std::vector<float>& x, std::size_t t, std::size_t f,
                             std::size_t c, int pool_t, int pool_f);

// Weights per direction: wz/wr/wn (units x in), uz/ur/un (units x units),
// bz/br/bn (units). Output T x 2*units, forward half then backward half.
struct GruDirectionWeights {
    const Tensor *wz, *wr, *wn, *uz, *ur, *un, *bz, *br, *bn;
};
std::vector<float> gru_bidirectional(const std::vector<float>& x, std::size_t t, std::size_t d_in,
                                     const GruDirectionWeights& fw, const GruDirectionWeights& bw,
                                     std::size_t units);

enum class Activation { kLinear, kSigmoid, kTanh };
std::vector<float> dense(const std::vector<float>& x, std::size_t t, std::size_t d_in,
                         const Tensor& w, const Tensor& b, Activation act);

// Full stack. Feature frame count must be divisible by 5.
Prediction forward(const FeatureTensor& features, const WeightSet& w, const ModelConfig& cfg);

// Mean binary cross-entropy, predictions clamped to [1e-7, 1-1e-7].
double bce_loss(const std::vector<float>& pred, const std::vector<float>& target);

double mse_loss(const std::vector<float>& pred, const std::vector<float>& target);

}  // namespace seldkit
