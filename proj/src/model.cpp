#include "seldkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "seldkit/kernels.hpp"

namespace seldkit {

namespace {

std::string shape_str(const std::vector<std::size_t>& dims) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "x" : "") << dims[i];
    os << ")";
    return os.str();
}

void require_shape(const Tensor& t, const std::vector<std::size_t>& dims, const std::string& name) {
    if (t.dims != dims)
        throw std::invalid_argument("tensor '" + name + "': expected shape " + shape_str(dims) +
                                    ", got " + shape_str(t.dims));
}

float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

}  // namespace

std::map<std::string, std::vector<std::size_t>> weight_manifest(const ModelConfig& cfg) {
    std::map<std::string, std::vector<std::size_t>> m;
    const auto co = static_cast<std::size_t>(cfg.conv_channels);
    const auto M = static_cast<std::size_t>(cfg.filter_freq);
    for (int i = 1; i <= cfg.n_conv_blocks; ++i) {
        const std::size_t ci = i == 1 ? kNumFeatureMaps : co;
        const std::string p = "conv" + std::to_string(i);
        m[p + ".kernel"] = {co, ci, 1, M};
        m[p + ".bias"] = {co};
        const std::string b = "bn" + std::to_string(i);
        m[b + ".gamma"] = {co};
        m[b + ".beta"] = {co};
        m[b + ".mean"] = {co};
        m[b + ".var"] = {co};
    }
    // Frequency extent after the conv stack.
    std::size_t freq = kNumMels;
    for (auto [pt, pf] : cfg.pool_schedule) freq /= static_cast<std::size_t>(pf);
    const auto units = static_cast<std::size_t>(cfg.gru_units);
    std::size_t in = freq * co;
    for (int l = 1; l <= cfg.n_gru_layers; ++l) {
        for (const char* dir : {"fw", "bw"}) {
            const std::string p = "gru" + std::to_string(l) + "." + dir + ".";
            for (const char* g : {"wz", "wr", "wn"}) m[p + g] = {units, in};
            for (const char* g : {"uz", "ur", "un"}) m[p + g] = {units, units};
            for (const char* g : {"bz", "br", "bn"}) m[p + g] = {units};
        }
        in = 2 * units;
    }
    const auto fc = static_cast<std::size_t>(cfg.fc_units);
    for (const char* head : {"sed", "doa"}) {
        const std::size_t out =
            head[0] == 's' ? static_cast<std::size_t>(cfg.n_classes)
                           : static_cast<std::size_t>(cfg.doa_width());
        m[std::string(head) + ".fc1.w"] = {fc, 2 * units};
        m[std::string(head) + ".fc1.b"] = {fc};
        m[std::string(head) + ".fc2.w"] = {out, fc};
        m[std::string(head) + ".fc2.b"] = {out};
    }
    return m;
}

void validate_weights(const WeightSet& w, const ModelConfig& cfg) {
    for (const auto& [name, dims] : weight_manifest(cfg)) {
        auto it = w.find(name);
        if (it == w.end()) throw std::invalid_argument("missing weight tensor '" + name + "'");
        require_shape(it->second, dims, name);
        if (name.size() > 4 && name.substr(name.size() - 4) == ".var") {
            for (float v : it->second.data)
                if (!(v > 0.0f))
                    throw std::invalid_argument("non-positive running variance in '" + name + "'");
        }
    }
}

WeightSet random_weights(const ModelConfig& cfg, std::uint64_t seed, float scale) {
    std::mt19937_64 engine(seed);
    auto uniform = [&engine]() {
        return static_cast<double>(engine() >> 11) * 0x1.0p-53;  // [0, 1)
    };
    WeightSet w;
    for (const auto& [name, dims] : weight_manifest(cfg)) {
        Tensor t;
        t.dims = dims;
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        t.data.resize(n);
        const bool is_var = name.ends_with(".var");
        const bool is_mean = name.ends_with(".mean");
        const bool is_gamma = name.ends_with(".gamma");
        for (auto& v : t.data) {
            if (is_var || is_gamma)
                v = 1.0f;
            else if (is_mean)
                v = 0.0f;
            else
                v = scale * static_cast<float>(2.0 * uniform() - 1.0);
        }
        w.emplace(name, std::move(t));
    }
    return w;
}

WeightSet zero_weights(const ModelConfig& cfg) {
    WeightSet w;
    for (const auto& [name, dims] : weight_manifest(cfg)) {
        Tensor t;
        t.dims = dims;
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        t.data.assign(n, name.ends_with(".var") ? 1.0f : 0.0f);
        w.emplace(name, std::move(t));
    }
    return w;
}

std::vector<float> conv2d_same(const std::vector<float>& input, std::size_t t, std::size_t f,
                               std::size_t c_in, const Tensor& kernel, const Tensor& bias) {
    if (kernel.dims.size() != 4 || kernel.dims[1] != c_in || kernel.dims[2] != 1)
        throw std::invalid_argument("conv kernel: expected shape (C_out x " +
                                    std::to_string(c_in) + " x 1 x M), got " +
                                    shape_str(kernel.dims));
    const std::size_t c_out = kernel.dims[0];
    const std::size_t m = kernel.dims[3];
    require_shape(bias, {c_out}, "conv bias");
    if (input.size() != t * f * c_in) throw std::invalid_argument("conv input size mismatch");

    const std::size_t pad_left = (m - 1) / 2;

    // Repack kernel as [c_out][m][c_in] so each output is one contiguous dot.
    std::vector<float> packed(c_out * m * c_in);
    for (std::size_t o = 0; o < c_out; ++o)
        for (std::size_t i = 0; i < c_in; ++i)
            for (std::size_t j = 0; j < m; ++j)
                packed[(o * m + j) * c_in + i] = kernel.data[((o * c_in + i) * 1 + 0) * m + j];

    std::vector<float> out(t * f * c_out);
    std::vector<float> row((f + m - 1) * c_in, 0.0f);
    for (std::size_t ti = 0; ti < t; ++ti) {
        std::copy_n(input.data() + ti * f * c_in, f * c_in, row.data() + pad_left * c_in);
        for (std::size_t fi = 0; fi < f; ++fi) {
            const float* window = row.data() + fi * c_in;
            float* dst = out.data() + (ti * f + fi) * c_out;
            for (std::size_t o = 0; o < c_out; ++o)
                dst[o] = bias.data[o] + kernels::dot(packed.data() + o * m * c_in, window, m * c_in);
        }
    }
    return out;
}

void batch_norm_infer(std::vector<float>& x, std::size_t channels, const Tensor& gamma,
                      const Tensor& beta, const Tensor& mean, const Tensor& var, float eps) {
    require_shape(gamma, {channels}, "bn gamma");
    require_shape(beta, {channels}, "bn beta");
    require_shape(mean, {channels}, "bn mean");
    require_shape(var, {channels}, "bn var");
    std::vector<float> scale(channels), shift(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        if (!(var.data[c] > 0.0f))
            throw std::invalid_argument("non-positive batch-norm variance");
        scale[c] = gamma.data[c] / std::sqrt(var.data[c] + eps);
        shift[c] = beta.data[c] - mean.data[c] * scale[c];
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t c = i % channels;
        x[i] = x[i] * scale[c] + shift[c];
    }
}

std::vector<float> maxpool2d(const std::vector<float>& x, std::size_t t, std::size_t f,
                             std::size_t c, int pool_t, int pool_f) {
    const auto pt = static_cast<std::size_t>(pool_t);
    const auto pf = static_cast<std::size_t>(pool_f);
    if (t % pt != 0 || f % pf != 0)
        throw std::invalid_argument("maxpool: dims " + std::to_string(t) + "x" +
                                    std::to_string(f) + " not divisible by pool " +
                                    std::to_string(pool_t) + "x" + std::to_string(pool_f));
    const std::size_t to = t / pt, fo = f / pf;
    std::vector<float> out(to * fo * c, -std::numeric_limits<float>::infinity());
    for (std::size_t ti = 0; ti < t; ++ti)
        for (std::size_t fi = 0; fi < f; ++fi) {
            const float* src = x.data() + (ti * f + fi) * c;
            float* dst = out.data() + ((ti / pt) * fo + fi / pf) * c;
            for (std::size_t ci = 0; ci < c; ++ci) dst[ci] = std::max(dst[ci], src[ci]);
        }
    return out;
}

namespace {

// One GRU direction over a (possibly reversed) sequence.
void gru_direction(const std::vector<float>& x, std::size_t t, std::size_t d_in,
                   const GruDirectionWeights& w, std::size_t units, bool backward,
                   float* out, std::size_t out_stride, std::size_t out_offset) {
    for (const Tensor* m : {w.wz, w.wr, w.wn}) require_shape(*m, {units, d_in}, "gru input weight");
    for (const Tensor* m : {w.uz, w.ur, w.un})
        require_shape(*m, {units, units}, "gru recurrent weight");
    for (const Tensor* m : {w.bz, w.br, w.bn}) require_shape(*m, {units}, "gru bias");

    std::vector<float> h(units, 0.0f), hn(units), z(units), r(units), un_h(units);
    for (std::size_t step = 0; step < t; ++step) {
        const std::size_t ti = backward ? t - 1 - step : step;
        const float* xt = x.data() + ti * d_in;
        for (std::size_t u = 0; u < units; ++u) {
            z[u] = sigmoidf(kernels::dot(w.wz->data.data() + u * d_in, xt, d_in) +
                            kernels::dot(w.uz->data.data() + u * units, h.data(), units) +
                            w.bz->data[u]);
            r[u] = sigmoidf(kernels::dot(w.wr->data.data() + u * d_in, xt, d_in) +
                            kernels::dot(w.ur->data.data() + u * units, h.data(), units) +
                            w.br->data[u]);
            un_h[u] = kernels::dot(w.un->data.data() + u * units, h.data(), units);
        }
        for (std::size_t u = 0; u < units; ++u) {
            const float n = std::tanh(kernels::dot(w.wn->data.data() + u * d_in, xt, d_in) +
                                      r[u] * un_h[u] + w.bn->data[u]);
            hn[u] = z[u] * h[u] + (1.0f - z[u]) * n;
        }
        h.swap(hn);
        float* dst = out + ti * out_stride + out_offset;
        std::copy_n(h.data(), units, dst);
    }
}

}  // namespace

std::vector<float> gru_bidirectional(const std::vector<float>& x, std::size_t t, std::size_t d_in,
                                     const GruDirectionWeights& fw, const GruDirectionWeights& bw,
                                     std::size_t units) {
    if (x.size() != t * d_in) throw std::invalid_argument("gru input size mismatch");
    std::vector<float> out(t * 2 * units);
    gru_direction(x, t, d_in, fw, units, false, out.data(), 2 * units, 0);
    gru_direction(x, t, d_in, bw, units, true, out.data(), 2 * units, units);
    return out;
}

std::vector<float> dense(const std::vector<float>& x, std::size_t t, std::size_t d_in,
                         const Tensor& w, const Tensor& b, Activation act) {
    if (w.dims.size() != 2 || w.dims[1] != d_in)
        throw std::invalid_argument("dense weight: expected shape (D_out x " +
                                    std::to_string(d_in) + "), got " + shape_str(w.dims));
    const std::size_t d_out = w.dims[0];
    require_shape(b, {d_out}, "dense bias");
    if (x.size() != t * d_in) throw std::invalid_argument("dense input size mismatch");
    std::vector<float> out(t * d_out);
    for (std::size_t ti = 0; ti < t; ++ti) {
        const float* xt = x.data() + ti * d_in;
        float* dst = out.data() + ti * d_out;
        for (std::size_t o = 0; o < d_out; ++o) {
            float v = kernels::dot(w.data.data() + o * d_in, xt, d_in) + b.data[o];
            switch (act) {
                case Activation::kLinear: break;
                case Activation::kSigmoid: v = sigmoidf(v); break;
                case Activation::kTanh: v = std::tanh(v); break;
            }
            dst[o] = v;
        }
    }
    return out;
}

Prediction forward(const FeatureTensor& features, const WeightSet& w, const ModelConfig& cfg) {
    if (features.frames % kFramesPerLabel != 0)
        throw std::invalid_argument("feature frame count must be divisible by 5");
    validate_weights(w, cfg);
    auto get = [&w](const std::string& name) -> const Tensor& { return w.at(name); };

    std::vector<float> x = features.data;
    std::size_t t = features.frames, f = kNumMels, c = kNumFeatureMaps;
    for (int i = 1; i <= cfg.n_conv_blocks; ++i) {
        const std::string ci = std::to_string(i);
        try {
            x = conv2d_same(x, t, f, c, get("conv" + ci + ".kernel"), get("conv" + ci + ".bias"));
            c = static_cast<std::size_t>(cfg.conv_channels);
            kernels::relu_inplace(x.data(), x.size());
            batch_norm_infer(x, c, get("bn" + ci + ".gamma"), get("bn" + ci + ".beta"),
                             get("bn" + ci + ".mean"), get("bn" + ci + ".var"));
            const auto [pt, pf] = cfg.pool_schedule[static_cast<std::size_t>(i - 1)];
            x = maxpool2d(x, t, f, c, pt, pf);
            t /= static_cast<std::size_t>(pt);
            f /= static_cast<std::size_t>(pf);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("conv block " + ci + ": " + e.what());
        }
    }

    // T x F x C with C innermost is already the frequency-major flatten.
    std::size_t d = f * c;
    const auto units = static_cast<std::size_t>(cfg.gru_units);
    for (int l = 1; l <= cfg.n_gru_layers; ++l) {
        const std::string p = "gru" + std::to_string(l) + ".";
        auto dir = [&get, &p](const char* name) {
            const std::string q = p + name + ".";
            return GruDirectionWeights{&get(q + "wz"), &get(q + "wr"), &get(q + "wn"),
                                       &get(q + "uz"), &get(q + "ur"), &get(q + "un"),
                                       &get(q + "bz"), &get(q + "br"), &get(q + "bn")};
        };
        try {
            x = gru_bidirectional(x, t, d, dir("fw"), dir("bw"), units);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("gru layer " + std::to_string(l) + ": " + e.what());
        }
        d = 2 * units;
    }

    Prediction pred;
    pred.label_frames = t;
    {
        auto h = dense(x, t, d, get("sed.fc1.w"), get("sed.fc1.b"), Activation::kLinear);
        pred.sed = dense(h, t, static_cast<std::size_t>(cfg.fc_units), get("sed.fc2.w"),
                         get("sed.fc2.b"), Activation::kSigmoid);
    }
    {
        auto h = dense(x, t, d, get("doa.fc1.w"), get("doa.fc1.b"), Activation::kLinear);
        pred.doa = dense(h, t, static_cast<std::size_t>(cfg.fc_units), get("doa.fc2.w"),
                         get("doa.fc2.b"), Activation::kTanh);
    }
    return pred;
}

double bce_loss(const std::vector<float>& pred, const std::vector<float>& target) {
    if (pred.size() != target.size() || pred.empty())
        throw std::invalid_argument("bce_loss: shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = std::clamp(static_cast<double>(pred[i]), 1e-7, 1.0 - 1e-7);
        const double t = target[i];
        sum += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    }
    return sum / static_cast<double>(pred.size());
}

double mse_loss(const std::vector<float>& pred, const std::vector<float>& target) {
    if (pred.size() != target.size() || pred.empty())
        throw std::invalid_argument("mse_loss: shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = static_cast<double>(pred[i]) - static_cast<double>(target[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

}  // namespace seldkit
