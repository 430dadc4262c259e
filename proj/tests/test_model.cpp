#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "naive.hpp"
#include "seldkit/model.hpp"

using namespace seldkit;

namespace {

Tensor make_tensor(std::vector<std::size_t> dims, std::vector<float> data) {
    return Tensor{std::move(dims), std::move(data)};
}

Tensor random_tensor(std::mt19937_64& rng, std::vector<std::size_t> dims, float scale = 0.5f) {
    Tensor t;
    t.dims = std::move(dims);
    std::size_t n = 1;
    for (std::size_t d : t.dims) n *= d;
    t.data.resize(n);
    for (auto& v : t.data) v = naive::uniformf(rng, -scale, scale);
    return t;
}

FeatureTensor random_features(std::mt19937_64& rng, std::size_t frames) {
    FeatureTensor f;
    f.frames = frames;
    f.data.resize(frames * kNumMels * kNumFeatureMaps);
    for (auto& v : f.data) v = naive::uniformf(rng, -2.0f, 2.0f);
    return f;
}

GruDirectionWeights dir_weights(const WeightSet& w, const std::string& prefix) {
    return {&w.at(prefix + ".wz"), &w.at(prefix + ".wr"), &w.at(prefix + ".wn"),
            &w.at(prefix + ".uz"), &w.at(prefix + ".ur"), &w.at(prefix + ".un"),
            &w.at(prefix + ".bz"), &w.at(prefix + ".br"), &w.at(prefix + ".bn")};
}

}  // namespace

TEST_CASE("conv2d_same with a 1x1 identity kernel is the identity") {
    std::mt19937_64 rng(41);
    const std::size_t t = 3, f = 5;
    std::vector<float> input(t * f);
    for (auto& v : input) v = naive::uniformf(rng, -1.0f, 1.0f);
    const auto out = conv2d_same(input, t, f, 1, make_tensor({1, 1, 1, 1}, {1.0f}),
                                 make_tensor({1}, {0.0f}));
    CHECK(out == input);
}

TEST_CASE("conv2d_same hand example: ones 1x4 input, ones 1x3 kernel") {
    const std::vector<float> input = {1, 1, 1, 1};
    const auto out = conv2d_same(input, 1, 4, 1, make_tensor({1, 1, 1, 3}, {1, 1, 1}),
                                 make_tensor({1}, {0.0f}));
    REQUIRE(out.size() == 4);
    CHECK(out[0] == 2.0f);
    CHECK(out[1] == 3.0f);
    CHECK(out[2] == 3.0f);
    CHECK(out[3] == 2.0f);
}

TEST_CASE("conv2d_same M=48 on F=64 keeps the frequency extent") {
    std::mt19937_64 rng(42);
    const auto kernel = random_tensor(rng, {2, 3, 1, 48});
    const auto bias = random_tensor(rng, {2});
    std::vector<float> input(7 * 64 * 3);
    for (auto& v : input) v = naive::uniformf(rng, -1.0f, 1.0f);
    const auto out = conv2d_same(input, 7, 64, 3, kernel, bias);
    CHECK(out.size() == 7 * 64 * 2);
}

TEST_CASE("conv2d_same rejects mismatched shapes") {
    CHECK_THROWS_AS(conv2d_same({0.0f}, 1, 1, 1, make_tensor({1, 2, 1, 1}, {1, 1}),
                                make_tensor({1}, {0.0f})),
                    std::invalid_argument);
}

TEST_CASE("conv2d_same matches the naive reference") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t t = 1 + rng() % 4, f = 1 + rng() % 12, c_in = 1 + rng() % 4;
        const std::size_t c_out = 1 + rng() % 5, m = 1 + rng() % (f + 2);
        const auto kernel = random_tensor(rng, {c_out, c_in, 1, m});
        const auto bias = random_tensor(rng, {c_out});
        std::vector<float> input(t * f * c_in);
        for (auto& v : input) v = naive::uniformf(rng, -1.0f, 1.0f);
        const auto got = conv2d_same(input, t, f, c_in, kernel, bias);
        const auto want = naive::conv2d_ref(input, t, f, c_in, kernel, bias);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(std::abs(got[i] - want[i]) <= 1e-6f * (1.0f + std::abs(want[i])));
    }
}

TEST_CASE("batch_norm_infer worked examples") {
    std::vector<float> x = {1.0f, 2.0f, 3.0f};
    auto ones = make_tensor({1}, {1.0f});
    auto zeros = make_tensor({1}, {0.0f});
    auto y = x;
    batch_norm_infer(y, 1, ones, zeros, zeros, ones);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(y[i] == doctest::Approx(x[i] / std::sqrt(1.0f + 1e-5f)));

    // x == mean -> beta.
    std::vector<float> z = {3.0f};
    batch_norm_infer(z, 1, make_tensor({1}, {2.0f}), make_tensor({1}, {7.0f}),
                     make_tensor({1}, {3.0f}), make_tensor({1}, {4.0f}));
    CHECK(z[0] == doctest::Approx(7.0f));

    std::vector<float> v = {5.0f};
    batch_norm_infer(v, 1, make_tensor({1}, {2.0f}), make_tensor({1}, {1.0f}),
                     make_tensor({1}, {3.0f}), make_tensor({1}, {4.0f}));
    CHECK(v[0] == doctest::Approx(2.999995).epsilon(1e-6));
}

TEST_CASE("batch_norm_infer rejects non-positive variance") {
    std::vector<float> x = {1.0f};
    auto ones = make_tensor({1}, {1.0f});
    CHECK_THROWS_AS(batch_norm_infer(x, 1, ones, ones, ones, make_tensor({1}, {0.0f})),
                    std::invalid_argument);
}

TEST_CASE("maxpool2d basics") {
    // Constant input stays constant at reduced shape.
    std::vector<float> c(10 * 4, 2.5f);
    auto out = maxpool2d(c, 10, 4, 1, 5, 2);
    CHECK(out.size() == 2 * 2);
    for (float v : out) CHECK(v == 2.5f);

    const std::vector<float> row = {1, 5, 2, 4};
    out = maxpool2d(row, 1, 4, 1, 1, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == 5.0f);
    CHECK(out[1] == 4.0f);
}

TEST_CASE("maxpool2d divisibility") {
    std::vector<float> x(2999 * 2, 0.0f);
    CHECK_THROWS_AS(maxpool2d(x, 2999, 2, 1, 5, 2), std::invalid_argument);
    std::vector<float> ok(2995 * 2, 0.0f);
    const auto out = maxpool2d(ok, 2995, 2, 1, 5, 2);
    CHECK(out.size() == 599);
}

TEST_CASE("gru: zero weights give zero output") {
    ModelConfig cfg;
    const WeightSet w = zero_weights(cfg);
    std::mt19937_64 rng(44);
    std::vector<float> x(6 * 128);
    for (auto& v : x) v = naive::uniformf(rng, -1.0f, 1.0f);
    const auto out = gru_bidirectional(x, 6, 128, dir_weights(w, "gru1.fw"),
                                       dir_weights(w, "gru1.bw"), 128);
    for (float v : out) CHECK(v == 0.0f);
}

TEST_CASE("gru: T=1 with identical direction weights gives equal halves") {
    std::mt19937_64 rng(45);
    WeightSet w;
    for (const char* g : {"wz", "wr", "wn"}) w.emplace(g, random_tensor(rng, {4, 3}));
    for (const char* g : {"uz", "ur", "un"}) w.emplace(g, random_tensor(rng, {4, 4}));
    for (const char* g : {"bz", "br", "bn"}) w.emplace(g, random_tensor(rng, {4}));
    GruDirectionWeights d{&w.at("wz"), &w.at("wr"), &w.at("wn"), &w.at("uz"), &w.at("ur"),
                          &w.at("un"), &w.at("bz"), &w.at("br"), &w.at("bn")};
    std::vector<float> x = {0.3f, -0.2f, 0.9f};
    const auto out = gru_bidirectional(x, 1, 3, d, d, 4);
    REQUIRE(out.size() == 8);
    for (int u = 0; u < 4; ++u) CHECK(out[u] == out[4 + u]);
}

TEST_CASE("gru: scalar one-step hand evaluation") {
    WeightSet w;
    for (const char* g : {"wz", "wr", "wn", "uz", "ur", "un"})
        w.emplace(g, make_tensor({1, 1}, {1.0f}));
    for (const char* g : {"bz", "br", "bn"}) w.emplace(g, make_tensor({1}, {0.0f}));
    GruDirectionWeights d{&w.at("wz"), &w.at("wr"), &w.at("wn"), &w.at("uz"), &w.at("ur"),
                          &w.at("un"), &w.at("bz"), &w.at("br"), &w.at("bn")};
    const auto out = gru_bidirectional({1.0f}, 1, 1, d, d, 1);
    // z = sigma(1), n = tanh(1), h = (1-z) n ~ 0.20482.
    CHECK(out[0] == doctest::Approx(0.20482).epsilon(1e-4));
}

TEST_CASE("gru matches the naive reference") {
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t t = 1 + rng() % 7, d_in = 1 + rng() % 5, units = 1 + rng() % 6;
        WeightSet w;
        for (const char* g : {"wz", "wr", "wn"}) w.emplace(g, random_tensor(rng, {units, d_in}));
        for (const char* g : {"uz", "ur", "un"})
            w.emplace(g, random_tensor(rng, {units, units}));
        for (const char* g : {"bz", "br", "bn"}) w.emplace(g, random_tensor(rng, {units}));
        GruDirectionWeights d{&w.at("wz"), &w.at("wr"), &w.at("wn"), &w.at("uz"), &w.at("ur"),
                              &w.at("un"), &w.at("bz"), &w.at("br"), &w.at("bn")};
        std::vector<float> x(t * d_in);
        for (auto& v : x) v = naive::uniformf(rng, -1.0f, 1.0f);
        const auto got = gru_bidirectional(x, t, d_in, d, d, units);
        const auto want = naive::gru_bidirectional_ref(x, t, d_in, d, d, units);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-6f);
    }
}

TEST_CASE("dense worked examples") {
    std::mt19937_64 rng(47);
    // Identity weights, linear.
    std::vector<float> x = {0.5f, -1.5f};
    auto out = dense(x, 1, 2, make_tensor({2, 2}, {1, 0, 0, 1}), make_tensor({2}, {0, 0}),
                     Activation::kLinear);
    CHECK(out == x);

    // Zero input, sigmoid -> 0.5.
    out = dense({0.0f, 0.0f}, 1, 2, make_tensor({2, 2}, {0.3f, -0.2f, 0.1f, 0.4f}),
                make_tensor({2}, {0, 0}), Activation::kSigmoid);
    for (float v : out) CHECK(v == 0.5f);

    // x=(1,2), W=((1,1),(0,1)), b=(0,-2), tanh -> (tanh 3, tanh 0).
    out = dense({1.0f, 2.0f}, 1, 2, make_tensor({2, 2}, {1, 1, 0, 1}), make_tensor({2}, {0, -2}),
                Activation::kTanh);
    CHECK(out[0] == doctest::Approx(0.99505).epsilon(1e-4));
    CHECK(out[1] == doctest::Approx(0.0));
}

TEST_CASE("dense matches the naive reference") {
    std::mt19937_64 rng(48);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t t = 1 + rng() % 5, d_in = 1 + rng() % 40, d_out = 1 + rng() % 40;
        const auto w = random_tensor(rng, {d_out, d_in});
        const auto b = random_tensor(rng, {d_out});
        std::vector<float> x(t * d_in);
        for (auto& v : x) v = naive::uniformf(rng, -1.0f, 1.0f);
        for (auto act : {Activation::kLinear, Activation::kSigmoid, Activation::kTanh}) {
            const auto got = dense(x, t, d_in, w, b, act);
            const auto want = naive::dense_ref(x, t, d_in, w, b, act);
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(std::abs(got[i] - want[i]) <= 1e-6f * (1.0f + std::abs(want[i])));
        }
    }
}

TEST_CASE("weight manifest and validation") {
    ModelConfig cfg;
    const auto manifest = weight_manifest(cfg);
    CHECK(manifest.at("conv1.kernel") == std::vector<std::size_t>{64, 7, 1, 48});
    CHECK(manifest.at("conv5.kernel") == std::vector<std::size_t>{64, 64, 1, 48});
    CHECK(manifest.at("gru1.fw.wz") == std::vector<std::size_t>{128, 128});
    CHECK(manifest.at("gru2.bw.wn") == std::vector<std::size_t>{128, 256});
    CHECK(manifest.at("sed.fc2.w") == std::vector<std::size_t>{14, 128});
    CHECK(manifest.at("doa.fc2.w") == std::vector<std::size_t>{42, 128});

    WeightSet w = random_weights(cfg, 1);
    CHECK_NOTHROW(validate_weights(w, cfg));
    w.erase("bn3.gamma");
    CHECK_THROWS_WITH(validate_weights(w, cfg), "missing weight tensor 'bn3.gamma'");
    w = random_weights(cfg, 1);
    w.at("conv2.bias").dims = {63};
    w.at("conv2.bias").data.resize(63);
    CHECK_THROWS_AS(validate_weights(w, cfg), std::invalid_argument);
    w = random_weights(cfg, 1);
    w.at("bn1.var").data[5] = -1.0f;
    CHECK_THROWS_AS(validate_weights(w, cfg), std::invalid_argument);
}

TEST_CASE("forward: zero weights give sed 0.5 and doa 0") {
    std::mt19937_64 rng(49);
    ModelConfig cfg;
    const FeatureTensor f = random_features(rng, 20);
    const Prediction p = forward(f, zero_weights(cfg), cfg);
    CHECK(p.label_frames == 4);
    for (float v : p.sed) CHECK(v == 0.5f);
    for (float v : p.doa) CHECK(v == 0.0f);
}

TEST_CASE("forward: shape and range laws, determinism") {
    std::mt19937_64 rng(50);
    ModelConfig cfg;
    const WeightSet w = random_weights(cfg, 17);
    for (std::size_t t : {std::size_t(5), std::size_t(300)}) {
        const FeatureTensor f = random_features(rng, t);
        const Prediction p = forward(f, w, cfg);
        CHECK(p.label_frames == t / 5);
        CHECK(p.sed.size() == p.label_frames * 14);
        CHECK(p.doa.size() == p.label_frames * 42);
        for (float v : p.sed) {
            CHECK(v > 0.0f);
            CHECK(v < 1.0f);
        }
        for (float v : p.doa) {
            CHECK(v > -1.0f);
            CHECK(v < 1.0f);
        }
        const Prediction q = forward(f, w, cfg);
        CHECK(p.sed == q.sed);
        CHECK(p.doa == q.doa);
    }
}

TEST_CASE("forward rejects frame counts not divisible by 5") {
    std::mt19937_64 rng(51);
    ModelConfig cfg;
    const FeatureTensor f = random_features(rng, 7);
    CHECK_THROWS_AS(forward(f, zero_weights(cfg), cfg), std::invalid_argument);
}

TEST_CASE("pre-GRU stack is shift-equivariant by whole label frames") {
    std::mt19937_64 rng(52);
    ModelConfig cfg;
    const WeightSet w = random_weights(cfg, 23);
    const std::size_t t = 30;
    const FeatureTensor f = random_features(rng, t);

    // Shift by 5 feature frames, wrapping the tail (content of the first/last
    // label frame differs and is excluded from the comparison).
    FeatureTensor shifted;
    shifted.frames = t;
    shifted.data.resize(f.data.size());
    const std::size_t row = kNumMels * kNumFeatureMaps;
    for (std::size_t i = 0; i < t; ++i)
        std::copy_n(f.data.data() + i * row, row,
                    shifted.data.data() + ((i + 5) % t) * row);

    // Run only the convolutional stack for both.
    auto conv_stack = [&](const FeatureTensor& feat) {
        std::vector<float> x = feat.data;
        std::size_t ct = feat.frames, cf = kNumMels, cc = kNumFeatureMaps;
        for (int i = 1; i <= cfg.n_conv_blocks; ++i) {
            const std::string ci = std::to_string(i);
            x = conv2d_same(x, ct, cf, cc, w.at("conv" + ci + ".kernel"),
                            w.at("conv" + ci + ".bias"));
            cc = 64;
            for (auto& v : x) v = std::max(v, 0.0f);
            batch_norm_infer(x, cc, w.at("bn" + ci + ".gamma"), w.at("bn" + ci + ".beta"),
                             w.at("bn" + ci + ".mean"), w.at("bn" + ci + ".var"));
            const auto [pt, pf] = cfg.pool_schedule[i - 1];
            x = maxpool2d(x, ct, cf, cc, pt, pf);
            ct /= pt;
            cf /= pf;
        }
        return x;
    };
    const auto base = conv_stack(f);
    const auto moved = conv_stack(shifted);
    const std::size_t label_row = 2 * 64;  // after the stack: T/5 x 2 x 64
    const std::size_t labels = t / 5;
    for (std::size_t i = 1; i + 1 < labels; ++i)
        for (std::size_t j = 0; j < label_row; ++j)
            CHECK(base[i * label_row + j] ==
                  moved[((i + 1) % labels) * label_row + j]);
}

TEST_CASE("bce_loss") {
    CHECK(bce_loss({0.5f, 0.5f, 0.5f}, {1.0f, 0.0f, 1.0f}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce_loss({0.9f}, {1.0f}) == doctest::Approx(-std::log(0.9)).epsilon(1e-6));
    // Perfect confident prediction bottoms out at the clamp floor.
    CHECK(bce_loss({1.0f, 0.0f}, {1.0f, 0.0f}) == doctest::Approx(1e-7).epsilon(1e-3));
    CHECK_THROWS_AS(bce_loss({0.5f}, {1.0f, 0.0f}), std::invalid_argument);
}

TEST_CASE("mse_loss") {
    CHECK(mse_loss({0.25f, -0.5f}, {0.25f, -0.5f}) == 0.0);
    CHECK(mse_loss({0.0f, 0.0f}, {1.0f, 1.0f}) == doctest::Approx(1.0));
    CHECK(mse_loss({0.5f, -0.5f}, {1.0f, 0.0f}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(mse_loss({0.5f}, {1.0f, 0.0f}), std::invalid_argument);
}
