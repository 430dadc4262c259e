#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "seldkit/kernels.hpp"

using namespace seldkit::kernels;

namespace {

std::vector<float> random_vec(std::mt19937_64& rng, std::size_t n, float lo, float hi) {
    std::uniform_real_distribution<float> dist(lo, hi);
    std::vector<float> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

// Lengths covering empty input, sub-vector-width tails and larger blocks.
const std::size_t kLengths[] = {0, 1, 2, 3, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 1023, 4096};

}  // namespace

TEST_CASE("active backend is a known name") {
    const std::string name = active_backend();
    CHECK((name == "scalar" || name == "avx2" || name == "neon"));
}

TEST_CASE("dot scalar reference sanity") {
    const float a[] = {1, 2, 3};
    const float b[] = {4, -5, 6};
    CHECK(dot_scalar(a, b, 3) == doctest::Approx(12.0));
    CHECK(dot_scalar(a, b, 0) == 0.0f);
}

TEST_CASE("dispatched dot matches scalar at all lengths") {
    std::mt19937_64 rng(81);
    for (std::size_t n : kLengths) {
        const auto a = random_vec(rng, n, -2.0f, 2.0f);
        const auto b = random_vec(rng, n, -2.0f, 2.0f);
        const float ref = dot_scalar(a.data(), b.data(), n);
        const float got = dot(a.data(), b.data(), n);
        // FMA / reassociation changes rounding; bound the relative error.
        const float tol = 1e-5f * (1.0f + std::abs(ref)) * (1.0f + std::sqrt(float(n)));
        CHECK(std::abs(got - ref) <= tol);
    }
}

#if defined(__x86_64__)
TEST_CASE("avx2 dot matches scalar at all lengths") {
    if (std::string(active_backend()) != "avx2") return;  // CPU lacks AVX2
    std::mt19937_64 rng(82);
    for (std::size_t n : kLengths) {
        const auto a = random_vec(rng, n, -3.0f, 3.0f);
        const auto b = random_vec(rng, n, -3.0f, 3.0f);
        const float ref = dot_scalar(a.data(), b.data(), n);
        const float got = dot_avx2(a.data(), b.data(), n);
        const float tol = 1e-5f * (1.0f + std::abs(ref)) * (1.0f + std::sqrt(float(n)));
        CHECK(std::abs(got - ref) <= tol);
    }
}

TEST_CASE("avx2 axpy and relu are exact matches for scalar") {
    if (std::string(active_backend()) != "avx2") return;
    std::mt19937_64 rng(83);
    for (std::size_t n : kLengths) {
        const auto x = random_vec(rng, n, -4.0f, 4.0f);
        auto y0 = random_vec(rng, n, -4.0f, 4.0f);
        auto y1 = y0;
        axpy_scalar(1.5f, x.data(), y0.data(), n);
        axpy_avx2(1.5f, x.data(), y1.data(), n);
        // FMA fuses multiply and add into one rounding; allow one ulp-ish slack.
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y0[i] - y1[i]) <= 1e-5f);

        auto r0 = random_vec(rng, n, -1.0f, 1.0f);
        auto r1 = r0;
        relu_scalar(r0.data(), n);
        relu_avx2(r1.data(), n);
        CHECK(r0 == r1);
    }
}
#endif

TEST_CASE("axpy accumulates in place") {
    std::vector<float> y = {1, 1, 1};
    const float x[] = {1, 2, 3};
    axpy(2.0f, x, y.data(), 3);
    CHECK(y == std::vector<float>{3, 5, 7});
    axpy(0.0f, x, y.data(), 3);
    CHECK(y == std::vector<float>{3, 5, 7});
}

TEST_CASE("relu clamps negatives and preserves zeros and positives") {
    std::vector<float> x = {-1.0f, 0.0f, 2.5f, -0.0f, 1e-30f, -1e30f};
    relu_inplace(x.data(), x.size());
    CHECK(x[0] == 0.0f);
    CHECK(x[1] == 0.0f);
    CHECK(x[2] == 2.5f);
    CHECK(x[3] == 0.0f);
    CHECK(x[4] == 1e-30f);
    CHECK(x[5] == 0.0f);

    std::mt19937_64 rng(84);
    for (std::size_t n : kLengths) {
        auto a = random_vec(rng, n, -5.0f, 5.0f);
        auto b = a;
        relu_scalar(a.data(), n);
        relu_inplace(b.data(), n);
        CHECK(a == b);
    }
}

TEST_CASE("kernels tolerate unaligned pointers") {
    std::mt19937_64 rng(85);
    std::vector<float> buf = random_vec(rng, 70, -1.0f, 1.0f);
    for (std::size_t off = 0; off < 4; ++off) {
        const float* a = buf.data() + off;
        const float* b = buf.data() + off + 33;
        const float ref = dot_scalar(a, b, 29);
        CHECK(std::abs(dot(a, b, 29) - ref) <= 1e-4f);
    }
}
