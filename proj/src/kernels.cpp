#include "seldkit/kernels.hpp"

#include <algorithm>
#include <cstdlib>

namespace seldkit::kernels {

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void relu_scalar(float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0f);
}

namespace {

using DotFn = float (*)(const float*, const float*, std::size_t);
using AxpyFn = void (*)(float, const float*, float*, std::size_t);
using ReluFn = void (*)(float*, std::size_t);

struct Dispatch {
    DotFn dot = dot_scalar;
    AxpyFn axpy = axpy_scalar;
    ReluFn relu = relu_scalar;
    const char* backend = "scalar";

    Dispatch() {
        const char* force = std::getenv("SELDKIT_FORCE_SCALAR");
        if (force != nullptr && force[0] == '1') return;
#if defined(__x86_64__) && defined(SELDKIT_HAVE_AVX2_TU)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            dot = dot_avx2;
            axpy = axpy_avx2;
            relu = relu_avx2;
            backend = "avx2";
        }
#elif defined(__aarch64__)
        dot = dot_neon;
        axpy = axpy_neon;
        relu = relu_neon;
        backend = "neon";
#endif
    }
};

const Dispatch& dispatch() {
    static const Dispatch d;
    return d;
}

}  // namespace

float dot(const float* a, const float* b, std::size_t n) {
    return dispatch().dot(a, b, n);
}

void axpy(float alpha, const float* x, float* y, std::size_t n) {
    dispatch().axpy(alpha, x, y, n);
}

void relu_inplace(float* x, std::size_t n) {
    dispatch().relu(x, n);
}

const char* active_backend() { return dispatch().backend; }

#if defined(__aarch64__)
#include <arm_neon.h>

float dot_neon(const float* a, const float* b, std::size_t n) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = vfmaq_f32(acc, vld1q_f32(a + i), vld1q_f32(b + i));
    float out = vaddvq_f32(acc);
    for (; i < n; ++i) out += a[i] * b[i];
    return out;
}

void axpy_neon(float alpha, const float* x, float* y, std::size_t n) {
    float32x4_t va = vdupq_n_f32(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void relu_neon(float* x, std::size_t n) {
    float32x4_t zero = vdupq_n_f32(0.0f);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) vst1q_f32(x + i, vmaxq_f32(vld1q_f32(x + i), zero));
    for (; i < n; ++i) x[i] = std::max(x[i], 0.0f);
}
#endif

}  // namespace seldkit::kernels
