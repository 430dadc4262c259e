#pragma once
// Data-parallel float kernels used by the feature and model inner loops.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, a vectorized variant (AVX2 on x86-64, NEON on aarch64).
// Dispatch happens once at startup based on runtime CPU capabilities;
// SELDKIT_FORCE_SCALAR=1 in the environment pins the scalar path.
// Scalar and vector variants are equivalence-tested against each other.

#include <cstddef>

namespace seldkit::kernels {

// Dispatched entry points.
float dot(const float* a, const float* b, std::size_t n);
// y[i] += alpha * x[i]
void axpy(float alpha, const float* x, float* y, std::size_t n);
// x[i] = max(x[i], 0)
void relu_inplace(float* x, std::size_t n);

// Reference implementations (always available; used for equivalence tests).
float dot_scalar(const float* a, const float* b, std::size_t n);
void axpy_scalar(float alpha, const float* x, float* y, std::size_t n);
void relu_scalar(float* x, std::size_t n);

#if defined(__x86_64__)
float dot_avx2(const float* a, const float* b, std::size_t n);
void axpy_avx2(float alpha, const float* x, float* y, std::size_t n);
void relu_avx2(float* x, std::size_t n);
#endif
#if defined(__aarch64__)
float dot_neon(const float* a, const float* b, std::size_t n);
void axpy_neon(float alpha, const float* x, float* y, std::size_t n);
void relu_neon(float* x, std::size_t n);
#endif

// Name of the active dispatch path: "scalar", "avx2" or "neon".
const char* active_backend();

}  // namespace seldkit::kernels
