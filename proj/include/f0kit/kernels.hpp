// Copyright 2026 the f0kit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the pitch estimator, the metrics, and
// the trainer. Every kernel has a scalar reference implementation and may
// have SIMD variants; the top-level functions dispatch once at startup based
// on what the CPU supports. Set F0KIT_KERNELS=scalar in the environment to
// force the reference path.
//
// SIMD variants reassociate the accumulation, so results may differ from the
// scalar reference in the last bits. Equivalence tests pin the tolerance.

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__) || defined(_M_IX86)
#define F0KIT_X86 1
#else
#define F0KIT_X86 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define F0KIT_AARCH64 1
#else
#define F0KIT_AARCH64 0
#endif

namespace f0kit::kernels {

// sum of x[0..n)
using SumFn = double (*)(const double*, std::size_t);
// dot product of x and y
using DotFn = double (*)(const double*, const double*, std::size_t);
// sum of (a[i] - b[i])^2
using SumSqDiffFn = double (*)(const double*, const double*, std::size_t);
// y[i] += a * x[i]
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
// YIN difference function: d[tau] = sum_{j<window} (x[j] - x[j+tau])^2 for
// tau in [0, max_lag]; x must hold window + max_lag samples, d max_lag + 1.
using YinDiffFn = void (*)(const float*, std::size_t, std::size_t, float*);

struct Backend {
  const char* isa;
  SumFn sum;
  DotFn dot;
  SumSqDiffFn sumsq_diff;
  AxpyFn axpy;
  YinDiffFn yin_difference;
};

// Backend selected for this process (cached after the first call).
const Backend& active();

// Name of the selected ISA: "avx2", "neon", or "scalar".
const char* active_isa();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double sumsq_diff(const double* a, const double* b, std::size_t n) {
  return active().sumsq_diff(a, b, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void yin_difference(const float* x, std::size_t window,
                           std::size_t max_lag, float* d) {
  active().yin_difference(x, window, max_lag, d);
}

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void yin_difference(const float* x, std::size_t window, std::size_t max_lag,
                    float* d);
}  // namespace scalar

#if F0KIT_X86
// Built with -mavx2 -mfma; call only if cpu_has_avx2() reports true.
namespace avx2 {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void yin_difference(const float* x, std::size_t window, std::size_t max_lag,
                    float* d);
}  // namespace avx2

bool cpu_has_avx2();
#endif

#if F0KIT_AARCH64
namespace neon {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void yin_difference(const float* x, std::size_t window, std::size_t max_lag,
                    float* d);
}  // namespace neon
#endif

}  // namespace f0kit::kernels
