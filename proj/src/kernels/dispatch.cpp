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

#include "f0kit/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace f0kit::kernels {

#if F0KIT_X86
bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}
#endif

namespace {

Backend select() {
  const char* forced = std::getenv("F0KIT_KERNELS");
  const bool force_scalar = forced && std::strcmp(forced, "scalar") == 0;

  if (!force_scalar) {
#if F0KIT_X86
    if (cpu_has_avx2()) {
      return {"avx2", avx2::sum, avx2::dot, avx2::sumsq_diff, avx2::axpy,
              avx2::yin_difference};
    }
#elif F0KIT_AARCH64
    return {"neon", neon::sum, neon::dot, neon::sumsq_diff, neon::axpy,
            neon::yin_difference};
#endif
  }
  return {"scalar", scalar::sum, scalar::dot, scalar::sumsq_diff, scalar::axpy,
          scalar::yin_difference};
}

}  // namespace

const Backend& active() {
  static const Backend backend = select();
  return backend;
}

const char* active_isa() { return active().isa; }

}  // namespace f0kit::kernels
