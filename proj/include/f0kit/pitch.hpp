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

#include <cstdint>
#include <vector>

#include "f0kit/audio.hpp"

namespace f0kit {

// Per-frame fundamental frequency in linear Hz. values_hz[i] is meaningful
// only where voiced[i] is nonzero; unvoiced frames store 0.
struct F0Track {
  double hop_s = 0.0;
  std::vector<double> values_hz;
  std::vector<std::uint8_t> voiced;

  std::size_t size() const { return values_hz.size(); }
};

struct PitchConfig {
  double fmin_hz = 50.0;
  double fmax_hz = 600.0;
  double hop_s = 0.005;
  double window_s = 0.025;  // auto-widened to 2/fmin_hz when shorter
  double voicing_threshold = 0.1;
};

// Estimates per-frame F0 with a cumulative-mean-normalized difference
// function and an absolute voicing threshold. A frame is voiced iff some lag
// in [sr/fmax, sr/fmin] dips below the threshold; the first such dip wins and
// is refined to its local minimum with parabolic interpolation. Estimates are
// clamped to [fmin_hz, fmax_hz]. Deterministic; output length depends only on
// clip length and hop/window.
F0Track extract_f0(const AudioClip& clip, const PitchConfig& cfg);

}  // namespace f0kit
