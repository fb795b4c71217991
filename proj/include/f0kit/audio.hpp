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
#include <filesystem>
#include <span>
#include <vector>

namespace f0kit {

// Mono audio, amplitudes in [-1, 1]. Immutable by convention once loaded.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF/WAVE file. PCM 16-bit little-endian, single channel only;
// samples are scaled by 1/32768. Throws MalformedWav on container damage and
// UnsupportedFormat on any other encoding.
AudioClip load_wav(const std::filesystem::path& path);

// Writes the clip back as PCM16 mono. Round-trips load_wav output exactly.
void save_wav(const std::filesystem::path& path, const AudioClip& clip);

// Analysis framing: frame k starts at sample round(k * hop_s * sample_rate)
// and spans round(window_s * sample_rate) samples. Frame count is
// floor((duration_s - window_s) / hop_s) + 1, zero if the clip is shorter
// than the window.
struct FrameLayout {
  std::size_t count = 0;
  std::size_t window_samples = 0;
  double hop_s = 0.0;
  int sample_rate = 0;
  std::size_t total_samples = 0;

  // First sample of frame k, clamped so the window stays inside the clip.
  std::size_t start(std::size_t k) const;
};

FrameLayout frame_layout(const AudioClip& clip, double hop_s, double window_s);

std::vector<std::span<const float>> frames(const AudioClip& clip, double hop_s,
                                           double window_s);

}  // namespace f0kit
