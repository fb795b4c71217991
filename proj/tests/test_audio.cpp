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

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "f0kit/audio.hpp"
#include "f0kit/errors.hpp"
#include "testutil.hpp"

using f0kit::AudioClip;
using f0kit::test::TempDir;

namespace {

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& b) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
}

// Minimal canonical wav container around raw PCM16 payload bytes.
std::vector<std::uint8_t> wav_bytes(std::uint16_t format, std::uint16_t chans,
                                    std::uint32_t rate, std::uint16_t bits,
                                    const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> b;
  auto u16 = [&](std::uint16_t v) {
    b.push_back(v & 0xff);
    b.push_back(v >> 8);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      b.push_back((v >> (8 * i)) & 0xff);
    }
  };
  auto tag = [&](const char* t) {
    b.insert(b.end(), t, t + 4);
  };
  tag("RIFF");
  u32(36 + static_cast<std::uint32_t>(payload.size()));
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(format);
  u16(chans);
  u32(rate);
  u32(rate * chans * bits / 8);
  u16(static_cast<std::uint16_t>(chans * bits / 8));
  u16(bits);
  tag("data");
  u32(static_cast<std::uint32_t>(payload.size()));
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

}  // namespace

TEST_CASE("audio: save/load round-trips PCM16 exactly") {
  TempDir tmp;
  AudioClip clip = f0kit::test::sine_clip(220.0, 0.05, 8000, 0.5);
  const std::string path = tmp.str("clip.wav");
  f0kit::save_wav(path, clip);
  const AudioClip loaded = f0kit::load_wav(path);

  REQUIRE(loaded.sample_rate == 8000);
  REQUIRE(loaded.samples.size() == clip.samples.size());
  // Quantization touches the first save only; a second round trip is exact.
  f0kit::save_wav(path, loaded);
  const AudioClip again = f0kit::load_wav(path);
  REQUIRE(again.samples.size() == loaded.samples.size());
  for (std::size_t i = 0; i < loaded.samples.size(); ++i) {
    CHECK(again.samples[i] == loaded.samples[i]);
  }
}

TEST_CASE("audio: malformed and unsupported wav files are rejected") {
  TempDir tmp;
  const std::string path = tmp.str("bad.wav");

  write_bytes(path, {'R', 'I', 'F', 'X', 0, 0, 0, 0});
  CHECK_THROWS_AS(f0kit::load_wav(path), f0kit::MalformedWav);

  write_bytes(path, wav_bytes(3, 1, 8000, 32, {0, 0, 0, 0}));  // float pcm
  CHECK_THROWS_AS(f0kit::load_wav(path), f0kit::UnsupportedFormat);

  write_bytes(path, wav_bytes(1, 2, 8000, 16, {0, 0, 0, 0}));  // stereo
  CHECK_THROWS_AS(f0kit::load_wav(path), f0kit::UnsupportedFormat);

  write_bytes(path, wav_bytes(1, 1, 8000, 8, {0, 0}));  // 8-bit
  CHECK_THROWS_AS(f0kit::load_wav(path), f0kit::UnsupportedFormat);

  auto truncated = wav_bytes(1, 1, 8000, 16, {1, 2, 3, 4});
  truncated.resize(truncated.size() - 2);  // data chunk shorter than header
  write_bytes(path, truncated);
  CHECK_THROWS_AS(f0kit::load_wav(path), f0kit::MalformedWav);

  CHECK_THROWS_AS(f0kit::load_wav(tmp.str("absent.wav")), f0kit::IoError);
}

TEST_CASE("audio: one second at 5 ms hop and 25 ms window gives 196 frames") {
  const AudioClip clip = f0kit::test::sine_clip(200.0, 1.0, 16000);
  const f0kit::FrameLayout layout = f0kit::frame_layout(clip, 0.005, 0.025);
  CHECK(layout.count == 196);
  CHECK(layout.window_samples == 400);
  CHECK(layout.start(0) == 0);
  // Every window fits inside the clip.
  const std::size_t last = layout.start(layout.count - 1);
  CHECK(last + layout.window_samples <= clip.samples.size());
}

TEST_CASE("audio: framing degenerate cases") {
  const AudioClip clip = f0kit::test::sine_clip(200.0, 0.01, 16000);
  // Clip shorter than the window: zero frames, not an error.
  CHECK(f0kit::frame_layout(clip, 0.005, 0.025).count == 0);
  CHECK_THROWS_AS(f0kit::frame_layout(clip, 0.0, 0.025),
                  f0kit::InvalidFraming);
  CHECK_THROWS_AS(f0kit::frame_layout(clip, 0.005, 0.004),
                  f0kit::InvalidFraming);

  const auto views = f0kit::frames(clip, 0.005, 0.008);
  REQUIRE(!views.empty());
  for (const auto& v : views) {
    CHECK(v.size() == 128);  // 8 ms at 16 kHz
  }
}
