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

#include "f0kit/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "f0kit/errors.hpp"

namespace f0kit {

namespace {

constexpr double kCountEps = 1e-9;

uint32_t read_u32(const std::vector<unsigned char>& b, std::size_t off) {
  return static_cast<uint32_t>(b[off]) | (static_cast<uint32_t>(b[off + 1]) << 8) |
         (static_cast<uint32_t>(b[off + 2]) << 16) |
         (static_cast<uint32_t>(b[off + 3]) << 24);
}

uint16_t read_u16(const std::vector<unsigned char>& b, std::size_t off) {
  return static_cast<uint16_t>(b[off] | (b[off + 1] << 8));
}

bool tag_is(const std::vector<unsigned char>& b, std::size_t off, const char* tag) {
  return std::memcmp(b.data() + off, tag, 4) == 0;
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    throw MalformedWav("not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  std::size_t data_off = 0, data_len = 0;
  bool have_data = false;

  // Walk the chunk list; chunk payloads are padded to even length.
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const uint32_t chunk_len = read_u32(bytes, off + 4);
    const std::size_t body = off + 8;
    if (body + chunk_len > bytes.size())
      throw MalformedWav("truncated chunk in " + path.string());
    if (tag_is(bytes, off, "fmt ")) {
      if (chunk_len < 16) throw MalformedWav("fmt chunk too small");
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      sample_rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      have_fmt = true;
    } else if (tag_is(bytes, off, "data")) {
      data_off = body;
      data_len = chunk_len;
      have_data = true;
    }
    off = body + chunk_len + (chunk_len & 1);
  }

  if (!have_fmt) throw MalformedWav("missing fmt chunk: " + path.string());
  if (!have_data) throw MalformedWav("missing data chunk: " + path.string());
  if (format != 1)
    throw UnsupportedFormat("audio format tag " + std::to_string(format) +
                            " is not PCM");
  if (channels != 1)
    throw UnsupportedFormat(std::to_string(channels) +
                            " channels, mono required");
  if (bits != 16)
    throw UnsupportedFormat(std::to_string(bits) + "-bit samples, 16 required");
  if (sample_rate == 0) throw MalformedWav("zero sample rate");
  if (data_len % 2 != 0) throw MalformedWav("odd PCM16 data length");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  const std::size_t n = data_len / 2;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto raw = static_cast<int16_t>(read_u16(bytes, data_off + 2 * i));
    clip.samples[i] = static_cast<float>(raw) / 32768.0f;
  }
  return clip;
}

void save_wav(const std::filesystem::path& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create wav file: " + path.string());

  const uint32_t data_len = static_cast<uint32_t>(clip.samples.size() * 2);
  const uint32_t riff_len = 36 + data_len;
  auto put_u32 = [&](uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                 static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out.write(b, 4);
  };
  auto put_u16 = [&](uint16_t v) {
    char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
    out.write(b, 2);
  };

  out.write("RIFF", 4);
  put_u32(riff_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(1);  // PCM
  put_u16(1);  // mono
  put_u32(static_cast<uint32_t>(clip.sample_rate));
  put_u32(static_cast<uint32_t>(clip.sample_rate) * 2);
  put_u16(2);
  put_u16(16);
  out.write("data", 4);
  put_u32(data_len);
  for (const float s : clip.samples) {
    const long v = std::lround(static_cast<double>(s) * 32768.0);
    const auto clamped = static_cast<int16_t>(std::clamp(v, -32768L, 32767L));
    put_u16(static_cast<uint16_t>(clamped));
  }
  if (!out) throw IoError("short write: " + path.string());
}

std::size_t FrameLayout::start(std::size_t k) const {
  auto s = static_cast<std::size_t>(
      std::llround(static_cast<double>(k) * hop_s * sample_rate));
  // Rounding of start vs. window length can overshoot the clip tail by one
  // sample on the last frame; pull it back in.
  if (s + window_samples > total_samples) s = total_samples - window_samples;
  return s;
}

FrameLayout frame_layout(const AudioClip& clip, double hop_s, double window_s) {
  if (!(hop_s > 0.0) || window_s < hop_s)
    throw InvalidFraming("need hop_s > 0 and window_s >= hop_s, got hop " +
                         std::to_string(hop_s) + " window " +
                         std::to_string(window_s));
  FrameLayout layout;
  layout.hop_s = hop_s;
  layout.sample_rate = clip.sample_rate;
  layout.total_samples = clip.samples.size();
  layout.window_samples = static_cast<std::size_t>(
      std::llround(window_s * clip.sample_rate));
  const double span = clip.duration_s() - window_s;
  if (span < 0.0 || layout.window_samples > clip.samples.size() ||
      layout.window_samples == 0) {
    layout.count = 0;
    return layout;
  }
  layout.count = static_cast<std::size_t>(std::floor(span / hop_s + kCountEps)) + 1;
  return layout;
}

std::vector<std::span<const float>> frames(const AudioClip& clip, double hop_s,
                                           double window_s) {
  const FrameLayout layout = frame_layout(clip, hop_s, window_s);
  std::vector<std::span<const float>> out;
  out.reserve(layout.count);
  for (std::size_t k = 0; k < layout.count; ++k) {
    out.emplace_back(clip.samples.data() + layout.start(k),
                     layout.window_samples);
  }
  return out;
}

}  // namespace f0kit
