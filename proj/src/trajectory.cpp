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

#include "f0kit/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "f0kit/errors.hpp"

namespace f0kit {

const double kLogF0Min = std::log(20.0);
const double kLogF0Max = std::log(2000.0);

void validate(const LogF0Track& track) {
  if (track.voiced_mask.size() != track.values_log.size())
    throw OutOfSanityBounds("voiced_mask length does not match values");
  for (std::size_t i = 0; i < track.values_log.size(); ++i) {
    const double v = track.values_log[i];
    if (!std::isfinite(v) || v < kLogF0Min || v > kLogF0Max)
      throw OutOfSanityBounds("log-F0 value " + std::to_string(v) + " at frame " +
                              std::to_string(i) + " escapes [ln 20, ln 2000]");
  }
}

LogF0Track interpolate(const F0Track& track) {
  const std::size_t n = track.size();
  std::vector<std::size_t> voiced_idx;
  voiced_idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (track.voiced[i]) voiced_idx.push_back(i);
  if (voiced_idx.empty())
    throw AllUnvoiced("cannot interpolate a track with no voiced frame");

  LogF0Track out;
  out.hop_s = track.hop_s;
  out.voiced_mask = track.voiced;
  out.values_log.resize(n);

  for (const std::size_t i : voiced_idx)
    out.values_log[i] = std::log(track.values_hz[i]);

  // Constant extension over the edges.
  for (std::size_t i = 0; i < voiced_idx.front(); ++i)
    out.values_log[i] = out.values_log[voiced_idx.front()];
  for (std::size_t i = voiced_idx.back() + 1; i < n; ++i)
    out.values_log[i] = out.values_log[voiced_idx.back()];

  // Linear interpolation in log domain across interior gaps.
  for (std::size_t v = 0; v + 1 < voiced_idx.size(); ++v) {
    const std::size_t l = voiced_idx[v];
    const std::size_t r = voiced_idx[v + 1];
    if (r == l + 1) continue;
    const double lv = out.values_log[l];
    const double rv = out.values_log[r];
    const double span = static_cast<double>(r - l);
    for (std::size_t i = l + 1; i < r; ++i) {
      const double t = static_cast<double>(i - l) / span;
      out.values_log[i] = lv + t * (rv - lv);
    }
  }

  validate(out);
  return out;
}

DeltaTrack delta(const LogF0Track& track) {
  if (track.size() < 2)
    throw TooShort("delta needs at least 2 frames, got " +
                   std::to_string(track.size()));
  DeltaTrack out;
  out.hop_s = track.hop_s;
  out.values.resize(track.size() - 1);
  for (std::size_t i = 0; i + 1 < track.size(); ++i)
    out.values[i] = track.values_log[i + 1] - track.values_log[i];
  return out;
}

SpeakerStats speaker_stats(std::span<const F0Track> tracks) {
  double sum = 0.0;
  std::uint64_t n = 0;
  for (const F0Track& t : tracks)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.voiced[i]) {
        sum += t.values_hz[i];
        ++n;
      }
  if (n == 0) throw AllUnvoiced("no voiced frame in any track");

  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (const F0Track& t : tracks)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.voiced[i]) {
        const double d = t.values_hz[i] - mean;
        sq += d * d;
      }
  return {mean, sq / static_cast<double>(n), n};
}

LogF0Track rescale_to_target(const LogF0Track& track, const SpeakerStats& source,
                             const SpeakerStats& target) {
  const double shift = std::log(target.mean_hz / source.mean_hz);
  LogF0Track out = track;
  for (double& v : out.values_log) v += shift;
  validate(out);
  return out;
}

namespace {

LogF0Track make_generated(std::size_t n_frames, double hop_s) {
  if (n_frames < 2)
    throw OutOfSanityBounds("generators need n_frames >= 2, got " +
                            std::to_string(n_frames));
  LogF0Track out;
  out.hop_s = hop_s;
  out.values_log.resize(n_frames);
  out.voiced_mask.assign(n_frames, 1);
  return out;
}

}  // namespace

LogF0Track gen_flat(std::size_t n_frames, double hop_s, double level_log) {
  LogF0Track out = make_generated(n_frames, hop_s);
  for (double& v : out.values_log) v = level_log;
  validate(out);
  return out;
}

LogF0Track gen_sine(std::size_t n_frames, double hop_s, double center_log,
                    double amplitude_log, std::size_t period_frames) {
  if (period_frames == 0)
    throw OutOfSanityBounds("gen_sine needs period_frames >= 1");
  LogF0Track out = make_generated(n_frames, hop_s);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(period_frames);
    out.values_log[i] = center_log + amplitude_log * std::sin(phase);
  }
  validate(out);
  return out;
}

LogF0Track gen_linear(std::size_t n_frames, double hop_s, double start_log,
                      double end_log) {
  LogF0Track out = make_generated(n_frames, hop_s);
  const double step = (end_log - start_log) / static_cast<double>(n_frames - 1);
  for (std::size_t i = 0; i < n_frames; ++i)
    out.values_log[i] = start_log + step * static_cast<double>(i);
  out.values_log.back() = end_log;
  validate(out);
  return out;
}

}  // namespace f0kit
