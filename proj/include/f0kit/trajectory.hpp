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
#include <span>
#include <vector>

#include "f0kit/pitch.hpp"

namespace f0kit {

// Sanity bounds for any log-F0 value this library produces: [ln 20, ln 2000].
extern const double kLogF0Min;
extern const double kLogF0Max;

// Gap-free natural-log F0 trajectory. Every frame carries a finite value in
// [kLogF0Min, kLogF0Max]; voiced_mask keeps the source voicing for
// provenance.
struct LogF0Track {
  double hop_s = 0.0;
  std::vector<double> values_log;
  std::vector<std::uint8_t> voiced_mask;

  std::size_t size() const { return values_log.size(); }
};

// First differences of a log trajectory, length N-1.
struct DeltaTrack {
  double hop_s = 0.0;
  std::vector<double> values;
};

// Linear-Hz moments pooled over voiced frames.
struct SpeakerStats {
  double mean_hz = 0.0;
  double variance_hz2 = 0.0;
  std::uint64_t n_frames = 0;
};

// Validates the LogF0Track invariants (finite, inside sanity bounds, mask
// length matches). Throws OutOfSanityBounds.
void validate(const LogF0Track& track);

// Fills unvoiced gaps: interior runs by linear interpolation in log domain
// between the flanking voiced frames, leading/trailing runs by constant
// extension of the nearest voiced value. Throws AllUnvoiced if no frame is
// voiced.
LogF0Track interpolate(const F0Track& track);

// values[i] = values_log[i+1] - values_log[i]. Throws TooShort for length<2.
DeltaTrack delta(const LogF0Track& track);

// Mean and population variance of linear-Hz values over voiced frames,
// pooled across all tracks. Throws AllUnvoiced if nothing is voiced.
SpeakerStats speaker_stats(std::span<const F0Track> tracks);

// Shifts every frame by ln(target.mean_hz / source.mean_hz): multiplicative
// mean matching in linear Hz. Variance shape is left untouched.
LogF0Track rescale_to_target(const LogF0Track& track, const SpeakerStats& source,
                             const SpeakerStats& target);

// Synthetic injection trajectories. All frames are marked voiced; values
// escaping the sanity bounds throw OutOfSanityBounds. n_frames must be >= 2.
LogF0Track gen_flat(std::size_t n_frames, double hop_s, double level_log);
LogF0Track gen_sine(std::size_t n_frames, double hop_s, double center_log,
                    double amplitude_log, std::size_t period_frames);
LogF0Track gen_linear(std::size_t n_frames, double hop_s, double start_log,
                      double end_log);

}  // namespace f0kit
