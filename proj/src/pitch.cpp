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

#include "f0kit/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "f0kit/errors.hpp"
#include "f0kit/kernels.hpp"

namespace f0kit {

namespace {

struct FrameResult {
  double hz = 0.0;
  bool voiced = false;
};

// Cumulative-mean normalization of the raw difference function:
// d'(0) = 1, d'(tau) = d(tau) * tau / sum_{j<=tau} d(j).
void normalize_difference(const std::vector<float>& d, std::vector<float>& nd) {
  nd[0] = 1.0f;
  double cum = 0.0;
  for (std::size_t tau = 1; tau < d.size(); ++tau) {
    cum += d[tau];
    nd[tau] = cum > 0.0
                  ? static_cast<float>(d[tau] * static_cast<double>(tau) / cum)
                  : 1.0f;
  }
}

FrameResult analyze_frame(const float* x, std::size_t window, std::size_t tau_min,
                          std::size_t tau_max, double threshold, double sr,
                          double fmin, double fmax, std::vector<float>& d,
                          std::vector<float>& nd) {
  kernels::yin_difference(x, window, tau_max, d.data());
  normalize_difference(d, nd);

  // First lag below the threshold wins; no global-best fallback.
  std::size_t tau = 0;
  for (std::size_t t = tau_min; t <= tau_max; ++t) {
    if (nd[t] < threshold) {
      tau = t;
      break;
    }
  }
  if (tau == 0) return {};

  // Descend to the bottom of the selected dip.
  while (tau + 1 <= tau_max && nd[tau + 1] < nd[tau]) ++tau;

  // Parabolic refinement around the dip minimum.
  double refined = static_cast<double>(tau);
  if (tau > tau_min && tau < tau_max) {
    const double a = nd[tau - 1];
    const double b = nd[tau];
    const double c = nd[tau + 1];
    const double denom = a - 2.0 * b + c;
    if (std::abs(denom) > 1e-12) {
      const double delta = 0.5 * (a - c) / denom;
      refined += std::clamp(delta, -0.5, 0.5);
    }
  }

  FrameResult out;
  out.voiced = true;
  out.hz = std::clamp(sr / refined, fmin, fmax);
  return out;
}

}  // namespace

F0Track extract_f0(const AudioClip& clip, const PitchConfig& cfg) {
  const double sr = clip.sample_rate;
  if (!(cfg.fmin_hz > 0.0) || !(cfg.fmin_hz < cfg.fmax_hz) ||
      !(cfg.fmax_hz < sr / 2.0))
    throw ConfigOutOfRange("need 0 < fmin < fmax < sample_rate/2, got fmin " +
                           std::to_string(cfg.fmin_hz) + " fmax " +
                           std::to_string(cfg.fmax_hz) + " at " +
                           std::to_string(clip.sample_rate) + " Hz");
  if (!(cfg.voicing_threshold > 0.0) || !(cfg.voicing_threshold < 1.0))
    throw ConfigOutOfRange("voicing_threshold must be in (0,1)");
  if (!(cfg.hop_s > 0.0)) throw ConfigOutOfRange("hop_s must be positive");

  // The window must hold two periods at fmin: one period of integration
  // length plus lags out to one period.
  const double window_s = std::max(cfg.window_s, 2.0 / cfg.fmin_hz);
  if (window_s < cfg.hop_s)
    throw ConfigOutOfRange("window shorter than hop after widening");

  const FrameLayout layout = frame_layout(clip, cfg.hop_s, window_s);

  F0Track track;
  track.hop_s = cfg.hop_s;
  track.values_hz.assign(layout.count, 0.0);
  track.voiced.assign(layout.count, 0);
  if (layout.count == 0) return track;

  const auto tau_max = static_cast<std::size_t>(std::floor(sr / cfg.fmin_hz));
  const auto tau_min =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(sr / cfg.fmax_hz)));
  if (tau_max + 1 >= layout.window_samples || tau_min >= tau_max)
    throw ConfigOutOfRange("lag range does not fit the analysis window");
  const std::size_t window = layout.window_samples - tau_max;

  std::vector<float> d(tau_max + 1);
  std::vector<float> nd(tau_max + 1);
  for (std::size_t k = 0; k < layout.count; ++k) {
    const float* x = clip.samples.data() + layout.start(k);
    const FrameResult r =
        analyze_frame(x, window, tau_min, tau_max, cfg.voicing_threshold, sr,
                      cfg.fmin_hz, cfg.fmax_hz, d, nd);
    track.values_hz[k] = r.hz;
    track.voiced[k] = r.voiced ? 1 : 0;
  }
  return track;
}

}  // namespace f0kit
