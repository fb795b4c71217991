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

// Shared fixtures: synthetic audio, random tracks, throwaway directories,
// and a tiny on-disk corpus builder.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "f0kit/audio.hpp"
#include "f0kit/pitch.hpp"
#include "f0kit/trajectory.hpp"

namespace f0kit::test {

inline AudioClip sine_clip(double freq_hz, double duration_s,
                           int sample_rate = 16000, double amplitude = 0.6) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  clip.samples.resize(n);
  const double w = 2.0 * 3.14159265358979323846 * freq_hz /
                   static_cast<double>(sample_rate);
  for (std::size_t i = 0; i < n; ++i) {
    clip.samples[i] = static_cast<float>(
        amplitude * std::sin(w * static_cast<double>(i)));
  }
  return clip;
}

// Fully voiced random log trajectory within [ln 80, ln 400].
inline LogF0Track random_log_track(std::mt19937_64& rng, std::size_t n,
                                   double hop_s = 0.005) {
  std::uniform_real_distribution<double> dist(std::log(80.0), std::log(400.0));
  LogF0Track track;
  track.hop_s = hop_s;
  track.values_log.resize(n);
  track.voiced_mask.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    track.values_log[i] = dist(rng);
  }
  return track;
}

// Random raw track with unvoiced gaps; guarantees at least one voiced frame.
inline F0Track random_f0_track(std::mt19937_64& rng, std::size_t n,
                               double hop_s = 0.005,
                               double voiced_prob = 0.7) {
  std::uniform_real_distribution<double> hz(80.0, 400.0);
  std::bernoulli_distribution voiced(voiced_prob);
  F0Track track;
  track.hop_s = hop_s;
  track.values_hz.assign(n, 0.0);
  track.voiced.assign(n, 0);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (voiced(rng)) {
      track.values_hz[i] = hz(rng);
      track.voiced[i] = 1;
      any = true;
    }
  }
  if (!any) {
    track.values_hz[n / 2] = hz(rng);
    track.voiced[n / 2] = 1;
  }
  return track;
}

// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  TempDir() {
    static std::atomic<std::uint64_t> counter{0};
    const auto unique = counter.fetch_add(1);
    path_ = std::filesystem::temp_directory_path() /
            ("f0kit-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(unique));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& child = "") const {
    return child.empty() ? path_.string() : (path_ / child).string();
  }

 private:
  std::filesystem::path path_;
};

struct ToyUtterance {
  std::string id;
  std::string speaker;
  double freq_hz = 200.0;
  double duration_s = 0.5;
  std::vector<std::string> phones = {"a", "b"};  // split evenly over duration
};

// Writes wavs, alignments, speakers.json and manifest.jsonl into dir;
// returns the manifest path. Speakers listed in `roles` as id -> role name.
inline std::string write_toy_corpus(
    const std::filesystem::path& dir, const std::vector<ToyUtterance>& utts,
    const std::vector<std::pair<std::string, std::string>>& roles) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::string speakers = "{";
  for (std::size_t i = 0; i < roles.size(); ++i) {
    speakers += (i ? "," : "") + std::string("\"") + roles[i].first +
                "\":\"" + roles[i].second + "\"";
  }
  speakers += "}\n";
  std::ofstream(dir / "speakers.json") << speakers;

  std::string manifest;
  for (const ToyUtterance& utt : utts) {
    const std::string wav = utt.id + ".wav";
    const std::string tsv = utt.id + ".tsv";
    save_wav((dir / wav).string(), sine_clip(utt.freq_hz, utt.duration_s));

    std::ofstream align(dir / tsv);
    const double piece =
        utt.duration_s / static_cast<double>(utt.phones.size());
    char buf[160];
    for (std::size_t i = 0; i < utt.phones.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\n",
                    utt.phones[i].c_str(), static_cast<double>(i) * piece,
                    static_cast<double>(i + 1) * piece);
      align << buf;
    }
    align.close();

    manifest += "{\"id\":\"" + utt.id + "\",\"audio\":\"" + wav +
                "\",\"speaker\":\"" + utt.speaker + "\",\"alignment\":\"" +
                tsv + "\"}\n";
  }
  const std::string manifest_path = (dir / "manifest.jsonl").string();
  std::ofstream(manifest_path) << manifest;
  return manifest_path;
}

}  // namespace f0kit::test
