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

// Subcommand implementations behind the f0kit binary. Each takes a filled
// options struct, does the work, and throws an f0kit::Error on failure; the
// binary turns those into JSON diagnostics and a nonzero exit code. Keeping
// them as library functions makes every subcommand drivable from tests.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "f0kit/pitch.hpp"
#include "f0kit/predictor.hpp"

namespace f0kit::cli {

// Track files are named <utterance-id>.f0.json (linear Hz, unvoiced = null)
// or <utterance-id>.logf0.json (interpolated log trajectory).
extern const char* const kRawTrackSuffix;
extern const char* const kLogTrackSuffix;

// extract: one F0 track file per manifest utterance plus summary.json with
// per-speaker voiced-frame counts and pooled mean/variance statistics.
struct ExtractOptions {
  std::string manifest;
  std::string out_dir;
  PitchConfig pitch;
};
void cmd_extract(const ExtractOptions& opt);

// compare: per-utterance RMSE/correlation rows for tracks matched by id
// across two directories, plus corpus-level means. Writes <out> as CSV and
// a JSON twin next to it. Tracks of different lengths are trimmed to the
// common prefix so extractor-shortened and feature-length tracks line up.
struct CompareOptions {
  std::string dir_a;
  std::string dir_b;
  std::string out;
};
void cmd_compare(const CompareOptions& opt);

// dist: KLD of each system against the target distribution, one row per
// system with F0 and delta-F0 columns. Bin edges come from the pooled
// target sample.
struct DistOptions {
  std::string target_dir;
  std::vector<std::string> system_dirs;
  std::size_t bins = 50;
  double epsilon = 1e-8;
  std::string out;
};
void cmd_dist(const DistOptions& opt);

// synth-traj: writes one generated log-F0 track (flat | sine | linear).
// Levels are given in Hz; the sine amplitude is in log-Hz around the center.
struct SynthTrajOptions {
  std::string kind;
  std::size_t n_frames = 200;
  double hop_s = 0.005;
  double f0_hz = 200.0;        // flat level / sine center
  double amplitude_log = 0.3;  // sine only
  std::size_t period_frames = 100;
  double start_hz = 100.0;  // linear only
  double end_hz = 300.0;
  std::string out;
};
void cmd_synth_traj(const SynthTrajOptions& opt);

// train: extract + interpolate oracles, featurize alignments, run the
// two-phase trainer, write the model and a step,loss CSV curve.
struct TrainOptions {
  std::string manifest;
  std::string model_out;
  std::string loss_out;  // empty -> model_out with extension "_loss.csv"
  PitchConfig pitch;
  TrainConfig train;
};
void cmd_train(const TrainOptions& opt);

// predict: one predicted .logf0.json per manifest utterance.
struct PredictOptions {
  std::string model_path;
  std::string manifest;
  std::string out_dir;
};
void cmd_predict(const PredictOptions& opt);

// rescale: shift every track in a directory from the source speaker's mean
// to the target speaker's mean (stats files as written by cmd_stats).
struct RescaleOptions {
  std::string track_dir;
  std::string source_stats;
  std::string target_stats;
  std::string out_dir;
};
void cmd_rescale(const RescaleOptions& opt);

// stats: pooled voiced-frame statistics over a track directory, optionally
// restricted to one speaker's utterances via the manifest. The output JSON
// is what cmd_rescale consumes.
struct StatsOptions {
  std::string track_dir;
  std::string out;
  std::string manifest;  // optional unless speaker is set
  std::string speaker;   // optional filter
};
void cmd_stats(const StatsOptions& opt);

// Shared helpers (exposed for tests).
std::vector<std::pair<std::string, std::string>> discover_tracks(
    const std::string& dir);                       // sorted (id, path)
std::string format_csv_number(double v);           // 6 significant digits
SpeakerStats load_stats_file(const std::string& path);

}  // namespace f0kit::cli
