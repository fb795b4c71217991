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
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "f0kit/cli.hpp"
#include "f0kit/errors.hpp"
#include "f0kit/kernels.hpp"

namespace {

void add_pitch_flags(CLI::App* cmd, f0kit::PitchConfig& pitch) {
  cmd->add_option("--hop", pitch.hop_s, "Frame hop in seconds")
      ->capture_default_str();
  cmd->add_option("--fmin", pitch.fmin_hz, "Lowest detectable F0 in Hz")
      ->capture_default_str();
  cmd->add_option("--fmax", pitch.fmax_hz, "Highest detectable F0 in Hz")
      ->capture_default_str();
  cmd->add_option("--window", pitch.window_s,
                  "Analysis window in seconds (widened to 2/fmin if shorter)")
      ->capture_default_str();
  cmd->add_option("--threshold", pitch.voicing_threshold,
                  "Voicing decision threshold on the normalized difference")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"f0kit — F0 trajectory extraction, analysis and prediction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "Seed for every stochastic component")
      ->capture_default_str();

  f0kit::cli::ExtractOptions extract;
  CLI::App* c_extract =
      app.add_subcommand("extract", "Extract per-utterance F0 tracks");
  c_extract->add_option("--manifest", extract.manifest, "Corpus manifest")
      ->required();
  c_extract->add_option("--out", extract.out_dir, "Output directory")
      ->required();
  add_pitch_flags(c_extract, extract.pitch);

  f0kit::cli::CompareOptions compare;
  CLI::App* c_compare = app.add_subcommand(
      "compare", "Per-utterance RMSE/correlation between two track dirs");
  c_compare->add_option("dir_a", compare.dir_a, "First track directory")
      ->required();
  c_compare->add_option("dir_b", compare.dir_b, "Second track directory")
      ->required();
  c_compare->add_option("--out", compare.out, "Report CSV path")->required();

  f0kit::cli::DistOptions dist;
  CLI::App* c_dist = app.add_subcommand(
      "dist", "KLD of system F0/delta-F0 distributions against a target");
  c_dist->add_option("target", dist.target_dir, "Target track directory")
      ->required();
  c_dist->add_option("systems", dist.system_dirs, "System track directories")
      ->required();
  c_dist->add_option("--bins", dist.bins, "Histogram bin count")
      ->capture_default_str();
  c_dist->add_option("--epsilon", dist.epsilon, "Smoothing mass per bin")
      ->capture_default_str();
  c_dist->add_option("--out", dist.out, "Report CSV path")->required();

  f0kit::cli::SynthTrajOptions synth;
  CLI::App* c_synth = app.add_subcommand(
      "synth-traj", "Generate a flat/sine/linear log-F0 trajectory");
  c_synth->add_option("--kind", synth.kind, "flat, sine or linear")
      ->required();
  c_synth->add_option("--frames", synth.n_frames, "Number of frames")
      ->capture_default_str();
  c_synth->add_option("--hop", synth.hop_s, "Frame hop in seconds")
      ->capture_default_str();
  c_synth->add_option("--f0", synth.f0_hz, "Flat level / sine center in Hz")
      ->capture_default_str();
  c_synth->add_option("--amp-log", synth.amplitude_log,
                      "Sine amplitude in log-Hz")
      ->capture_default_str();
  c_synth->add_option("--period", synth.period_frames,
                      "Sine period in frames")
      ->capture_default_str();
  c_synth->add_option("--start", synth.start_hz, "Linear start in Hz")
      ->capture_default_str();
  c_synth->add_option("--end", synth.end_hz, "Linear end in Hz")
      ->capture_default_str();
  c_synth->add_option("--out", synth.out, "Output track path")->required();

  f0kit::cli::TrainOptions train;
  CLI::App* c_train =
      app.add_subcommand("train", "Train the frame-level F0 predictor");
  c_train->add_option("--manifest", train.manifest, "Corpus manifest")
      ->required();
  c_train->add_option("--out", train.model_out, "Model output path")
      ->required();
  c_train->add_option("--loss-out", train.loss_out,
                      "Loss curve CSV path (default: <model>_loss.csv)");
  add_pitch_flags(c_train, train.pitch);
  c_train->add_option("--joint-steps", train.train.joint_steps,
                      "Joint-phase steps over all speakers")
      ->capture_default_str();
  c_train->add_option("--finetune-steps", train.train.finetune_steps,
                      "Fine-tune steps over target speakers only")
      ->capture_default_str();
  c_train->add_option("--batch", train.train.batch_size, "Mini-batch size")
      ->capture_default_str();
  c_train->add_option("--lr", train.train.learning_rate, "Learning rate")
      ->capture_default_str();

  f0kit::cli::PredictOptions predict;
  CLI::App* c_predict = app.add_subcommand(
      "predict", "Predict log-F0 tracks for a manifest with a trained model");
  c_predict->add_option("--model", predict.model_path, "Model file")
      ->required();
  c_predict->add_option("--manifest", predict.manifest, "Corpus manifest")
      ->required();
  c_predict->add_option("--out", predict.out_dir, "Output directory")
      ->required();

  f0kit::cli::RescaleOptions rescale;
  CLI::App* c_rescale = app.add_subcommand(
      "rescale", "Shift tracks from a source speaker mean to a target mean");
  c_rescale->add_option("--tracks", rescale.track_dir, "Input track directory")
      ->required();
  c_rescale->add_option("--source-stats", rescale.source_stats,
                        "Stats JSON of the tracks' own speaker")
      ->required();
  c_rescale->add_option("--target-stats", rescale.target_stats,
                        "Stats JSON of the speaker to match")
      ->required();
  c_rescale->add_option("--out", rescale.out_dir, "Output directory")
      ->required();

  f0kit::cli::StatsOptions stats;
  CLI::App* c_stats = app.add_subcommand(
      "stats", "Pooled voiced-frame statistics over a track directory");
  c_stats->add_option("--tracks", stats.track_dir, "Track directory")
      ->required();
  c_stats->add_option("--out", stats.out, "Stats JSON output path")
      ->required();
  c_stats->add_option("--manifest", stats.manifest,
                      "Manifest (needed with --speaker)");
  c_stats->add_option("--speaker", stats.speaker,
                      "Restrict to this speaker's utterances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    nlohmann::json diag{{"error", "UsageError"}, {"message", e.what()}};
    std::cerr << diag.dump() << "\n";
    return e.get_exit_code();
  }

  train.train.seed = seed;
  try {
    if (c_extract->parsed()) {
      f0kit::cli::cmd_extract(extract);
    } else if (c_compare->parsed()) {
      f0kit::cli::cmd_compare(compare);
    } else if (c_dist->parsed()) {
      f0kit::cli::cmd_dist(dist);
    } else if (c_synth->parsed()) {
      f0kit::cli::cmd_synth_traj(synth);
    } else if (c_train->parsed()) {
      f0kit::cli::cmd_train(train);
    } else if (c_predict->parsed()) {
      f0kit::cli::cmd_predict(predict);
    } else if (c_rescale->parsed()) {
      f0kit::cli::cmd_rescale(rescale);
    } else if (c_stats->parsed()) {
      f0kit::cli::cmd_stats(stats);
    }
  } catch (const f0kit::Error& e) {
    nlohmann::json diag{{"error", e.name()}, {"message", e.what()}};
    std::cerr << diag.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json diag{{"error", "InternalError"}, {"message", e.what()}};
    std::cerr << diag.dump() << "\n";
    return 2;
  }
  return 0;
}
