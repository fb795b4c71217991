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
#include <cstdint>
#include <string>
#include <vector>

#include "f0kit/corpus.hpp"
#include "f0kit/trajectory.hpp"

namespace f0kit {

// Per-frame input rows: phoneme one-hot (P dims) ++ within-phone position
// scalar in [0,1] ++ speaker one-hot (S dims). Row-major [n_frames][dim].
struct FrameFeatures {
  std::size_t n_frames = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  const double* frame(std::size_t i) const { return values.data() + i * dim; }
  double* frame(std::size_t i) { return values.data() + i * dim; }
};

struct TrainConfig {
  std::size_t joint_steps = 2000;
  std::size_t finetune_steps = 2000;
  std::size_t batch_size = 8;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
};

// Small temporal regressor: linear input projection (D -> C), two 1-D
// convolution layers (kernel 5, C channels, tanh), linear output head.
// All parameters live in one flat vector so the optimizer, the persistence
// layer, and the gradient checker can treat the model uniformly.
struct PredictorModel {
  std::size_t input_dim = 0;  // P + 1 + S, fixed at construction
  std::size_t channels = 64;
  std::size_t kernel = 5;
  std::vector<std::string> phonemes;   // one-hot order for featurize
  std::vector<std::string> speakers;   // one-hot order for featurize
  double hop_s = 0.005;
  std::uint64_t seed = 0;
  std::vector<double> theta;  // w0 | b0 | w1 | b1 | w2 | b2 | w3 | b3

  std::size_t param_count() const;
};

struct TrainingPair {
  std::string id;
  FrameFeatures features;
  LogF0Track oracle;
  bool is_target = false;
};

struct TrainResult {
  PredictorModel model;
  std::vector<double> loss_curve;  // one batch loss per step, both phases
};

// Builds frame features for an utterance: frame i sits at time i * hop_s,
// frames run while i * hop_s < last phone end. A frame on an interval
// boundary belongs to the later interval (half-open [start, end)). The
// position scalar is the frame's index within its phone's frame run,
// normalized to [0, 1] (single-frame runs get 0). Throws UnknownPhoneme,
// OverlappingIntervals, CoverageGap (gaps at the utterance end are
// tolerated up to one frame), UnknownSpeaker.
FrameFeatures featurize(const Utterance& utterance, double hop_s,
                        const std::vector<std::string>& phoneme_inventory,
                        std::size_t speaker_index, std::size_t n_speakers);

// Mean absolute difference of log values. Throws LengthMismatch.
double l1_loss(const LogF0Track& pred, const LogF0Track& oracle);

// Two-phase training: joint_steps of Adam-style mini-batch descent over all
// pairs, then finetune_steps over target-speaker pairs only, optimizer state
// carried across the phase switch. When a phase's pool has at most
// batch_size pairs, every step is full-batch (no sampling); otherwise
// batches walk a reshuffled epoch order. Deterministic given cfg.seed.
// Throws ConfigOutOfRange, EmptyCorpus, DimensionMismatch, HopMismatch,
// NonFiniteLoss.
TrainResult train(const std::vector<TrainingPair>& pairs,
                  const TrainConfig& cfg);

// Pure forward pass; output clamped to the log-F0 sanity bounds, voiced_mask
// all-true. Throws DimensionMismatch.
LogF0Track predict(const PredictorModel& model, const FrameFeatures& features);

// Compares analytic L1 gradients against central finite differences on a
// deterministic sample of at least 128 parameters (all of them for tiny
// models), skipping parameters whose perturbation flips any residual sign
// (an L1 kink). Returns the max relative error over the retained sample.
// Throws ConfigOutOfRange unless epsilon is in [1e-7, 1e-3].
double grad_check(const PredictorModel& model, const TrainingPair& pair,
                  double epsilon);

// JSON persistence (schema_version 1): hyperparameters, vocabularies, seed,
// and named flat weight arrays. load(save(m)) predicts bit-identically.
void save_model(const std::string& path, const PredictorModel& model);
PredictorModel load_model(const std::string& path);

}  // namespace f0kit
