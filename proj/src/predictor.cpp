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

#include "f0kit/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "f0kit/errors.hpp"
#include "f0kit/kernels.hpp"
#include "io_util.hpp"

namespace f0kit {

using nlohmann::json;

namespace {

// Untrained models emit a mid-range pitch instead of the clamp floor; this
// also keeps early training inside the sanity band.
const double kOutputBiasInit = std::log(150.0);

// Offsets of the parameter groups inside the flat theta vector.
struct Layout {
  std::size_t D, C, K;
  std::size_t w0, b0, w1, b1, w2, b2, w3, b3, total;
};

Layout layout_of(std::size_t D, std::size_t C, std::size_t K) {
  Layout l{};
  l.D = D;
  l.C = C;
  l.K = K;
  l.w0 = 0;
  l.b0 = l.w0 + C * D;
  l.w1 = l.b0 + C;
  l.b1 = l.w1 + C * K * C;
  l.w2 = l.b1 + C;
  l.b2 = l.w2 + C * K * C;
  l.w3 = l.b2 + C;
  l.b3 = l.w3 + C;
  l.total = l.b3 + 1;
  return l;
}

// Activation buffers for one utterance. The conv inputs keep (K-1)/2 zero
// rows on each side so every K*C patch is one contiguous window.
struct Workspace {
  std::size_t T = 0;
  std::vector<double> h0;   // (T + K - 1) rows of C, zero-padded
  std::vector<double> h1;   // same layout, post-tanh
  std::vector<double> h2;   // T rows of C, post-tanh
  std::vector<double> y;    // T
  std::vector<double> dh0;  // padded grad buffers, reused by backward
  std::vector<double> dh1;
  std::vector<double> dh2;  // T rows of C

  void reset(std::size_t frames, const Layout& l, bool for_backward) {
    T = frames;
    const std::size_t padded = (T + l.K - 1) * l.C;
    h0.assign(padded, 0.0);
    h1.assign(padded, 0.0);
    h2.assign(T * l.C, 0.0);
    y.assign(T, 0.0);
    if (for_backward) {
      dh0.assign(padded, 0.0);
      dh1.assign(padded, 0.0);
      dh2.assign(T * l.C, 0.0);
    }
  }
};

void forward(const PredictorModel& model, const Layout& l,
             const FrameFeatures& features, Workspace& ws,
             bool for_backward) {
  const std::size_t T = features.n_frames;
  const std::size_t C = l.C;
  const std::size_t D = l.D;
  const std::size_t patch_len = l.K * C;
  const std::size_t pad = (l.K - 1) / 2;
  ws.reset(T, l, for_backward);

  const double* theta = model.theta.data();
  const double* w0 = theta + l.w0;
  const double* b0 = theta + l.b0;
  const double* w1 = theta + l.w1;
  const double* b1 = theta + l.b1;
  const double* w2 = theta + l.w2;
  const double* b2 = theta + l.b2;
  const double* w3 = theta + l.w3;
  const double b3 = theta[l.b3];

  for (std::size_t t = 0; t < T; ++t) {
    const double* x = features.frame(t);
    double* row = ws.h0.data() + (t + pad) * C;
    for (std::size_t c = 0; c < C; ++c) {
      row[c] = kernels::dot(w0 + c * D, x, D) + b0[c];
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    const double* patch = ws.h0.data() + t * C;
    double* row = ws.h1.data() + (t + pad) * C;
    for (std::size_t c = 0; c < C; ++c) {
      row[c] = std::tanh(kernels::dot(w1 + c * patch_len, patch, patch_len) +
                         b1[c]);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    const double* patch = ws.h1.data() + t * C;
    double* row = ws.h2.data() + t * C;
    for (std::size_t c = 0; c < C; ++c) {
      row[c] = std::tanh(kernels::dot(w2 + c * patch_len, patch, patch_len) +
                         b2[c]);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    ws.y[t] = kernels::dot(w3, ws.h2.data() + t * C, C) + b3;
  }
}

inline double sign_of(double r) {
  if (r > 0.0) return 1.0;
  if (r < 0.0) return -1.0;
  return 0.0;
}

// Accumulates d(batch_loss)/d(theta) into grad, where this pair contributes
// scale * sum_t |y_t - o_t| to the batch loss (scale = 1 / (B * T)).
void backward(const PredictorModel& model, const Layout& l,
              const FrameFeatures& features, const double* oracle,
              Workspace& ws, double scale, double* grad) {
  const std::size_t T = ws.T;
  const std::size_t C = l.C;
  const std::size_t D = l.D;
  const std::size_t patch_len = l.K * C;
  const std::size_t pad = (l.K - 1) / 2;

  const double* theta = model.theta.data();
  const double* w1 = theta + l.w1;
  const double* w2 = theta + l.w2;
  const double* w3 = theta + l.w3;
  double* gw0 = grad + l.w0;
  double* gb0 = grad + l.b0;
  double* gw1 = grad + l.w1;
  double* gb1 = grad + l.b1;
  double* gw2 = grad + l.w2;
  double* gb2 = grad + l.b2;
  double* gw3 = grad + l.w3;
  double* gb3 = grad + l.b3;

  // Head, writing dL/dh2 for the conv stack below.
  for (std::size_t t = 0; t < T; ++t) {
    const double g = sign_of(ws.y[t] - oracle[t]) * scale;
    const double* h2_row = ws.h2.data() + t * C;
    double* dh2_row = ws.dh2.data() + t * C;
    if (g != 0.0) {
      kernels::axpy(g, h2_row, gw3, C);
      *gb3 += g;
    }
    for (std::size_t c = 0; c < C; ++c) {
      dh2_row[c] = g * w3[c];
    }
  }

  // Second conv layer: through tanh, then into weights and dL/dh1.
  for (std::size_t t = 0; t < T; ++t) {
    const double* h2_row = ws.h2.data() + t * C;
    const double* dh2_row = ws.dh2.data() + t * C;
    const double* patch = ws.h1.data() + t * C;
    double* dpatch = ws.dh1.data() + t * C;
    for (std::size_t c = 0; c < C; ++c) {
      const double dz = dh2_row[c] * (1.0 - h2_row[c] * h2_row[c]);
      if (dz == 0.0) {
        continue;
      }
      kernels::axpy(dz, patch, gw2 + c * patch_len, patch_len);
      gb2[c] += dz;
      kernels::axpy(dz, w2 + c * patch_len, dpatch, patch_len);
    }
  }

  // First conv layer; dL/dh1 sits in the padded buffer, pad rows discarded.
  for (std::size_t t = 0; t < T; ++t) {
    const double* h1_row = ws.h1.data() + (t + pad) * C;
    const double* dh1_row = ws.dh1.data() + (t + pad) * C;
    const double* patch = ws.h0.data() + t * C;
    double* dpatch = ws.dh0.data() + t * C;
    for (std::size_t c = 0; c < C; ++c) {
      const double dz = dh1_row[c] * (1.0 - h1_row[c] * h1_row[c]);
      if (dz == 0.0) {
        continue;
      }
      kernels::axpy(dz, patch, gw1 + c * patch_len, patch_len);
      gb1[c] += dz;
      kernels::axpy(dz, w1 + c * patch_len, dpatch, patch_len);
    }
  }

  // Linear input projection.
  for (std::size_t t = 0; t < T; ++t) {
    const double* dh0_row = ws.dh0.data() + (t + pad) * C;
    const double* x = features.frame(t);
    for (std::size_t c = 0; c < C; ++c) {
      const double dz = dh0_row[c];
      if (dz == 0.0) {
        continue;
      }
      kernels::axpy(dz, x, gw0 + c * D, D);
      gb0[c] += dz;
    }
  }
}

double pair_l1(const Workspace& ws, const double* oracle) {
  double total = 0.0;
  for (std::size_t t = 0; t < ws.T; ++t) {
    total += std::abs(ws.y[t] - oracle[t]);
  }
  return total / static_cast<double>(ws.T);
}

struct Adam {
  std::vector<double> m, v;
  std::uint64_t t = 0;
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(std::vector<double>& theta, const std::vector<double>& grad,
            double lr) {
    ++t;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * grad[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEps);
    }
  }
};

}  // namespace

std::size_t PredictorModel::param_count() const {
  return layout_of(input_dim, channels, kernel).total;
}

FrameFeatures featurize(const Utterance& utterance, double hop_s,
                        const std::vector<std::string>& phoneme_inventory,
                        std::size_t speaker_index, std::size_t n_speakers) {
  if (!(hop_s > 0.0)) {
    throw ConfigOutOfRange("hop must be positive, got " +
                           std::to_string(hop_s));
  }
  if (speaker_index >= n_speakers) {
    throw UnknownSpeaker("speaker index " + std::to_string(speaker_index) +
                         " out of range for " + std::to_string(n_speakers) +
                         " speakers");
  }
  if (utterance.phones.empty()) {
    throw EmptyInput("utterance \"" + utterance.id + "\" has no phones");
  }

  // A wisp of slack absorbs the binary rounding of 6-decimal alignments.
  constexpr double kEps = 1e-9;
  const auto& phones = utterance.phones;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    if (phones[i].start_s < 0.0 || !(phones[i].end_s > phones[i].start_s)) {
      throw InvalidAlignment("utterance \"" + utterance.id + "\": phone " +
                             std::to_string(i) + " has an invalid interval");
    }
    if (i > 0 && phones[i].start_s < phones[i - 1].end_s - kEps) {
      throw OverlappingIntervals("utterance \"" + utterance.id +
                                 "\": phones " + std::to_string(i - 1) +
                                 " and " + std::to_string(i) + " overlap");
    }
  }

  const std::size_t P = phoneme_inventory.size();
  const double duration = phones.back().end_s;
  const std::size_t n_frames =
      static_cast<std::size_t>(std::ceil(duration / hop_s - kEps));
  if (n_frames == 0) {
    throw EmptyInput("utterance \"" + utterance.id +
                     "\" is shorter than one frame");
  }

  // Covering phone per frame; boundaries are half-open [start, end).
  std::vector<std::size_t> covering(n_frames);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n_frames; ++i) {
    const double t = static_cast<double>(i) * hop_s;
    while (cursor < phones.size() && t >= phones[cursor].end_s - kEps) {
      ++cursor;
    }
    if (cursor == phones.size()) {
      // Rounding can push the final frame past the last interval; tolerate
      // up to one frame of tail and assign it to the last phone.
      if (t < duration + hop_s - kEps) {
        covering[i] = phones.size() - 1;
        continue;
      }
      throw CoverageGap("utterance \"" + utterance.id + "\": frame " +
                        std::to_string(i) + " at " + std::to_string(t) +
                        " s lies past the alignment");
    }
    if (t < phones[cursor].start_s - kEps) {
      throw CoverageGap("utterance \"" + utterance.id + "\": frame " +
                        std::to_string(i) + " at " + std::to_string(t) +
                        " s falls in a gap before phone " +
                        std::to_string(cursor));
    }
    covering[i] = cursor;
  }

  FrameFeatures features;
  features.n_frames = n_frames;
  features.dim = P + 1 + n_speakers;
  features.values.assign(n_frames * features.dim, 0.0);

  std::size_t run_begin = 0;
  while (run_begin < n_frames) {
    std::size_t run_end = run_begin + 1;
    while (run_end < n_frames && covering[run_end] == covering[run_begin]) {
      ++run_end;
    }
    const std::size_t run_len = run_end - run_begin;
    const std::string& symbol = phones[covering[run_begin]].symbol;
    const auto it = std::find(phoneme_inventory.begin(),
                              phoneme_inventory.end(), symbol);
    if (it == phoneme_inventory.end()) {
      throw UnknownPhoneme("utterance \"" + utterance.id + "\": phone \"" +
                           symbol + "\" is not in the inventory");
    }
    const std::size_t p = static_cast<std::size_t>(
        it - phoneme_inventory.begin());
    for (std::size_t i = run_begin; i < run_end; ++i) {
      double* row = features.frame(i);
      row[p] = 1.0;
      row[P] = run_len > 1 ? static_cast<double>(i - run_begin) /
                                 static_cast<double>(run_len - 1)
                           : 0.0;
      row[P + 1 + speaker_index] = 1.0;
    }
    run_begin = run_end;
  }
  return features;
}

double l1_loss(const LogF0Track& pred, const LogF0Track& oracle) {
  if (pred.size() != oracle.size()) {
    throw LengthMismatch("prediction has " + std::to_string(pred.size()) +
                         " frames, oracle has " +
                         std::to_string(oracle.size()));
  }
  if (pred.size() == 0) {
    throw EmptyInput("cannot evaluate a loss over zero frames");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    total += std::abs(pred.values_log[i] - oracle.values_log[i]);
  }
  return total / static_cast<double>(pred.size());
}

namespace {

void validate_pairs(const std::vector<TrainingPair>& pairs) {
  if (pairs.empty()) {
    throw EmptyCorpus("no training pairs");
  }
  const std::size_t dim = pairs.front().features.dim;
  const double hop = pairs.front().oracle.hop_s;
  for (const TrainingPair& pair : pairs) {
    if (pair.features.dim != dim) {
      throw DimensionMismatch("pair \"" + pair.id + "\" has feature dim " +
                              std::to_string(pair.features.dim) +
                              ", expected " + std::to_string(dim));
    }
    if (pair.features.n_frames != pair.oracle.size()) {
      throw DimensionMismatch(
          "pair \"" + pair.id + "\" has " +
          std::to_string(pair.features.n_frames) + " feature frames but " +
          std::to_string(pair.oracle.size()) + " oracle frames");
    }
    if (pair.features.n_frames == 0) {
      throw EmptyInput("pair \"" + pair.id + "\" is empty");
    }
    if (pair.oracle.hop_s != hop) {
      throw HopMismatch("pair \"" + pair.id + "\" uses hop " +
                        std::to_string(pair.oracle.hop_s) +
                        ", expected " + std::to_string(hop));
    }
  }
}

// Mini-batch scheduler: full-batch when the pool fits in one batch,
// otherwise reshuffled epoch order, dropping ragged epoch tails.
struct BatchPlan {
  std::vector<std::size_t> pool;
  std::vector<std::size_t> order;
  std::size_t cursor = 0;

  void start(std::vector<std::size_t> p, std::size_t batch,
             std::mt19937_64& rng) {
    pool = std::move(p);
    order = pool;
    cursor = 0;
    if (pool.size() > batch) {
      std::shuffle(order.begin(), order.end(), rng);
    }
  }

  // Appends this step's pair indices to `batch_out`.
  void next(std::size_t batch, std::mt19937_64& rng,
            std::vector<std::size_t>& batch_out) {
    batch_out.clear();
    if (pool.size() <= batch) {
      batch_out = pool;
      return;
    }
    if (cursor + batch > order.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    batch_out.assign(order.begin() + cursor, order.begin() + cursor + batch);
    cursor += batch;
  }
};

}  // namespace

TrainResult train(const std::vector<TrainingPair>& pairs,
                  const TrainConfig& cfg) {
  if (cfg.joint_steps == 0 || cfg.finetune_steps == 0 || cfg.batch_size == 0) {
    throw ConfigOutOfRange("joint_steps, finetune_steps and batch_size must "
                           "all be positive");
  }
  if (!(cfg.learning_rate > 0.0)) {
    throw ConfigOutOfRange("learning_rate must be positive, got " +
                           std::to_string(cfg.learning_rate));
  }
  validate_pairs(pairs);

  std::vector<std::size_t> all_idx(pairs.size());
  std::vector<std::size_t> target_idx;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    all_idx[i] = i;
    if (pairs[i].is_target) {
      target_idx.push_back(i);
    }
  }
  if (target_idx.empty()) {
    throw EmptyCorpus("no target-speaker pairs to fine-tune on");
  }

  PredictorModel model;
  model.input_dim = pairs.front().features.dim;
  model.hop_s = pairs.front().oracle.hop_s;
  model.seed = cfg.seed;
  const Layout l = layout_of(model.input_dim, model.channels, model.kernel);
  model.theta.assign(l.total, 0.0);

  // Separate deterministic streams for initialization and shuffling.
  std::mt19937_64 init_rng(cfg.seed);
  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  auto init_group = [&](std::size_t offset, std::size_t count,
                        std::size_t fan_in) {
    const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t i = 0; i < count; ++i) {
      model.theta[offset + i] = dist(init_rng);
    }
  };
  init_group(l.w0, l.C * l.D, l.D);
  init_group(l.w1, l.C * l.K * l.C, l.K * l.C);
  init_group(l.w2, l.C * l.K * l.C, l.K * l.C);
  init_group(l.w3, l.C, l.C);
  model.theta[l.b3] = kOutputBiasInit;

  Adam adam(l.total);
  Workspace ws;
  std::vector<double> grad(l.total, 0.0);
  std::vector<std::size_t> batch;
  TrainResult result;
  result.loss_curve.reserve(cfg.joint_steps + cfg.finetune_steps);

  auto run_phase = [&](const std::vector<std::size_t>& phase_pool,
                       std::size_t steps, const char* phase_name) {
    BatchPlan plan;
    plan.start(phase_pool, cfg.batch_size, shuffle_rng);
    for (std::size_t step = 0; step < steps; ++step) {
      plan.next(cfg.batch_size, shuffle_rng, batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      double loss = 0.0;
      const double inv_batch = 1.0 / static_cast<double>(batch.size());
      for (std::size_t idx : batch) {
        const TrainingPair& pair = pairs[idx];
        forward(model, l, pair.features, ws, /*for_backward=*/true);
        loss += pair_l1(ws, pair.oracle.values_log.data()) * inv_batch;
        backward(model, l, pair.features, pair.oracle.values_log.data(), ws,
                 inv_batch / static_cast<double>(ws.T), grad.data());
      }
      if (!std::isfinite(loss)) {
        throw NonFiniteLoss(std::string(phase_name) + " step " +
                            std::to_string(step) +
                            ": batch loss is not finite");
      }
      result.loss_curve.push_back(loss);
      adam.step(model.theta, grad, cfg.learning_rate);
    }
  };

  run_phase(all_idx, cfg.joint_steps, "joint");
  run_phase(target_idx, cfg.finetune_steps, "finetune");

  result.model = std::move(model);
  return result;
}

LogF0Track predict(const PredictorModel& model,
                   const FrameFeatures& features) {
  if (features.dim != model.input_dim) {
    throw DimensionMismatch("features have dim " +
                            std::to_string(features.dim) +
                            ", model expects " +
                            std::to_string(model.input_dim));
  }
  if (features.n_frames == 0) {
    throw EmptyInput("cannot predict over zero frames");
  }
  const Layout l = layout_of(model.input_dim, model.channels, model.kernel);
  Workspace ws;
  forward(model, l, features, ws, /*for_backward=*/false);

  LogF0Track track;
  track.hop_s = model.hop_s;
  track.values_log.resize(ws.T);
  track.voiced_mask.assign(ws.T, 1);
  for (std::size_t t = 0; t < ws.T; ++t) {
    track.values_log[t] = std::clamp(ws.y[t], kLogF0Min, kLogF0Max);
  }
  return track;
}

double grad_check(const PredictorModel& model, const TrainingPair& pair,
                  double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw ConfigOutOfRange("grad_check epsilon must lie in [1e-7, 1e-3]");
  }
  if (pair.features.dim != model.input_dim) {
    throw DimensionMismatch("features have dim " +
                            std::to_string(pair.features.dim) +
                            ", model expects " +
                            std::to_string(model.input_dim));
  }
  if (pair.features.n_frames != pair.oracle.size() ||
      pair.features.n_frames == 0) {
    throw DimensionMismatch("feature and oracle frame counts disagree");
  }

  const Layout l = layout_of(model.input_dim, model.channels, model.kernel);
  const double* oracle = pair.oracle.values_log.data();
  const std::size_t T = pair.features.n_frames;

  Workspace ws;
  std::vector<double> analytic(l.total, 0.0);
  forward(model, l, pair.features, ws, /*for_backward=*/true);
  backward(model, l, pair.features, oracle, ws,
           1.0 / static_cast<double>(T), analytic.data());

  // Deterministic parameter sample, every group represented.
  std::vector<std::size_t> indices(l.total);
  for (std::size_t i = 0; i < l.total; ++i) {
    indices[i] = i;
  }
  std::vector<std::size_t> sampled;
  if (l.total <= 128) {
    sampled = indices;
  } else {
    std::mt19937_64 sample_rng(0x5eedu);
    std::sample(indices.begin(), indices.end(), std::back_inserter(sampled),
                128, sample_rng);
  }

  PredictorModel probe = model;
  auto loss_and_signs = [&](std::vector<int>& signs) {
    forward(probe, l, pair.features, ws, /*for_backward=*/false);
    signs.resize(T);
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double r = ws.y[t] - oracle[t];
      signs[t] = r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
      total += std::abs(r);
    }
    return total / static_cast<double>(T);
  };

  double max_rel = 0.0;
  std::vector<int> signs_hi, signs_lo;
  for (std::size_t idx : sampled) {
    const double saved = probe.theta[idx];
    probe.theta[idx] = saved + epsilon;
    const double loss_hi = loss_and_signs(signs_hi);
    probe.theta[idx] = saved - epsilon;
    const double loss_lo = loss_and_signs(signs_lo);
    probe.theta[idx] = saved;
    if (signs_hi != signs_lo) {
      continue;  // perturbation crossed an L1 kink; finite diff is invalid
    }
    const double numeric = (loss_hi - loss_lo) / (2.0 * epsilon);
    const double a = analytic[idx];
    const double rel = std::abs(a - numeric) /
                       std::max({std::abs(a), std::abs(numeric), 1e-10});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

void save_model(const std::string& path, const PredictorModel& model) {
  const Layout l = layout_of(model.input_dim, model.channels, model.kernel);
  if (model.theta.size() != l.total) {
    throw DimensionMismatch("model has " + std::to_string(model.theta.size()) +
                            " parameters, layout expects " +
                            std::to_string(l.total));
  }
  auto slice = [&](std::size_t offset, std::size_t count) {
    return std::vector<double>(model.theta.begin() + offset,
                               model.theta.begin() + offset + count);
  };
  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "f0-predictor";
  doc["input_dim"] = model.input_dim;
  doc["channels"] = model.channels;
  doc["kernel"] = model.kernel;
  doc["phonemes"] = model.phonemes;
  doc["speakers"] = model.speakers;
  doc["hop_s"] = model.hop_s;
  doc["seed"] = model.seed;
  doc["weights"] = {
      {"w0", slice(l.w0, l.C * l.D)},
      {"b0", slice(l.b0, l.C)},
      {"w1", slice(l.w1, l.C * l.K * l.C)},
      {"b1", slice(l.b1, l.C)},
      {"w2", slice(l.w2, l.C * l.K * l.C)},
      {"b2", slice(l.b2, l.C)},
      {"w3", slice(l.w3, l.C)},
      {"b3", model.theta[l.b3]},
  };
  ioutil::write_file(path, doc.dump() + "\n");
}

PredictorModel load_model(const std::string& path) {
  json doc;
  try {
    doc = json::parse(ioutil::read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw ParseError(path + ": missing integer schema_version");
  }
  if (doc["schema_version"].get<int>() != 1) {
    throw SchemaVersionMismatch(
        path + ": schema_version " +
        std::to_string(doc["schema_version"].get<int>()) + ", expected 1");
  }

  PredictorModel model;
  try {
    model.input_dim = doc.at("input_dim").get<std::size_t>();
    model.channels = doc.at("channels").get<std::size_t>();
    model.kernel = doc.at("kernel").get<std::size_t>();
    model.phonemes = doc.at("phonemes").get<std::vector<std::string>>();
    model.speakers = doc.at("speakers").get<std::vector<std::string>>();
    model.hop_s = doc.at("hop_s").get<double>();
    model.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (model.input_dim == 0 || model.channels == 0 || model.kernel % 2 == 0) {
    throw ParseError(path + ": invalid model dimensions");
  }

  const Layout l = layout_of(model.input_dim, model.channels, model.kernel);
  model.theta.assign(l.total, 0.0);
  auto read_group = [&](const char* key, std::size_t offset,
                        std::size_t count) {
    const json& weights = doc.at("weights");
    if (!weights.contains(key) || !weights[key].is_array() ||
        weights[key].size() != count) {
      throw ParseError(path + ": weight group \"" + key + "\" must hold " +
                       std::to_string(count) + " values");
    }
    for (std::size_t i = 0; i < count; ++i) {
      model.theta[offset + i] = weights[key][i].get<double>();
    }
  };
  if (!doc.contains("weights") || !doc["weights"].is_object()) {
    throw ParseError(path + ": missing weights object");
  }
  read_group("w0", l.w0, l.C * l.D);
  read_group("b0", l.b0, l.C);
  read_group("w1", l.w1, l.C * l.K * l.C);
  read_group("b1", l.b1, l.C);
  read_group("w2", l.w2, l.C * l.K * l.C);
  read_group("b2", l.b2, l.C);
  read_group("w3", l.w3, l.C);
  if (!doc["weights"].contains("b3") || !doc["weights"]["b3"].is_number()) {
    throw ParseError(path + ": weight group \"b3\" must be a number");
  }
  model.theta[l.b3] = doc["weights"]["b3"].get<double>();

  for (double w : model.theta) {
    if (!std::isfinite(w)) {
      throw ParseError(path + ": model contains non-finite weights");
    }
  }
  return model;
}

}  // namespace f0kit
