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

#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "f0kit/errors.hpp"
#include "f0kit/predictor.hpp"
#include "testutil.hpp"

using f0kit::FrameFeatures;
using f0kit::LogF0Track;
using f0kit::PredictorModel;
using f0kit::TrainConfig;
using f0kit::TrainingPair;
using f0kit::Utterance;
using f0kit::test::TempDir;

namespace {

Utterance toy_utterance() {
  Utterance utt;
  utt.id = "toy";
  utt.speaker_id = "alice";
  utt.phones = {{"a", 0.0, 0.025}, {"b", 0.025, 0.05}};
  return utt;
}

LogF0Track constant_oracle(std::size_t n, double log_hz) {
  LogF0Track t;
  t.hop_s = 0.005;
  t.values_log.assign(n, log_hz);
  t.voiced_mask.assign(n, 1);
  return t;
}

PredictorModel small_model(std::size_t input_dim, std::size_t channels,
                           std::size_t kernel) {
  PredictorModel model;
  model.input_dim = input_dim;
  model.channels = channels;
  model.kernel = kernel;
  model.theta.assign(model.param_count(), 0.0);
  return model;
}

FrameFeatures random_features(std::mt19937_64& rng, std::size_t n_frames,
                              std::size_t dim) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  FrameFeatures f;
  f.n_frames = n_frames;
  f.dim = dim;
  f.values.resize(n_frames * dim);
  for (double& v : f.values) {
    v = value(rng);
  }
  return f;
}

void randomize_theta(PredictorModel& model, std::uint64_t seed, double span) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-span, span);
  for (double& w : model.theta) {
    w = value(rng);
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void replace_once(std::string& text, const std::string& from,
                  const std::string& to) {
  const std::size_t at = text.find(from);
  REQUIRE(at != std::string::npos);
  text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("predictor: featurize layout and position scalar") {
  const Utterance utt = toy_utterance();
  const std::vector<std::string> inventory = {"a", "b"};
  const FrameFeatures f = f0kit::featurize(utt, 0.005, inventory, 1, 2);

  // 0.05 s at 5 ms hop: frames at 0..0.045 s, ten in total.
  REQUIRE(f.n_frames == 10);
  REQUIRE(f.dim == 2 + 1 + 2);

  for (std::size_t i = 0; i < f.n_frames; ++i) {
    const double* row = f.frame(i);
    const bool in_a = i < 5;  // frame 5 sits exactly on the boundary -> "b"
    CHECK(row[0] == (in_a ? 1.0 : 0.0));
    CHECK(row[1] == (in_a ? 0.0 : 1.0));
    const double pos = static_cast<double>(i % 5) / 4.0;
    CHECK(row[2] == doctest::Approx(pos).epsilon(1e-12));
    CHECK(row[3] == 0.0);  // speaker one-hot, index 1 of 2
    CHECK(row[4] == 1.0);
  }
}

TEST_CASE("predictor: featurize single-run positions span [0, 1]") {
  Utterance utt;
  utt.id = "mono";
  utt.phones = {{"a", 0.0, 0.05}};
  const FrameFeatures f = f0kit::featurize(utt, 0.005, {"a"}, 0, 1);
  REQUIRE(f.n_frames == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(f.frame(i)[1] ==
          doctest::Approx(static_cast<double>(i) / 9.0).epsilon(1e-12));
  }
  // A single-frame run has no extent; its position is pinned to 0.
  Utterance tiny;
  tiny.id = "tiny";
  tiny.phones = {{"a", 0.0, 0.004}};
  const FrameFeatures g = f0kit::featurize(tiny, 0.005, {"a"}, 0, 1);
  REQUIRE(g.n_frames == 1);
  CHECK(g.frame(0)[1] == 0.0);
}

TEST_CASE("predictor: featurize validation") {
  const std::vector<std::string> inventory = {"a", "b"};
  Utterance utt = toy_utterance();

  CHECK_THROWS_AS(f0kit::featurize(utt, 0.0, inventory, 0, 1),
                  f0kit::ConfigOutOfRange);
  CHECK_THROWS_AS(f0kit::featurize(utt, 0.005, inventory, 2, 2),
                  f0kit::UnknownSpeaker);

  utt.phones = {{"zz", 0.0, 0.05}};
  CHECK_THROWS_AS(f0kit::featurize(utt, 0.005, inventory, 0, 1),
                  f0kit::UnknownPhoneme);

  utt.phones = {{"a", 0.0, 0.03}, {"b", 0.02, 0.05}};
  CHECK_THROWS_AS(f0kit::featurize(utt, 0.005, inventory, 0, 1),
                  f0kit::OverlappingIntervals);

  // Two missing frames between the phones form an interior coverage gap.
  utt.phones = {{"a", 0.0, 0.02}, {"b", 0.04, 0.06}};
  CHECK_THROWS_AS(f0kit::featurize(utt, 0.005, inventory, 0, 1),
                  f0kit::CoverageGap);

  utt.phones = {};
  CHECK_THROWS_AS(f0kit::featurize(utt, 0.005, inventory, 0, 1),
                  f0kit::EmptyInput);
}

TEST_CASE("predictor: l1 loss") {
  const LogF0Track a = constant_oracle(4, std::log(100.0));
  CHECK(f0kit::l1_loss(a, a) == 0.0);

  LogF0Track b = a;
  for (double& v : b.values_log) {
    v += 0.1;
  }
  CHECK(f0kit::l1_loss(b, a) == doctest::Approx(0.1).epsilon(1e-12));

  LogF0Track pred = constant_oracle(2, std::log(100.0));
  LogF0Track oracle = pred;
  oracle.values_log[1] = std::log(200.0);
  CHECK(f0kit::l1_loss(pred, oracle) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(f0kit::l1_loss(a, constant_oracle(3, 5.0)),
                  f0kit::LengthMismatch);
  CHECK_THROWS_AS(f0kit::l1_loss(constant_oracle(0, 5.0),
                                 constant_oracle(0, 5.0)),
                  f0kit::EmptyInput);
}

TEST_CASE("predictor: zero model predicts its output bias") {
  PredictorModel model = small_model(3, 4, 3);
  CHECK(model.param_count() == 125);
  model.theta.back() = 5.0;  // output bias, within the sanity bounds

  std::mt19937_64 rng(51);
  const FrameFeatures f = random_features(rng, 6, 3);
  const LogF0Track out = f0kit::predict(model, f);
  REQUIRE(out.size() == 6);
  CHECK(out.hop_s == model.hop_s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out.values_log[i] == 5.0);
    CHECK(out.voiced_mask[i] == 1);
  }

  // Output stays inside the sanity bounds even for a wild bias.
  model.theta.back() = 42.0;
  const LogF0Track clamped = f0kit::predict(model, f);
  CHECK(clamped.values_log[0] == doctest::Approx(std::log(2000.0)));

  CHECK_THROWS_AS(f0kit::predict(model, random_features(rng, 4, 2)),
                  f0kit::DimensionMismatch);
  CHECK_THROWS_AS(f0kit::predict(model, random_features(rng, 0, 3)),
                  f0kit::EmptyInput);
}

TEST_CASE("predictor: gradient check in the smooth regime") {
  PredictorModel model = small_model(3, 4, 3);
  randomize_theta(model, 52, 0.5);
  model.theta.back() = 5.0;

  std::mt19937_64 rng(53);
  TrainingPair pair;
  pair.id = "pair";
  pair.features = random_features(rng, 10, 3);
  // Oracle far from the prediction keeps every residual on one side of the
  // L1 kink, so no sampled parameter is excluded.
  pair.oracle = f0kit::predict(model, pair.features);
  for (double& v : pair.oracle.values_log) {
    v += 0.4;
  }

  const double err = f0kit::grad_check(model, pair, 1e-5);
  CHECK(err < 1e-4);

  // Deterministic: same inputs, same sampled subset, same answer.
  CHECK(f0kit::grad_check(model, pair, 1e-5) == err);

  CHECK_THROWS_AS(f0kit::grad_check(model, pair, 1e-2),
                  f0kit::ConfigOutOfRange);
  CHECK_THROWS_AS(f0kit::grad_check(model, pair, 0.0),
                  f0kit::ConfigOutOfRange);
}

TEST_CASE("predictor: gradient vanishes at an exact fit") {
  PredictorModel model = small_model(3, 4, 3);
  randomize_theta(model, 54, 0.3);
  model.theta.back() = 5.0;

  std::mt19937_64 rng(55);
  TrainingPair pair;
  pair.id = "fit";
  pair.features = random_features(rng, 8, 3);
  pair.oracle = f0kit::predict(model, pair.features);

  // Every residual is exactly zero: the subgradient convention makes the
  // analytic gradient zero, and every finite difference crosses the kink,
  // so the check reports no disagreement at all.
  CHECK(f0kit::grad_check(model, pair, 1e-5) == 0.0);
}

TEST_CASE("predictor: single-pair overfit") {
  const Utterance utt = toy_utterance();
  const std::vector<std::string> inventory = {"a", "b"};

  TrainingPair pair;
  pair.id = "toy";
  pair.features = f0kit::featurize(utt, 0.005, inventory, 0, 1);
  pair.oracle = constant_oracle(pair.features.n_frames, 0.0);
  for (std::size_t i = 0; i < pair.oracle.size(); ++i) {
    pair.oracle.values_log[i] =
        std::log(160.0) +
        0.1 * std::sin(2.0 * M_PI * static_cast<double>(i) / 10.0);
  }
  pair.is_target = true;

  TrainConfig cfg;
  cfg.joint_steps = 250;
  cfg.finetune_steps = 250;
  cfg.learning_rate = 1e-2;
  cfg.seed = 7;

  const f0kit::TrainResult result = f0kit::train({pair}, cfg);
  CHECK(result.loss_curve.size() == 500);
  CHECK(result.model.input_dim == pair.features.dim);

  const LogF0Track pred = f0kit::predict(result.model, pair.features);
  CHECK(f0kit::l1_loss(pred, pair.oracle) < 0.05);
  CHECK(result.loss_curve.back() < result.loss_curve.front());
}

TEST_CASE("predictor: constant oracle is recovered") {
  std::mt19937_64 rng(56);
  const double level = std::log(180.0);

  std::vector<TrainingPair> pairs(2);
  pairs[0].id = "target";
  pairs[0].features = random_features(rng, 12, 4);
  pairs[0].oracle = constant_oracle(12, level);
  pairs[0].is_target = true;
  pairs[1].id = "support";
  pairs[1].features = random_features(rng, 12, 4);
  pairs[1].oracle = constant_oracle(12, level);

  TrainConfig cfg;
  cfg.joint_steps = 300;
  cfg.finetune_steps = 100;
  cfg.learning_rate = 1e-2;
  cfg.seed = 8;

  const f0kit::TrainResult result = f0kit::train(pairs, cfg);
  for (const TrainingPair& pair : pairs) {
    const LogF0Track pred = f0kit::predict(result.model, pair.features);
    for (double v : pred.values_log) {
      CHECK(std::abs(v - level) < 0.02);
    }
  }
}

TEST_CASE("predictor: training is deterministic in the seed") {
  std::mt19937_64 rng(57);
  std::vector<TrainingPair> pairs(3);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].id = "p" + std::to_string(i);
    pairs[i].features = random_features(rng, 9, 4);
    pairs[i].oracle = constant_oracle(9, 5.0 + 0.05 * static_cast<double>(i));
  }
  pairs[0].is_target = true;

  TrainConfig cfg;
  cfg.joint_steps = 60;
  cfg.finetune_steps = 60;
  cfg.batch_size = 2;  // forces the shuffled mini-batch path
  cfg.seed = 9;

  const f0kit::TrainResult a = f0kit::train(pairs, cfg);
  const f0kit::TrainResult b = f0kit::train(pairs, cfg);
  CHECK(a.model.theta == b.model.theta);
  CHECK(a.loss_curve == b.loss_curve);

  cfg.seed = 10;
  const f0kit::TrainResult c = f0kit::train(pairs, cfg);
  CHECK(a.model.theta != c.model.theta);
}

TEST_CASE("predictor: training validation") {
  TrainConfig cfg;
  cfg.joint_steps = 5;
  cfg.finetune_steps = 5;

  CHECK_THROWS_AS(f0kit::train({}, cfg), f0kit::EmptyCorpus);

  std::mt19937_64 rng(58);
  std::vector<TrainingPair> pairs(2);
  pairs[0].id = "a";
  pairs[0].features = random_features(rng, 6, 4);
  pairs[0].oracle = constant_oracle(6, 5.0);
  pairs[0].is_target = true;
  pairs[1].id = "b";
  pairs[1].features = random_features(rng, 6, 4);
  pairs[1].oracle = constant_oracle(6, 5.0);

  SUBCASE("no target pairs") {
    pairs[0].is_target = false;
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::EmptyCorpus);
  }
  SUBCASE("feature dims disagree") {
    pairs[1].features = random_features(rng, 6, 5);
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::DimensionMismatch);
  }
  SUBCASE("feature and oracle lengths disagree") {
    pairs[1].oracle = constant_oracle(7, 5.0);
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::DimensionMismatch);
  }
  SUBCASE("oracle hops disagree") {
    pairs[1].oracle.hop_s = 0.010;
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::HopMismatch);
  }
  SUBCASE("empty pair") {
    pairs[1].features = random_features(rng, 0, 4);
    pairs[1].oracle = constant_oracle(0, 5.0);
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::EmptyInput);
  }
  SUBCASE("bad config") {
    cfg.batch_size = 0;
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::ConfigOutOfRange);
    cfg.batch_size = 8;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::ConfigOutOfRange);
    cfg.learning_rate = 1e-3;
    cfg.joint_steps = 0;
    CHECK_THROWS_AS(f0kit::train(pairs, cfg), f0kit::ConfigOutOfRange);
  }
}

TEST_CASE("predictor: model persistence round trip") {
  TempDir dir;
  PredictorModel model = small_model(4, 4, 3);
  randomize_theta(model, 59, 0.4);
  model.theta.back() = 5.0;
  model.phonemes = {"a", "b", "sil"};
  model.speakers = {"alice"};
  model.seed = 77;
  model.hop_s = 0.005;

  const std::string path = dir.str("model.json");
  f0kit::save_model(path, model);
  const PredictorModel back = f0kit::load_model(path);

  CHECK(back.input_dim == model.input_dim);
  CHECK(back.channels == model.channels);
  CHECK(back.kernel == model.kernel);
  CHECK(back.phonemes == model.phonemes);
  CHECK(back.speakers == model.speakers);
  CHECK(back.hop_s == model.hop_s);
  CHECK(back.seed == model.seed);
  CHECK(back.theta == model.theta);  // bit-identical weights

  std::mt19937_64 rng(60);
  const FrameFeatures f = random_features(rng, 7, 4);
  CHECK(f0kit::predict(back, f).values_log ==
        f0kit::predict(model, f).values_log);

  SUBCASE("future schema version is rejected") {
    std::string text = slurp(path);
    replace_once(text, "\"schema_version\":1", "\"schema_version\":2");
    std::ofstream(path, std::ios::binary) << text;
    CHECK_THROWS_AS(f0kit::load_model(path), f0kit::SchemaVersionMismatch);
  }
  SUBCASE("even kernel width is rejected") {
    std::string text = slurp(path);
    replace_once(text, "\"kernel\":3", "\"kernel\":4");
    std::ofstream(path, std::ios::binary) << text;
    CHECK_THROWS_AS(f0kit::load_model(path), f0kit::ParseError);
  }
  SUBCASE("truncated weight group is rejected") {
    std::string text = slurp(path);
    replace_once(text, "\"input_dim\":4", "\"input_dim\":5");
    std::ofstream(path, std::ios::binary) << text;
    CHECK_THROWS_AS(f0kit::load_model(path), f0kit::ParseError);
  }
}
