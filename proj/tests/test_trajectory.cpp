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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "f0kit/errors.hpp"
#include "f0kit/trajectory.hpp"
#include "testutil.hpp"

using f0kit::DeltaTrack;
using f0kit::F0Track;
using f0kit::LogF0Track;
using f0kit::SpeakerStats;

namespace {

F0Track make_track(std::initializer_list<double> hz) {
  F0Track t;
  t.hop_s = 0.005;
  for (double v : hz) {
    t.values_hz.push_back(v > 0.0 ? v : 0.0);
    t.voiced.push_back(v > 0.0 ? 1 : 0);
  }
  return t;
}

}  // namespace

TEST_CASE("trajectory: gap between equal endpoints fills with the endpoint") {
  const LogF0Track out =
      f0kit::interpolate(make_track({100.0, 0.0, 0.0, 0.0, 100.0}));
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out.values_log[i] == doctest::Approx(std::log(100.0)).epsilon(1e-14));
  }
  CHECK(out.voiced_mask[0] == 1);
  CHECK(out.voiced_mask[1] == 0);
}

TEST_CASE("trajectory: midpoint of a 100->400 Hz gap is ln 200 exactly") {
  const LogF0Track out = f0kit::interpolate(make_track({100.0, 0.0, 400.0}));
  CHECK(std::abs(out.values_log[1] - std::log(200.0)) < 1e-12);
}

TEST_CASE("trajectory: edge runs extend the nearest voiced value") {
  const LogF0Track out =
      f0kit::interpolate(make_track({0.0, 0.0, 150.0, 0.0, 0.0}));
  CHECK(out.values_log[0] == std::log(150.0));
  CHECK(out.values_log[1] == std::log(150.0));
  CHECK(out.values_log[3] == std::log(150.0));
  CHECK(out.values_log[4] == std::log(150.0));
}

TEST_CASE("trajectory: fully unvoiced input is rejected") {
  CHECK_THROWS_AS(f0kit::interpolate(make_track({0.0, 0.0, 0.0})),
                  f0kit::AllUnvoiced);
}

TEST_CASE("trajectory: idempotent on fully voiced tracks") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> hz(80.0, 400.0);
  F0Track t;
  t.hop_s = 0.005;
  for (int i = 0; i < 64; ++i) {
    t.values_hz.push_back(hz(rng));
    t.voiced.push_back(1);
  }
  const LogF0Track out = f0kit::interpolate(t);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out.values_log[i] == std::log(t.values_hz[i]));  // bit-exact
  }
}

TEST_CASE("trajectory: interpolation never overshoots flanking values") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const F0Track t = f0kit::test::random_f0_track(rng, 50, 0.005, 0.4);
    const LogF0Track out = f0kit::interpolate(t);
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.voiced[i]) {
        lo = std::min(lo, std::log(t.values_hz[i]));
        hi = std::max(hi, std::log(t.values_hz[i]));
      }
    }
    for (double v : out.values_log) {
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("trajectory: delta definitions") {
  LogF0Track t;
  t.hop_s = 0.005;
  t.values_log = {std::log(100.0), std::log(200.0), std::log(100.0)};
  t.voiced_mask = {1, 1, 1};
  const DeltaTrack d = f0kit::delta(t);
  REQUIRE(d.values.size() == 2);
  CHECK(d.values[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-14));

  t.values_log = {5.0};
  t.voiced_mask = {1};
  CHECK_THROWS_AS(f0kit::delta(t), f0kit::TooShort);
}

TEST_CASE("trajectory: speaker statistics pool voiced frames only") {
  std::vector<F0Track> tracks;
  tracks.push_back(make_track({100.0, 0.0, 200.0}));
  const SpeakerStats stats =
      f0kit::speaker_stats(std::span<const F0Track>(tracks));
  CHECK(stats.mean_hz == doctest::Approx(150.0).epsilon(1e-12));
  CHECK(stats.variance_hz2 == doctest::Approx(2500.0).epsilon(1e-12));
  CHECK(stats.n_frames == 2);

  tracks.push_back(make_track({0.0, 0.0}));
  const SpeakerStats same =
      f0kit::speaker_stats(std::span<const F0Track>(tracks));
  CHECK(same.mean_hz == stats.mean_hz);
  CHECK(same.n_frames == 2);

  std::vector<F0Track> unvoiced;
  unvoiced.push_back(make_track({0.0, 0.0}));
  CHECK_THROWS_AS(f0kit::speaker_stats(std::span<const F0Track>(unvoiced)),
                  f0kit::AllUnvoiced);
}

TEST_CASE("trajectory: rescale shifts by the log mean ratio") {
  SpeakerStats src{120.0, 100.0, 10};
  SpeakerStats tgt{180.0, 100.0, 10};
  LogF0Track t;
  t.hop_s = 0.005;
  t.values_log = {std::log(120.0), std::log(120.0)};
  t.voiced_mask = {1, 1};
  const LogF0Track out = f0kit::rescale_to_target(t, src, tgt);
  CHECK(out.values_log[0] ==
        doctest::Approx(std::log(180.0)).epsilon(1e-14));

  const LogF0Track same = f0kit::rescale_to_target(t, src, src);
  CHECK(same.values_log[0] == t.values_log[0]);  // exact identity
}

TEST_CASE("trajectory: rescale round-trip and delta invariance") {
  std::mt19937_64 rng(23);
  SpeakerStats a{110.0, 50.0, 10};
  SpeakerStats b{260.0, 80.0, 10};
  for (int trial = 0; trial < 100; ++trial) {
    const LogF0Track t = f0kit::test::random_log_track(rng, 40);
    const LogF0Track shifted = f0kit::rescale_to_target(t, a, b);
    const LogF0Track back = f0kit::rescale_to_target(shifted, b, a);
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(std::abs(back.values_log[i] - t.values_log[i]) < 1e-12);
    }
    const DeltaTrack d0 = f0kit::delta(t);
    const DeltaTrack d1 = f0kit::delta(shifted);
    for (std::size_t i = 0; i < d0.values.size(); ++i) {
      CHECK(std::abs(d1.values[i] - d0.values[i]) < 1e-14);
    }
  }
}

TEST_CASE("trajectory: generators") {
  const LogF0Track flat = f0kit::gen_flat(5, 0.005, std::log(150.0));
  REQUIRE(flat.size() == 5);
  for (double v : flat.values_log) {
    CHECK(v == std::log(150.0));
  }
  for (auto m : flat.voiced_mask) {
    CHECK(m == 1);
  }

  const LogF0Track ramp =
      f0kit::gen_linear(3, 0.005, std::log(100.0), std::log(400.0));
  CHECK(ramp.values_log[0] == std::log(100.0));
  CHECK(ramp.values_log[1] ==
        doctest::Approx(std::log(200.0)).epsilon(1e-14));
  CHECK(ramp.values_log[2] == std::log(400.0));

  const LogF0Track sine0 = f0kit::gen_sine(8, 0.005, std::log(200.0), 0.0, 4);
  for (double v : sine0.values_log) {
    CHECK(v == doctest::Approx(std::log(200.0)).epsilon(1e-14));
  }
  const LogF0Track sine = f0kit::gen_sine(8, 0.005, std::log(200.0), 0.4, 4);
  CHECK(sine.values_log[1] ==
        doctest::Approx(std::log(200.0) + 0.4).epsilon(1e-12));

  CHECK_THROWS_AS(f0kit::gen_flat(1, 0.005, std::log(150.0)),
                  f0kit::OutOfSanityBounds);
  CHECK_THROWS_AS(f0kit::gen_flat(5, 0.005, std::log(5000.0)),
                  f0kit::OutOfSanityBounds);
  CHECK_THROWS_AS(
      f0kit::gen_sine(8, 0.005, std::log(1900.0), 0.5, 4),
      f0kit::OutOfSanityBounds);
}
