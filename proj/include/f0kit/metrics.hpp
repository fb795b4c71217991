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
#include <span>
#include <vector>

#include "f0kit/trajectory.hpp"

namespace f0kit {

// Smoothed histogram over uniform bins; probs sum to 1 and every bin carries
// at least the smoothing mass, so log-ratios stay finite.
struct F0Distribution {
  std::vector<double> bin_edges;  // length B+1, strictly increasing
  std::vector<double> probs;      // length B
  double epsilon = 0.0;
};

struct ComparisonReport {
  double rmse_hz = 0.0;
  double rmse_log = 0.0;
  double correlation = 0.0;
  std::size_t n_frames = 0;
};

// RMSE between two equal-length, equal-hop trajectories: rmse_log over the
// log values, rmse_hz after exponentiating both to linear Hz. The
// correlation field is left 0.
ComparisonReport rmse(const LogF0Track& a, const LogF0Track& b);

// Pearson coefficient over log values. If either series has zero variance
// the convention is 0. Needs length >= 2.
double pearson(const LogF0Track& a, const LogF0Track& b);

// rmse + pearson in one report.
ComparisonReport compare(const LogF0Track& a, const LogF0Track& b);

// Histogram over `bins` uniform bins on [lo, hi]; bins are half-open
// [edge_k, edge_{k+1}) and out-of-range values clamp to the edge bins.
// Each count gets +epsilon before normalization.
F0Distribution build_distribution(std::span<const double> values,
                                  std::size_t bins, double lo, double hi,
                                  double epsilon);

// Kullback-Leibler divergence sum_i p_i ln(p_i/q_i) in nats. The two
// distributions must share bin edges exactly.
double kld(const F0Distribution& p, const F0Distribution& q);

}  // namespace f0kit
