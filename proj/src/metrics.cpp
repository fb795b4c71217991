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

#include "f0kit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "f0kit/errors.hpp"
#include "f0kit/kernels.hpp"

namespace f0kit {

namespace {

void check_aligned(const LogF0Track& a, const LogF0Track& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("trajectories have " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()) + " frames");
  }
  if (a.hop_s != b.hop_s) {
    throw HopMismatch("trajectory hops differ: " + std::to_string(a.hop_s) +
                      " vs " + std::to_string(b.hop_s));
  }
  if (a.size() == 0) {
    throw EmptyInput("cannot compare empty trajectories");
  }
}

}  // namespace

ComparisonReport rmse(const LogF0Track& a, const LogF0Track& b) {
  check_aligned(a, b);
  const std::size_t n = a.size();

  ComparisonReport report;
  report.n_frames = n;
  report.rmse_log =
      std::sqrt(kernels::sumsq_diff(a.values_log.data(), b.values_log.data(),
                                    n) /
                static_cast<double>(n));

  std::vector<double> hz_a(n);
  std::vector<double> hz_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    hz_a[i] = std::exp(a.values_log[i]);
    hz_b[i] = std::exp(b.values_log[i]);
  }
  report.rmse_hz =
      std::sqrt(kernels::sumsq_diff(hz_a.data(), hz_b.data(), n) /
                static_cast<double>(n));
  return report;
}

double pearson(const LogF0Track& a, const LogF0Track& b) {
  check_aligned(a, b);
  const std::size_t n = a.size();
  if (n < 2) {
    throw TooShort("pearson needs at least 2 frames, got " +
                   std::to_string(n));
  }

  // A constant series has zero variance; detect that by value rather than by
  // the computed sum of squares, which can round away from zero.
  const auto [amin, amax] =
      std::minmax_element(a.values_log.begin(), a.values_log.end());
  const auto [bmin, bmax] =
      std::minmax_element(b.values_log.begin(), b.values_log.end());
  if (*amin == *amax || *bmin == *bmax) {
    return 0.0;
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const double mean_a = kernels::sum(a.values_log.data(), n) * inv_n;
  const double mean_b = kernels::sum(b.values_log.data(), n) * inv_n;

  std::vector<double> da(n);
  std::vector<double> db(n);
  for (std::size_t i = 0; i < n; ++i) {
    da[i] = a.values_log[i] - mean_a;
    db[i] = b.values_log[i] - mean_b;
  }
  const double cov = kernels::dot(da.data(), db.data(), n);
  const double var_a = kernels::dot(da.data(), da.data(), n);
  const double var_b = kernels::dot(db.data(), db.data(), n);
  if (var_a <= 0.0 || var_b <= 0.0) {
    return 0.0;
  }
  const double r = cov / std::sqrt(var_a * var_b);
  return std::clamp(r, -1.0, 1.0);
}

ComparisonReport compare(const LogF0Track& a, const LogF0Track& b) {
  ComparisonReport report = rmse(a, b);
  report.correlation = pearson(a, b);
  return report;
}

F0Distribution build_distribution(std::span<const double> values,
                                  std::size_t bins, double lo, double hi,
                                  double epsilon) {
  if (values.empty()) {
    throw EmptyInput("cannot build a distribution from zero values");
  }
  if (bins < 2) {
    throw BadRange("need at least 2 bins, got " + std::to_string(bins));
  }
  if (!(lo < hi)) {
    throw BadRange("histogram range requires lo < hi, got [" +
                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (!(epsilon > 0.0)) {
    throw BadRange("smoothing epsilon must be positive");
  }

  F0Distribution dist;
  dist.epsilon = epsilon;
  dist.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) {
    dist.bin_edges[k] = lo + static_cast<double>(k) * width;
  }
  dist.bin_edges[bins] = hi;

  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    // upper_bound on the interior edges gives the half-open bin
    // [edge_k, edge_{k+1}); clamping folds out-of-range values into the
    // first or last bin.
    auto it = std::upper_bound(dist.bin_edges.begin() + 1,
                               dist.bin_edges.end() - 1, v);
    const std::size_t k =
        static_cast<std::size_t>(it - (dist.bin_edges.begin() + 1));
    counts[k] += 1;
  }

  const double denom = static_cast<double>(values.size()) +
                       static_cast<double>(bins) * epsilon;
  dist.probs.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    dist.probs[k] = (static_cast<double>(counts[k]) + epsilon) / denom;
  }
  return dist;
}

double kld(const F0Distribution& p, const F0Distribution& q) {
  if (p.bin_edges != q.bin_edges) {
    throw BinMismatch("distributions use different bin edges");
  }
  double divergence = 0.0;
  for (std::size_t k = 0; k < p.probs.size(); ++k) {
    if (p.probs[k] > 0.0) {
      divergence += p.probs[k] * std::log(p.probs[k] / q.probs[k]);
    }
  }
  return divergence;
}

}  // namespace f0kit
