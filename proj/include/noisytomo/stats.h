// Copyright 2026 The noisytomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace noisytomo {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Stable per-task seed from a master seed and a task index.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

double mean(std::span<const double> xs);
/// Unbiased sample variance (n-1 denominator); 0 for fewer than two samples.
double sample_variance(std::span<const double> xs);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a − F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Least-squares slope of y against x.
double linear_fit_slope(std::span<const double> x, std::span<const double> y);

/// Freedman–Diaconis bin count, clamped to [min_bins, max_bins].
int freedman_diaconis_bins(std::span<const double> xs, int min_bins = 10, int max_bins = 200);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> density;  // normalized so that Σ density·width = fraction inside [lo, hi]

  double width() const { return (hi - lo) / static_cast<double>(density.size()); }
  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
};

Histogram make_histogram(std::span<const double> xs, double lo, double hi, int bins);

/// Worker count: explicit value if positive, else NOISY_TOMO_THREADS, else
/// hardware concurrency.
int resolve_thread_count(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; callers write results into slot i so the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace noisytomo
