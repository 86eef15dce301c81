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

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "noisytomo/protocols.h"
#include "noisytomo/quantum_core.h"

namespace noisytomo {

/// How row counts are drawn from the expected counts t_j λ_j.
///
/// kMultinomial fixes the total at n. kPoisson draws every row
/// independently, so the total itself fluctuates around n; the unnormalized
/// ML estimate then carries one more fluctuating direction (its norm).
enum class SamplingModel { kMultinomial, kPoisson };

std::string_view to_string(SamplingModel model);
std::optional<SamplingModel> parse_sampling_model(std::string_view name);

struct CountVector {
  std::vector<std::int64_t> counts;
  std::vector<double> weights;
  double n = 0.0;
  std::uint64_t seed = 0;
  SamplingModel model = SamplingModel::kMultinomial;

  std::int64_t total() const;
};

/// Draws counts with cell probabilities p_j = t_j λ_j / n. Deterministic for
/// a given seed. Throws NumericalError if Σ p_j is off unity by more than 1e-9.
CountVector sample_counts(const EffectiveMeasurement& meas, const PureState& state,
                          std::uint64_t seed, SamplingModel model = SamplingModel::kMultinomial);

/// Diagnostic counts round(t_j λ_j) without sampling noise.
CountVector expected_counts(const EffectiveMeasurement& meas, const PureState& state);

inline constexpr double kProbabilityFloor = 1e-12;

/// Σ_j k_j ln max(λ_j(c), floor); zero-count rows contribute nothing.
double log_likelihood(const ComplexVector& c, const CountVector& counts,
                      const EffectiveMeasurement& meas, double floor = kProbabilityFloor);
double log_likelihood(const PureState& c, const CountVector& counts,
                      const EffectiveMeasurement& meas, double floor = kProbabilityFloor);

struct ReconstructionOptions {
  double step = 0.5;
  int max_iterations = 10000;
  double tolerance = 1e-10;
  double probability_floor = kProbabilityFloor;
  /// Try a safeguarded Newton step on the sphere before each fixed-point
  /// step; it is kept only when the likelihood does not decrease.
  bool newton_polish = true;
  /// Also climb from the linear-inversion estimate and keep the more likely
  /// stationary point. Strongly non-unital channels can leave a second local
  /// maximum near the dominant-eigenvector start.
  bool linear_inversion_restart = true;
  /// Record the likelihood after every accepted step.
  bool keep_history = false;
};

struct ReconstructionResult {
  PureState estimate;
  /// Σk / n: squared norm of the unnormalized ML estimate.
  double norm_squared = 1.0;
  /// Iterations of the climb that produced the estimate.
  int iterations = 0;
  bool converged = false;
  /// ‖R(c)c − c‖ at the estimate.
  double final_residual = 0.0;
  double log_likelihood = 0.0;
  double initial_log_likelihood = 0.0;
  /// Rows with counts whose probability fell under the floor at the estimate.
  int regularized_cells = 0;
  /// Likelihood increments of accepted steps (only with keep_history).
  std::vector<double> likelihood_increments;

  /// √(Σk/n)·estimate, the root-approach solution before normalization.
  ComplexVector unnormalized_estimate() const;
};

/// Maximum-likelihood pure state for the counts under the (possibly fuzzy)
/// measurement operators. Solves R(c)c = c, R(c) = (1/Σk) Σ_j (k_j/λ_j(c)) Λ_j,
/// by damped fixed-point iteration with step halving whenever the
/// likelihood would decrease, optionally preceded each round by a Newton
/// step. Starts from the dominant eigenvector of Σ_j k_j Λ_j and, when it
/// differs, from the linear-inversion estimate as well.
ReconstructionResult reconstruct(const CountVector& counts, const EffectiveMeasurement& meas,
                                 const ReconstructionOptions& options = {});

/// Dominant eigenvector of Σ_j (k_j/n) Λ_j, with deterministic tie breaking.
PureState initial_guess(const CountVector& counts, const EffectiveMeasurement& meas);

/// Dominant eigenvector of the least-squares solution of Tr(Λ_j ρ) = observed rate.
PureState linear_inversion_guess(const CountVector& counts, const EffectiveMeasurement& meas);

}  // namespace noisytomo
