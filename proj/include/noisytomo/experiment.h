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
#include <string>
#include <vector>

#include "noisytomo/estimation.h"
#include "noisytomo/information.h"
#include "noisytomo/noise_channels.h"
#include "noisytomo/protocols.h"
#include "noisytomo/serialization.h"

namespace noisytomo {

struct RotationConfig {
  BlochVector axis;
  double angle = 0.0;
};

/// One per-qubit channel: a named model or a raw Kraus set.
struct ChannelConfig {
  std::optional<ChannelKind> kind;
  std::vector<ComplexOperator> kraus;
  std::string label = "kraus";
};

/// Named preset ("zero", "plus_i", "fig4", "worst", ...) or explicit amplitudes.
struct StateConfig {
  std::string preset;
  ComplexVector amplitudes;
};

struct ExperimentConfig {
  ProtocolKind protocol = ProtocolKind::kTetrahedron;
  int qubits = 1;
  std::optional<RotationConfig> rotation;
  /// Empty: identity. One entry: applied to every qubit. Otherwise one per qubit.
  std::vector<ChannelConfig> channels;
  StateConfig state{"zero", {}};
  double n = 1000.0;
  int trials = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir = ".";
  SamplingModel sampling = SamplingModel::kMultinomial;
  /// Diagnostic: counts are rounded expectations instead of random draws.
  bool exact_probabilities = false;
  /// Histogram bins; 0 picks Freedman–Diaconis.
  int bins = 0;
  std::size_t theory_samples = 100000;
  ReconstructionOptions reconstruction;
};

/// Parses a config document; throws ConfigError naming the bad field.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);

/// Everything derived from a config before any sampling.
struct ExperimentSetup {
  Protocol protocol;
  QuantumChannel channel;
  EffectiveMeasurement clear;
  EffectiveMeasurement fuzzy;
  PureState truth;
};

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg);

struct TheoryReport {
  LossSpectrum spectrum;
  LossMoments moments;
  double scaled_loss = 0.0;
  int nu = 0;    // 2s-2
  int nu_h = 0;  // 2s-1
  int skipped_rows = 0;
};

TheoryReport theory_report(const ExperimentSetup& setup);
Json theory_to_json(const TheoryReport& theory);

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  double loss = 0.0;
  double chi2 = 0.0;
  bool converged = false;
  int iterations = 0;
  std::int64_t total_counts = 0;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct ExperimentSummary {
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t converged = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double standard_error = 0.0;
  double theoretical_mean = 0.0;
  double theoretical_variance = 0.0;
  /// (empirical − theoretical mean) / standard error
  double mean_z = 0.0;
  double ks_distance = 0.0;
  double chi2_mean = 0.0;
  /// Expected mean of the chi-squared statistic: 2s−1 under Poisson
  /// counting, 2s−2 when the multinomial total is fixed.
  int chi2_expected_dof = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  TheoryReport theory;
  std::vector<TrialRecord> trials;
  ExperimentSummary summary;
  /// Theoretical 1−F samples used for the KS distance and histogram overlay.
  std::vector<double> theory_samples;
};

/// Simulate-and-reconstruct Monte Carlo. Trial i uses seed
/// derive_seed(master_seed, i); results are identical for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 0);

/// Recomputes the summary from per-trial records and theory samples.
ExperimentSummary summarize(const std::vector<TrialRecord>& trials, const TheoryReport& theory,
                            const std::vector<double>& theory_samples, SamplingModel model,
                            int dim);

Json result_to_json(const ExperimentResult& result);
std::string trials_to_csv(const std::vector<TrialRecord>& trials);

/// Writes result.json, trials.csv, loss_hist.csv and loss_hist.svg (plus a
/// metadata.json with the wall-clock timestamp) into cfg.output_dir.
void write_experiment_outputs(const ExperimentResult& result);

}  // namespace noisytomo
