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
#include <string>
#include <vector>

#include "noisytomo/noise_channels.h"
#include "noisytomo/protocols.h"
#include "noisytomo/quantum_core.h"

namespace noisytomo {

/// Rows whose probability falls under this are left out of H.
inline constexpr double kSkipProbability = 1e-12;
/// Relative (to n) threshold for a numerically zero H eigenvalue.
inline constexpr double kZeroEigenvalue = 1e-8;

/// Complete information matrix in the doubled-real representation:
/// H = 2 Σ_j (t_j/λ_j) (Λ̃_j c̃)(Λ̃_j c̃)ᵀ.
struct InformationMatrix {
  Eigen::MatrixXd h;
  double n = 0.0;
  int dim = 0;
  int skipped_rows = 0;
};

InformationMatrix information_matrix(const PureState& state, const EffectiveMeasurement& meas);

/// Principal-component variances d_j = 1/(2 S_j) of the reconstructed state,
/// from the 2s-2 eigenvalues of H left after dropping the smallest (global
/// phase) and the largest (normalization).
struct LossSpectrum {
  std::vector<double> d;  // descending
  double excluded_zero = 0.0;
  double excluded_max = 0.0;
  double n = 0.0;

  int degrees_of_freedom() const { return static_cast<int>(d.size()); }
};

/// Throws NumericalError when H has more than one eigenvalue under 1e-8·n
/// (tomographically incomplete) or the smallest is not numerically zero.
LossSpectrum loss_spectrum(const InformationMatrix& info);

struct LossMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// <1−F> = Σd_j, σ² = 2Σd_j².
LossMoments loss_moments(const LossSpectrum& spectrum);
/// L = n Σ d_j (independent of n).
double scaled_loss(const LossSpectrum& spectrum, double n);
inline double scaled_loss(const LossSpectrum& spectrum) { return scaled_loss(spectrum, spectrum.n); }

/// Convenience: L for a state under a measurement.
double scaled_loss_at(const PureState& state, const EffectiveMeasurement& meas);

/// Samples of 1−F = Σ_j d_j ξ_j², ξ_j ~ N(0,1).
std::vector<double> sample_loss_distribution(const LossSpectrum& spectrum, std::size_t count,
                                             std::uint64_t seed);

/// 2 dc̃ᵀ H dc̃ with the estimate phase-aligned to the truth first. The
/// estimate may be unnormalized (norm fluctuations are part of the statistic).
double chi2_statistic(const PureState& truth, const ComplexVector& estimate,
                      const InformationMatrix& info);

struct BlochMapOptions {
  int theta_points = 61;
  int phi_points = 120;
  /// Polish the best grid extrema with a local simplex search.
  bool refine = true;
  int refine_candidates = 4;
};

struct BlochMapPoint {
  double theta = 0.0;
  double phi = 0.0;
  double loss = 0.0;  // L
  /// false where some row has λ_j = 0 exactly (asymptotic theory not regular there).
  bool regular = true;
};

struct BlochExtremum {
  double theta = 0.0;
  double phi = 0.0;
  double loss = 0.0;
};

struct BlochMap {
  std::vector<BlochMapPoint> grid;  // θ-major; poles appear once
  BlochExtremum min;
  BlochExtremum max;
  std::string protocol_label;
  std::string channel_label;
  int irregular_points = 0;
};

/// L over the Bloch sphere for a single-qubit measurement. Extrema are taken
/// over regular points.
BlochMap bloch_loss_map(const EffectiveMeasurement& meas, const BlochMapOptions& options = {});
BlochMap bloch_loss_map(const Protocol& protocol, const QuantumChannel& channel,
                        const BlochMapOptions& options = {});

}  // namespace noisytomo
