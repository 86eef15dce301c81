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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noisytomo/protocols.h"
#include "noisytomo/quantum_core.h"

namespace noisytomo {

enum class ChannelType { kIdentity, kAmplitudeRelaxation, kPureDephasing, kBitFlip, kPhaseFlip };

std::string_view to_string(ChannelType type);
std::optional<ChannelType> parse_channel_type(std::string_view name);

/// A single-qubit decoherence model. Durations are dimensionless:
/// `value` is t/T1 for amplitude relaxation, t/T2pure for dephasing and the
/// error probability p for bit/phase flips. Unused for the identity.
struct ChannelKind {
  ChannelType type = ChannelType::kIdentity;
  double value = 0.0;

  static ChannelKind identity() { return {}; }
  static ChannelKind amplitude_relaxation(double t_over_t1) {
    return {ChannelType::kAmplitudeRelaxation, t_over_t1};
  }
  static ChannelKind pure_dephasing(double t_over_t2pure) {
    return {ChannelType::kPureDephasing, t_over_t2pure};
  }
  static ChannelKind bit_flip(double p) { return {ChannelType::kBitFlip, p}; }
  static ChannelKind phase_flip(double p) { return {ChannelType::kPhaseFlip, p}; }

  /// Throws std::invalid_argument when the parameter is out of range.
  void validate() const;
  std::string describe() const;
  /// Name of the parameter `value` stands for ("t_over_T1", "p", ...).
  std::string_view parameter_name() const;
};

/// Parses "identity", "amplitude:t=0.8T1", "dephasing:t=0.5T2",
/// "bitflip:p=0.1", "phaseflip:p=0.1" (and the long type names).
ChannelKind parse_channel_spec(std::string_view spec);

/// Operator-sum channel ρ ↦ Σ_k E_k ρ E_k†, trace preserving.
class QuantumChannel {
 public:
  /// Validates Σ_k E_k†E_k = I to 1e-12 and drops Kraus operators with
  /// Frobenius norm below 1e-15.
  QuantumChannel(std::string label, std::vector<ComplexOperator> kraus,
                 std::map<std::string, double> params = {});

  const std::string& label() const { return label_; }
  const std::vector<ComplexOperator>& kraus() const { return kraus_; }
  const std::map<std::string, double>& params() const { return params_; }
  int dim() const { return static_cast<int>(kraus_.front().rows()); }

 private:
  std::string label_;
  std::vector<ComplexOperator> kraus_;
  std::map<std::string, double> params_;
};

/// Max-abs entry of Σ_k E_k†E_k − I.
double trace_preservation_residual(const std::vector<ComplexOperator>& kraus);

QuantumChannel make_channel(const ChannelKind& kind);

/// Kronecker products of per-qubit Kraus sets (first channel acts on the
/// most significant qubit).
QuantumChannel tensor_channel(const std::vector<QuantumChannel>& channels,
                              const ResourceLimits& limits = {});

/// Σ_k E_k ρ E_k†
ComplexOperator apply_channel(const QuantumChannel& channel, const ComplexOperator& rho);

/// Λ_j ↦ Σ_k E_k†Λ_j E_k with weights unchanged.
EffectiveMeasurement fold_channel(const EffectiveMeasurement& meas, const QuantumChannel& channel);

/// Fuzzy qubit operator for a clear measurement along r, written out in
/// closed form for each channel type.
ComplexOperator closed_form_operator(const BlochVector& r, const ChannelKind& kind);

}  // namespace noisytomo
