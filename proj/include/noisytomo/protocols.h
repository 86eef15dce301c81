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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noisytomo/quantum_core.h"

namespace noisytomo {

/// Polyhedral qubit protocols. Names follow the instrumental matrices they
/// are built from: the 6-row "cube" measures the Pauli eigenstates (whose
/// Bloch vectors sit on octahedron vertices) and the 8-row "octahedron"
/// measures directions on cube vertices.
enum class ProtocolKind { kTetrahedron, kCube, kOctahedron };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol_kind(std::string_view name);

/// Upper bound on (rows × dimension) for tensor-product constructions.
/// The default admits the 8-row protocol up to 4 qubits.
struct ResourceLimits {
  std::size_t max_rows_times_dim = 65536;
};

inline constexpr double kUnityTolerance = 1e-10;

/// Instrumental matrix rows X_j (bra-vectors, stored as their entries),
/// per-row weights t_j and total sample size n.
///
/// The constructor verifies the decomposition of unity
/// Σ_j t_j X_j†X_j = n·I and throws NumericalError if it does not hold.
class Protocol {
 public:
  Protocol(std::string label, std::vector<ComplexVector> rows, std::vector<double> weights,
           double n);

  const std::string& label() const { return label_; }
  const std::vector<ComplexVector>& rows() const { return rows_; }
  const std::vector<double>& weights() const { return weights_; }
  double n() const { return n_; }
  int dim() const { return static_cast<int>(rows_.front().size()); }
  int size() const { return static_cast<int>(rows_.size()); }
  int qubits() const;

 private:
  std::string label_;
  std::vector<ComplexVector> rows_;
  std::vector<double> weights_;
  double n_;
};

/// Operators Λ_j (clear or fuzzy) together with the weights they are
/// measured with. Every operator is hermitian and positive semidefinite,
/// and Σ_j t_j Λ_j = n·I.
class EffectiveMeasurement {
 public:
  EffectiveMeasurement(std::string label, std::vector<ComplexOperator> operators,
                       std::vector<double> weights, double n);

  const std::string& label() const { return label_; }
  const std::vector<ComplexOperator>& operators() const { return operators_; }
  const std::vector<double>& weights() const { return weights_; }
  double n() const { return n_; }
  int dim() const { return static_cast<int>(operators_.front().rows()); }
  int size() const { return static_cast<int>(operators_.size()); }

  /// Same operators, sample size rescaled to `n` (weights scale with it).
  EffectiveMeasurement with_sample_size(double n) const;

 private:
  std::string label_;
  std::vector<ComplexOperator> operators_;
  std::vector<double> weights_;
  double n_;
};

/// Max-abs entry of Σ_j t_j Λ_j − n·I.
double unity_residual(const std::vector<ComplexOperator>& operators,
                      const std::vector<double>& weights, double n);
double unity_residual(const EffectiveMeasurement& meas);
double unity_residual(const Protocol& protocol);

/// Built-in single-qubit protocol with uniform weights t_j = 2n/m.
Protocol build_protocol(ProtocolKind kind, double n);

/// Λ_j = X_j†X_j
EffectiveMeasurement measurement_operators(const Protocol& protocol);

/// λ_j = c†Λ_j c
std::vector<double> event_probabilities(const EffectiveMeasurement& meas, const PureState& state);
/// λ_j = Tr(Λ_j ρ)
std::vector<double> event_probabilities(const EffectiveMeasurement& meas,
                                        const ComplexOperator& rho);

/// X_j ↦ X_j U† with U = exp(-i angle (axis·σ)/2); single-qubit protocols only.
Protocol rotate_protocol(const Protocol& protocol, const BlochVector& axis, double angle);

/// q-fold tensor power of a single-qubit protocol. Rows are ordered
/// lexicographically with the first factor slowest; weights n·(2/m)^q.
Protocol tensor_protocol(const Protocol& protocol, int qubits, const ResourceLimits& limits = {});

}  // namespace noisytomo
