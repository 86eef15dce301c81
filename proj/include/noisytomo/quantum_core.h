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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace noisytomo {

using Complex = std::complex<double>;

/// Dense complex operator on the state space (Λ_j, ρ, Kraus operators).
using ComplexOperator = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
/// Doubled-real representation of a state: (Re c, Im c).
using RealState = Eigen::VectorXd;
/// Doubled-real representation of an operator: [[Re A, -Im A], [Im A, Re A]].
using RealOperator = Eigen::MatrixXd;

/// Raised when a numerical precondition fails (non-hermitian input,
/// incomplete tomography, broken unity decomposition, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;

/// Unit-norm complex amplitude vector.
///
/// Construction normalizes the input (and rejects a zero vector), so every
/// PureState satisfies <c|c> = 1 to machine precision.
class PureState {
 public:
  PureState() = default;
  explicit PureState(ComplexVector amplitudes);

  /// Wraps an already-normalized vector; throws if the norm is off by more
  /// than kNormTolerance.
  static PureState from_normalized(ComplexVector amplitudes);
  static PureState basis(int dim, int index);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  Complex operator[](int i) const { return amplitudes_[i]; }

  /// |c><c|
  ComplexOperator density() const;

 private:
  ComplexVector amplitudes_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
  BlochVector normalized() const;
};

/// Bloch vector of a single-qubit state cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>.
BlochVector bloch_from_angles(double theta, double phi);
/// The pure qubit state whose Bloch vector is r (|r| = 1).
PureState state_from_bloch(const BlochVector& r);
PureState state_from_angles(double theta, double phi);
BlochVector bloch_of(const PureState& qubit);

ComplexOperator identity(int dim);
ComplexOperator pauli_x();
ComplexOperator pauli_y();
ComplexOperator pauli_z();

/// ½[[1+r_z, r_x+i r_y], [r_x-i r_y, 1-r_z]]. Rejects |r| off unity by more than 1e-9.
ComplexOperator bloch_to_projector(const BlochVector& r);

/// |<a|b>|²
double fidelity(const PureState& a, const PureState& b);

RealState realify_state(const ComplexVector& c);
inline RealState realify_state(const PureState& c) { return realify_state(c.amplitudes()); }
/// Throws NumericalError for non-hermitian input.
RealOperator realify_operator(const ComplexOperator& op);

/// Kronecker product, leftmost factor most significant.
ComplexOperator tensor(const ComplexOperator& a, const ComplexOperator& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);
PureState tensor(const PureState& a, const PureState& b);

double max_abs(const ComplexOperator& m);
bool is_hermitian(const ComplexOperator& m, double tol = kHermitianTolerance);
ComplexOperator hermitian_part(const ComplexOperator& m);

/// exp(-i angle (axis·σ)/2)
ComplexOperator rotation_unitary(const BlochVector& axis, double angle);

/// Phase e^{iφ} maximizing Re<reference|e^{iφ} v>.
Complex alignment_phase(const ComplexVector& reference, const ComplexVector& v);

bool is_power_of_two(int n);

}  // namespace noisytomo
