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

#include "noisytomo/quantum_core.h"

#include <algorithm>
#include <cmath>

namespace noisytomo {

namespace {
constexpr Complex kI{0.0, 1.0};
}  // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw std::invalid_argument("PureState: empty amplitude vector");
  }
  const double norm = amplitudes_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("PureState: amplitude vector has zero or non-finite norm");
  }
  amplitudes_ /= norm;
}

PureState PureState::from_normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("PureState: vector is not normalized");
  }
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) {
    throw std::out_of_range("PureState::basis: index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

ComplexOperator PureState::density() const { return amplitudes_ * amplitudes_.adjoint(); }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::normalized() const {
  const double r = norm();
  if (!(r > 0.0)) {
    throw std::invalid_argument("BlochVector: cannot normalize the zero vector");
  }
  return {x / r, y / r, z / r};
}

BlochVector bloch_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

PureState state_from_angles(double theta, double phi) {
  ComplexVector v(2);
  v[0] = std::cos(theta / 2);
  v[1] = std::polar(std::sin(theta / 2), phi);
  return PureState(std::move(v));
}

PureState state_from_bloch(const BlochVector& r) {
  const BlochVector u = r.normalized();
  const double theta = std::acos(std::clamp(u.z, -1.0, 1.0));
  const double phi = std::atan2(u.y, u.x);
  return state_from_angles(theta, phi);
}

BlochVector bloch_of(const PureState& qubit) {
  if (qubit.dim() != 2) {
    throw std::invalid_argument("bloch_of: state is not a qubit");
  }
  const ComplexOperator rho = qubit.density();
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

ComplexOperator identity(int dim) { return ComplexOperator::Identity(dim, dim); }

ComplexOperator pauli_x() {
  ComplexOperator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexOperator pauli_y() {
  ComplexOperator m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexOperator pauli_z() {
  ComplexOperator m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexOperator bloch_to_projector(const BlochVector& r) {
  if (std::abs(r.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("bloch_to_projector: Bloch vector is not unit length");
  }
  ComplexOperator m(2, 2);
  m << 1.0 + r.z, Complex(r.x, r.y), Complex(r.x, -r.y), 1.0 - r.z;
  return 0.5 * m;
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

RealState realify_state(const ComplexVector& c) {
  const Eigen::Index s = c.size();
  RealState out(2 * s);
  out.head(s) = c.real();
  out.tail(s) = c.imag();
  return out;
}

RealOperator realify_operator(const ComplexOperator& op) {
  if (op.rows() != op.cols()) {
    throw std::invalid_argument("realify_operator: operator is not square");
  }
  if (!is_hermitian(op)) {
    throw NumericalError("realify_operator: operator is not hermitian");
  }
  const Eigen::Index s = op.rows();
  RealOperator out(2 * s, 2 * s);
  out.topLeftCorner(s, s) = op.real();
  out.topRightCorner(s, s) = -op.imag();
  out.bottomLeftCorner(s, s) = op.imag();
  out.bottomRightCorner(s, s) = op.real();
  return out;
}

ComplexOperator tensor(const ComplexOperator& a, const ComplexOperator& b) {
  ComplexOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(tensor(a.amplitudes(), b.amplitudes()));
}

double max_abs(const ComplexOperator& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexOperator& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

ComplexOperator hermitian_part(const ComplexOperator& m) { return 0.5 * (m + m.adjoint()); }

ComplexOperator rotation_unitary(const BlochVector& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("rotation_unitary: axis is not a unit vector");
  }
  const ComplexOperator generator = axis.x * pauli_x() + axis.y * pauli_y() + axis.z * pauli_z();
  return std::cos(angle / 2) * identity(2) - kI * std::sin(angle / 2) * generator;
}

Complex alignment_phase(const ComplexVector& reference, const ComplexVector& v) {
  const Complex overlap = reference.dot(v);  // <reference|v>
  const double magnitude = std::abs(overlap);
  if (magnitude == 0.0) {
    return 1.0;
  }
  return std::conj(overlap) / magnitude;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace noisytomo
