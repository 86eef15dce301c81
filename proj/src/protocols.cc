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

#include "noisytomo/protocols.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noisytomo {

namespace {

double unity_tolerance(double n) { return kUnityTolerance * std::max(1.0, n); }

void check_weights(const std::vector<double>& weights, std::size_t rows, double n) {
  if (rows == 0) {
    throw std::invalid_argument("protocol has no rows");
  }
  if (weights.size() != rows) {
    throw std::invalid_argument("protocol: weight count does not match row count");
  }
  for (double t : weights) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("protocol: weights must be positive and finite");
    }
  }
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("protocol: sample size must be positive");
  }
}

ComplexVector row(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

std::vector<ComplexVector> polyhedron_rows(ProtocolKind kind) {
  const double s3 = std::numbers::sqrt3;
  const double plus = std::sqrt(s3 + 1.0);
  const double minus = std::sqrt(s3 - 1.0);
  const double scale = 1.0 / std::pow(12.0, 0.25);
  const auto phase = [](int k) { return std::polar(1.0, k * std::numbers::pi / 4.0); };

  std::vector<ComplexVector> rows;
  switch (kind) {
    case ProtocolKind::kTetrahedron:
      rows.push_back(scale * row(plus, phase(1) * minus));
      rows.push_back(scale * row(minus, phase(3) * plus));
      rows.push_back(scale * row(plus, phase(5) * minus));
      rows.push_back(scale * row(minus, phase(7) * plus));
      break;
    case ProtocolKind::kCube: {
      const double r2 = std::numbers::sqrt2;
      const Complex i{0.0, 1.0};
      rows.push_back(row(r2, 0.0) / r2);
      rows.push_back(row(0.0, r2) / r2);
      rows.push_back(row(1.0, 1.0) / r2);
      rows.push_back(row(1.0, -1.0) / r2);
      rows.push_back(row(1.0, i) / r2);
      rows.push_back(row(1.0, -i) / r2);
      break;
    }
    case ProtocolKind::kOctahedron:
      for (int k : {1, 3, 5, 7}) rows.push_back(scale * row(plus, phase(k) * minus));
      for (int k : {1, 3, 5, 7}) rows.push_back(scale * row(minus, phase(k) * plus));
      break;
  }
  return rows;
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kTetrahedron:
      return "tetrahedron";
    case ProtocolKind::kCube:
      return "cube";
    case ProtocolKind::kOctahedron:
      return "octahedron";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view name) {
  if (name == "tetrahedron" || name == "tetra") return ProtocolKind::kTetrahedron;
  if (name == "cube") return ProtocolKind::kCube;
  if (name == "octahedron" || name == "octa") return ProtocolKind::kOctahedron;
  return std::nullopt;
}

Protocol::Protocol(std::string label, std::vector<ComplexVector> rows, std::vector<double> weights,
                   double n)
    : label_(std::move(label)), rows_(std::move(rows)), weights_(std::move(weights)), n_(n) {
  check_weights(weights_, rows_.size(), n_);
  const Eigen::Index dim = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != dim || dim < 2) {
      throw std::invalid_argument("protocol: rows must share a dimension of at least 2");
    }
  }
  const double residual = unity_residual(*this);
  if (residual > unity_tolerance(n_)) {
    throw NumericalError("protocol '" + label_ + "' violates the decomposition of unity (residual " +
                         std::to_string(residual) + ")");
  }
}

int Protocol::qubits() const {
  const int d = dim();
  if (!is_power_of_two(d)) return 0;
  int q = 0;
  while ((1 << q) < d) ++q;
  return q;
}

EffectiveMeasurement::EffectiveMeasurement(std::string label,
                                           std::vector<ComplexOperator> operators,
                                           std::vector<double> weights, double n)
    : label_(std::move(label)),
      operators_(std::move(operators)),
      weights_(std::move(weights)),
      n_(n) {
  check_weights(weights_, operators_.size(), n_);
  const Eigen::Index dim = operators_.front().rows();
  for (auto& op : operators_) {
    if (op.rows() != dim || op.cols() != dim) {
      throw std::invalid_argument("measurement: operators must be square and share a dimension");
    }
    if (!is_hermitian(op)) {
      throw NumericalError("measurement: operator is not hermitian");
    }
    op = hermitian_part(op);
    Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(op, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-12) {
      throw NumericalError("measurement: operator is not positive semidefinite");
    }
  }
  const double residual = unity_residual(*this);
  if (residual > unity_tolerance(n_)) {
    throw NumericalError("measurement '" + label_ +
                         "' violates the decomposition of unity (residual " +
                         std::to_string(residual) + ")");
  }
}

EffectiveMeasurement EffectiveMeasurement::with_sample_size(double n) const {
  std::vector<double> scaled = weights_;
  for (double& t : scaled) t *= n / n_;
  return EffectiveMeasurement(label_, operators_, std::move(scaled), n);
}

double unity_residual(const std::vector<ComplexOperator>& operators,
                      const std::vector<double>& weights, double n) {
  const Eigen::Index dim = operators.front().rows();
  ComplexOperator sum = ComplexOperator::Zero(dim, dim);
  for (std::size_t j = 0; j < operators.size(); ++j) {
    sum += weights[j] * operators[j];
  }
  return max_abs(sum - n * identity(static_cast<int>(dim)));
}

double unity_residual(const EffectiveMeasurement& meas) {
  return unity_residual(meas.operators(), meas.weights(), meas.n());
}

double unity_residual(const Protocol& protocol) {
  std::vector<ComplexOperator> ops;
  ops.reserve(protocol.rows().size());
  for (const auto& r : protocol.rows()) {
    ops.push_back(r.conjugate() * r.transpose());
  }
  return unity_residual(ops, protocol.weights(), protocol.n());
}

Protocol build_protocol(ProtocolKind kind, double n) {
  if (!(n > 0.0)) {
    throw std::invalid_argument("build_protocol: sample size must be positive");
  }
  auto rows = polyhedron_rows(kind);
  const double t = 2.0 * n / static_cast<double>(rows.size());
  std::vector<double> weights(rows.size(), t);
  return Protocol(std::string(to_string(kind)), std::move(rows), std::move(weights), n);
}

EffectiveMeasurement measurement_operators(const Protocol& protocol) {
  std::vector<ComplexOperator> ops;
  ops.reserve(protocol.rows().size());
  for (const auto& r : protocol.rows()) {
    // X_j is a bra; X_j† X_j has entries conj(x_a) x_b.
    ops.push_back(r.conjugate() * r.transpose());
  }
  return EffectiveMeasurement(protocol.label(), std::move(ops), protocol.weights(), protocol.n());
}

std::vector<double> event_probabilities(const EffectiveMeasurement& meas, const PureState& state) {
  if (state.dim() != meas.dim()) {
    throw std::invalid_argument("event_probabilities: dimension mismatch");
  }
  const ComplexVector& c = state.amplitudes();
  std::vector<double> lambda;
  lambda.reserve(meas.operators().size());
  for (const auto& op : meas.operators()) {
    lambda.push_back(c.dot(op * c).real());
  }
  return lambda;
}

std::vector<double> event_probabilities(const EffectiveMeasurement& meas,
                                        const ComplexOperator& rho) {
  if (rho.rows() != meas.dim() || rho.cols() != meas.dim()) {
    throw std::invalid_argument("event_probabilities: dimension mismatch");
  }
  std::vector<double> lambda;
  lambda.reserve(meas.operators().size());
  for (const auto& op : meas.operators()) {
    lambda.push_back((op * rho).trace().real());
  }
  return lambda;
}

Protocol rotate_protocol(const Protocol& protocol, const BlochVector& axis, double angle) {
  if (protocol.dim() != 2) {
    throw std::invalid_argument("rotate_protocol: only single-qubit protocols can be rotated");
  }
  const ComplexOperator u = rotation_unitary(axis, angle);
  // Row-vector form of X_j U†: entries (U†)^T x = conj(U) x.
  const ComplexOperator right = u.conjugate();
  std::vector<ComplexVector> rows;
  rows.reserve(protocol.rows().size());
  for (const auto& r : protocol.rows()) {
    rows.push_back(right * r);
  }
  return Protocol(protocol.label(), std::move(rows), protocol.weights(), protocol.n());
}

Protocol tensor_protocol(const Protocol& protocol, int qubits, const ResourceLimits& limits) {
  if (qubits < 1) {
    throw std::invalid_argument("tensor_protocol: qubit count must be at least 1");
  }
  if (protocol.dim() != 2) {
    throw std::invalid_argument("tensor_protocol: base protocol must be single-qubit");
  }
  const std::size_t m = protocol.rows().size();
  std::size_t rows_count = 1;
  std::size_t dim = 1;
  for (int q = 0; q < qubits; ++q) {
    rows_count *= m;
    dim *= 2;
    if (rows_count * dim > limits.max_rows_times_dim) {
      throw std::invalid_argument("tensor_protocol: " + std::to_string(qubits) +
                                  " qubits exceeds the resource limit");
    }
  }
  if (qubits == 1) return protocol;

  // Weight of a product row is Π t_j / n^{q-1}; with uniform t_j = 2n/m this
  // is n·(2/m)^q and Σ t Λ = (nI)^{⊗q} / n^{q-1} = nI.
  const double n = protocol.n();
  std::vector<ComplexVector> rows = protocol.rows();
  std::vector<double> weights = protocol.weights();
  for (int q = 1; q < qubits; ++q) {
    std::vector<ComplexVector> next_rows;
    std::vector<double> next_weights;
    next_rows.reserve(rows.size() * m);
    next_weights.reserve(rows.size() * m);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        next_rows.push_back(tensor(rows[a], protocol.rows()[b]));
        next_weights.push_back(weights[a] * protocol.weights()[b] / n);
      }
    }
    rows = std::move(next_rows);
    weights = std::move(next_weights);
  }
  return Protocol(protocol.label() + "^" + std::to_string(qubits), std::move(rows),
                  std::move(weights), n);
}

}  // namespace noisytomo
