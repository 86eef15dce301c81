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

#include "gtest/gtest.h"
#include "test_util.h"

using namespace noisytomo;
using namespace noisytomo::testing;

namespace {

const Complex I(0.0, 1.0);
const double kPi = std::numbers::pi;

// The printed instrumental matrices, transcribed independently of the library.
std::vector<std::array<Complex, 2>> printed_tetra() {
  const double a = std::sqrt(std::sqrt(3.0) + 1.0);
  const double b = std::sqrt(std::sqrt(3.0) - 1.0);
  const double k = 1.0 / std::pow(12.0, 0.25);
  return {{k * a, k * std::polar(b, kPi / 4)},
          {k * b, k * std::polar(a, 3 * kPi / 4)},
          {k * a, k * std::polar(b, 5 * kPi / 4)},
          {k * b, k * std::polar(a, 7 * kPi / 4)}};
}

std::vector<std::array<Complex, 2>> printed_cube() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{1.0, 0.0}, {0.0, 1.0}, {r, r}, {r, -r}, {r, r * I}, {r, -r * I}};
}

std::vector<std::array<Complex, 2>> printed_octa() {
  const double a = std::sqrt(std::sqrt(3.0) + 1.0);
  const double b = std::sqrt(std::sqrt(3.0) - 1.0);
  const double k = 1.0 / std::pow(12.0, 0.25);
  std::vector<std::array<Complex, 2>> rows;
  for (int q : {1, 3, 5, 7}) rows.push_back({k * a, k * std::polar(b, q * kPi / 4)});
  for (int q : {1, 3, 5, 7}) rows.push_back({k * b, k * std::polar(a, q * kPi / 4)});
  return rows;
}

// X_j†X_j for a bra row: (i, j) entry conj(x_i) x_j.
ComplexOperator outer(const std::array<Complex, 2>& x) {
  ComplexOperator m(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(i, j) = std::conj(x[i]) * x[j];
  }
  return m;
}

}  // namespace

TEST(BuildProtocol, rows_match_printed_matrices) {
  const std::pair<ProtocolKind, std::vector<std::array<Complex, 2>>> cases[] = {
      {ProtocolKind::kTetrahedron, printed_tetra()},
      {ProtocolKind::kCube, printed_cube()},
      {ProtocolKind::kOctahedron, printed_octa()}};
  for (const auto& [kind, rows] : cases) {
    const Protocol p = build_protocol(kind, 1.0);
    ASSERT_EQ(p.size(), static_cast<int>(rows.size()));
    for (int j = 0; j < p.size(); ++j) {
      EXPECT_NEAR(std::abs(p.rows()[j][0] - rows[j][0]), 0.0, 1e-15) << to_string(kind) << " row " << j;
      EXPECT_NEAR(std::abs(p.rows()[j][1] - rows[j][1]), 0.0, 1e-15) << to_string(kind) << " row " << j;
      EXPECT_NEAR(p.rows()[j].norm(), 1.0, 1e-15);
    }
  }
}

TEST(BuildProtocol, cube_weights_and_unity) {
  const Protocol p = build_protocol(ProtocolKind::kCube, 3.0);
  for (double t : p.weights()) EXPECT_DOUBLE_EQ(t, 1.0);
  ComplexOperator sum = ComplexOperator::Zero(2, 2);
  for (const auto& r : printed_cube()) sum += outer(r);
  EXPECT_LT(max_diff(sum, 3.0 * identity(2)), 1e-15);
  EXPECT_LT(unity_residual(p), 1e-14);
}

TEST(BuildProtocol, octahedron_projectors_sum_to_four) {
  ComplexOperator sum = ComplexOperator::Zero(2, 2);
  for (const auto& r : printed_octa()) sum += outer(r);
  EXPECT_LT(max_diff(sum, 4.0 * identity(2)), 1e-14);
  const EffectiveMeasurement m = measurement_operators(build_protocol(ProtocolKind::kOctahedron, 1.0));
  ComplexOperator lib = ComplexOperator::Zero(2, 2);
  for (const auto& op : m.operators()) lib += op;
  EXPECT_LT(max_diff(lib, sum), 1e-14);
}

TEST(BuildProtocol, rejects_bad_sample_size) {
  EXPECT_THROW(build_protocol(ProtocolKind::kCube, 0.0), std::invalid_argument);
  EXPECT_THROW(build_protocol(ProtocolKind::kCube, -1.0), std::invalid_argument);
}

TEST(ParseProtocolKind, names) {
  EXPECT_EQ(parse_protocol_kind("tetrahedron"), ProtocolKind::kTetrahedron);
  EXPECT_EQ(parse_protocol_kind("tetra"), ProtocolKind::kTetrahedron);
  EXPECT_EQ(parse_protocol_kind("cube"), ProtocolKind::kCube);
  EXPECT_EQ(parse_protocol_kind("octa"), ProtocolKind::kOctahedron);
  EXPECT_FALSE(parse_protocol_kind("dodecahedron").has_value());
}

TEST(Protocol, constructor_checks_unity) {
  std::vector<ComplexVector> rows{PureState::basis(2, 0).amplitudes()};
  EXPECT_THROW(Protocol("bad", rows, {1.0}, 1.0), NumericalError);
  EXPECT_THROW(Protocol("bad", rows, {1.0, 2.0}, 1.0), std::invalid_argument);
}

TEST(MeasurementOperators, examples) {
  const EffectiveMeasurement cube = measurement_operators(build_protocol(ProtocolKind::kCube, 1.0));
  EXPECT_LT(max_diff(cube.operators()[0], (ComplexOperator(2, 2) << 1, 0, 0, 0).finished()), 1e-15);
  EXPECT_LT(max_diff(cube.operators()[2], (ComplexOperator(2, 2) << 0.5, 0.5, 0.5, 0.5).finished()), 1e-15);

  const EffectiveMeasurement tetra = measurement_operators(build_protocol(ProtocolKind::kTetrahedron, 1.0));
  const ComplexOperator expected = outer(printed_tetra()[0]);
  EXPECT_LT(max_diff(tetra.operators()[0], expected), 1e-15);
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(tetra.operators()[0](0, 0).real(), (s3 + 1) / (2 * s3), 1e-15);
  EXPECT_NEAR(tetra.operators()[0](1, 1).real(), (s3 - 1) / (2 * s3), 1e-15);
}

TEST(EventProbabilities, examples) {
  const PureState zero = PureState::basis(2, 0);
  const auto cube = event_probabilities(measurement_operators(build_protocol(ProtocolKind::kCube, 1.0)), zero);
  const std::vector<double> expected{1, 0, 0.5, 0.5, 0.5, 0.5};
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(cube[j], expected[j], 1e-15);

  const auto tetra =
      event_probabilities(measurement_operators(build_protocol(ProtocolKind::kTetrahedron, 1.0)), zero);
  const double s3 = std::sqrt(3.0);
  const double hi = (s3 + 1) / (2 * s3), lo = (s3 - 1) / (2 * s3);
  EXPECT_NEAR(tetra[0], hi, 1e-15);
  EXPECT_NEAR(tetra[1], lo, 1e-15);
  EXPECT_NEAR(tetra[2], hi, 1e-15);
  EXPECT_NEAR(tetra[3], lo, 1e-15);
  EXPECT_NEAR(hi, 0.78868, 1e-5);

  for (ProtocolKind kind : {ProtocolKind::kTetrahedron, ProtocolKind::kCube, ProtocolKind::kOctahedron}) {
    for (double l : event_probabilities(measurement_operators(build_protocol(kind, 1.0)), 0.5 * identity(2))) {
      EXPECT_NEAR(l, 0.5, 1e-15);
    }
  }
}

TEST(EventProbabilities, dimension_mismatch) {
  const EffectiveMeasurement cube = measurement_operators(build_protocol(ProtocolKind::kCube, 1.0));
  EXPECT_THROW(event_probabilities(cube, PureState::basis(4, 0)), std::invalid_argument);
}

TEST(EventProbabilities, weighted_sum_is_sample_size) {
  std::mt19937_64 rng(11);
  for (ProtocolKind kind : {ProtocolKind::kTetrahedron, ProtocolKind::kCube, ProtocolKind::kOctahedron}) {
    const double n = 4000.0;
    const EffectiveMeasurement m = measurement_operators(build_protocol(kind, n));
    for (int i = 0; i < 1000; ++i) {
      const auto lambda = event_probabilities(m, random_state(2, rng));
      double total = 0.0;
      for (int j = 0; j < m.size(); ++j) {
        ASSERT_GE(lambda[j], -1e-12);
        ASSERT_LE(lambda[j], 1.0 + 1e-12);
        total += m.weights()[j] * lambda[j];
      }
      ASSERT_NEAR(total, n, 1e-9 * n);
    }
  }
}

TEST(RotateProtocol, trivial_angles) {
  for (ProtocolKind kind : {ProtocolKind::kTetrahedron, ProtocolKind::kCube, ProtocolKind::kOctahedron}) {
    const Protocol p = build_protocol(kind, 1.0);
    const auto base = measurement_operators(p).operators();
    for (double angle : {0.0, 2 * kPi}) {
      const auto rotated = measurement_operators(rotate_protocol(p, BlochVector{0.3, -0.4, 0.5}.normalized(), angle)).operators();
      for (std::size_t j = 0; j < base.size(); ++j) EXPECT_LT(max_diff(rotated[j], base[j]), 1e-14);
    }
  }
}

TEST(RotateProtocol, conjugates_operators) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const Protocol p = build_protocol(ProtocolKind::kOctahedron, 2.0);
  for (int i = 0; i < 50; ++i) {
    const BlochVector axis = random_direction(rng);
    const double angle = ang(rng);
    // U = cos(a/2) I − i sin(a/2) n·σ, built here from the Pauli matrices.
    const ComplexOperator u = std::cos(angle / 2) * identity(2) -
                              I * std::sin(angle / 2) *
                                  (axis.x * pauli_x() + axis.y * pauli_y() + axis.z * pauli_z());
    const auto base = measurement_operators(p).operators();
    const Protocol r = rotate_protocol(p, axis, angle);
    const auto rotated = measurement_operators(r).operators();
    for (std::size_t j = 0; j < base.size(); ++j) {
      ASSERT_LT(max_diff(rotated[j], u * base[j] * u.adjoint()), 1e-14);
    }
    EXPECT_EQ(r.weights(), p.weights());
  }
}

TEST(RotateProtocol, unity_survives_random_rotations) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (ProtocolKind kind : {ProtocolKind::kTetrahedron, ProtocolKind::kCube, ProtocolKind::kOctahedron}) {
    const Protocol p = build_protocol(kind, 1000.0);
    for (int i = 0; i < 200; ++i) {
      ASSERT_LE(unity_residual(rotate_protocol(p, random_direction(rng), ang(rng))), 1e-10);
    }
  }
}

TEST(RotateProtocol, composes_about_fixed_axis) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const Protocol p = build_protocol(ProtocolKind::kTetrahedron, 1.0);
  for (int i = 0; i < 50; ++i) {
    const BlochVector axis = random_direction(rng);
    const double a = ang(rng), b = ang(rng);
    const auto twice = measurement_operators(rotate_protocol(rotate_protocol(p, axis, a), axis, b)).operators();
    const auto once = measurement_operators(rotate_protocol(p, axis, a + b)).operators();
    for (std::size_t j = 0; j < once.size(); ++j) ASSERT_LT(max_diff(twice[j], once[j]), 1e-10);
  }
}

TEST(RotateProtocol, rejects_non_unit_axis) {
  const Protocol p = build_protocol(ProtocolKind::kCube, 1.0);
  EXPECT_THROW(rotate_protocol(p, {1.0, 1.0, 0.0}, 0.3), std::invalid_argument);
}

TEST(TensorProtocol, tetrahedron_two_qubits) {
  const double n = 1000.0;
  const Protocol p = tensor_protocol(build_protocol(ProtocolKind::kTetrahedron, n), 2);
  EXPECT_EQ(p.size(), 16);
  EXPECT_EQ(p.dim(), 4);
  for (double t : p.weights()) EXPECT_DOUBLE_EQ(t, n / 4);
  // Each single-qubit sum is (m/2) I = 2I, so the product sum is 4 I and the weights n/4 give n I.
  ComplexOperator sum = ComplexOperator::Zero(4, 4);
  const auto ops = measurement_operators(p).operators();
  for (const auto& op : ops) sum += op;
  EXPECT_LT(max_diff(sum, tensor(ComplexOperator(2.0 * identity(2)), ComplexOperator(2.0 * identity(2)))),
            1e-13);
  EXPECT_LE(unity_residual(p), 1e-10 * n);
}

TEST(TensorProtocol, single_qubit_is_identity) {
  const Protocol base = build_protocol(ProtocolKind::kCube, 5.0);
  const Protocol p = tensor_protocol(base, 1);
  ASSERT_EQ(p.size(), base.size());
  for (int j = 0; j < p.size(); ++j) EXPECT_EQ(p.rows()[j], base.rows()[j]);
  EXPECT_EQ(p.weights(), base.weights());
}

TEST(TensorProtocol, cube_two_qubits_on_ground_state) {
  const Protocol p = tensor_protocol(build_protocol(ProtocolKind::kCube, 1.0), 2);
  EXPECT_EQ(p.size(), 36);
  const auto lambda = event_probabilities(measurement_operators(p), PureState::basis(4, 0));
  // Row 0 is (√2,0)⊗(√2,0)/2 = |00>.
  EXPECT_NEAR(lambda[0], 1.0, 1e-15);
  // Row 1 is |0>⊗|1>.
  EXPECT_NEAR(lambda[1], 0.0, 1e-15);
}

TEST(TensorProtocol, product_states_factor) {
  std::mt19937_64 rng(15);
  for (ProtocolKind kind : {ProtocolKind::kTetrahedron, ProtocolKind::kCube, ProtocolKind::kOctahedron}) {
    const Protocol single = build_protocol(kind, 1.0);
    const auto m1 = measurement_operators(single);
    const auto m2 = measurement_operators(tensor_protocol(single, 2));
    for (int i = 0; i < 20; ++i) {
      const PureState a = random_state(2, rng), b = random_state(2, rng);
      const auto la = event_probabilities(m1, a);
      const auto lb = event_probabilities(m1, b);
      const auto lab = event_probabilities(m2, tensor(a, b));
      for (int j = 0; j < single.size(); ++j) {
        for (int k = 0; k < single.size(); ++k) {
          ASSERT_NEAR(lab[j * single.size() + k], la[j] * lb[k], 1e-12);
        }
      }
    }
  }
}

TEST(TensorProtocol, resource_guard) {
  const Protocol octa = build_protocol(ProtocolKind::kOctahedron, 1.0);
  EXPECT_NO_THROW(tensor_protocol(octa, 4));
  EXPECT_THROW(tensor_protocol(octa, 5), std::invalid_argument);
  EXPECT_THROW(tensor_protocol(octa, 0), std::invalid_argument);
  EXPECT_THROW(tensor_protocol(octa, 2, ResourceLimits{100}), std::invalid_argument);
}

TEST(EffectiveMeasurement, validates_operators) {
  ComplexOperator neg = ComplexOperator::Zero(2, 2);
  neg(0, 0) = 2.0;
  neg(1, 1) = -1.0;
  ComplexOperator pos = ComplexOperator::Zero(2, 2);
  pos(1, 1) = 2.0;
  pos(0, 0) = -1.0;
  // Sums to I but neither operator is positive semidefinite.
  EXPECT_THROW(EffectiveMeasurement("bad", {neg, pos}, {1.0, 1.0}, 1.0), NumericalError);
  ComplexOperator skew = identity(2);
  skew(0, 1) = 0.5;
  EXPECT_THROW(EffectiveMeasurement("bad", {skew}, {1.0}, 1.0), NumericalError);
}

TEST(EffectiveMeasurement, with_sample_size_rescales_weights) {
  const auto m = measurement_operators(build_protocol(ProtocolKind::kTetrahedron, 100.0));
  const auto m2 = m.with_sample_size(300.0);
  EXPECT_DOUBLE_EQ(m2.n(), 300.0);
  for (int j = 0; j < m.size(); ++j) EXPECT_DOUBLE_EQ(m2.weights()[j], 3.0 * m.weights()[j]);
  EXPECT_LE(unity_residual(m2), 1e-10 * 300.0);
}
