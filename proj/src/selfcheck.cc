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


#include "noisytomo/selfcheck.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "noisytomo/information.h"
#include "noisytomo/noise_channels.h"
#include "noisytomo/protocols.h"

namespace noisytomo {

namespace {

constexpr ProtocolKind kProtocols[] = {ProtocolKind::kTetrahedron, ProtocolKind::kCube,
                                       ProtocolKind::kOctahedron};

std::vector<ChannelKind> sample_channels() {
  return {ChannelKind::identity(),
          ChannelKind::amplitude_relaxation(0.3),
          ChannelKind::amplitude_relaxation(1.5),
          ChannelKind::pure_dephasing(0.8),
          ChannelKind::pure_dephasing(3.0),
          ChannelKind::bit_flip(0.1),
          ChannelKind::bit_flip(0.5),
          ChannelKind::phase_flip(0.25)};
}

BlochVector random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  const double z = u(rng);
  const double phi = ph(rng);
  const double s = std::sqrt(1.0 - z * z);
  return {s * std::cos(phi), s * std::sin(phi), z};
}

CheckResult closed_form_vs_kraus() {
  CheckResult out{"closed-form noisy operators match Kraus folding", false, 0.0, 1e-12};
  std::mt19937_64 rng(20260101);
  std::vector<BlochVector> directions;
  for (int i = 0; i < 64; ++i) directions.push_back(random_direction(rng));
  for (ProtocolKind kind : kProtocols) {
    const Protocol p = build_protocol(kind, 1.0);
    for (const auto& row : p.rows()) directions.push_back(bloch_of(PureState(row.conjugate())));
  }
  for (const ChannelKind& ch : sample_channels()) {
    const QuantumChannel channel = make_channel(ch);
    for (const BlochVector& r : directions) {
      const ComplexOperator proj = bloch_to_projector(r);
      ComplexOperator folded = ComplexOperator::Zero(2, 2);
      for (const auto& e : channel.kraus()) folded += e.adjoint() * proj * e;
      out.deviation = std::max(out.deviation, max_abs(folded - closed_form_operator(r, ch)));
    }
  }
  out.passed = out.deviation <= out.tolerance;
  return out;
}

CheckResult unity_decomposition() {
  CheckResult out{"decomposition of unity for clear and fuzzy operators", false, 0.0, 1e-10};
  for (ProtocolKind kind : kProtocols) {
    for (int qubits : {1, 2}) {
      const double n = 1000.0;
      Protocol p = build_protocol(kind, n);
      if (qubits > 1) p = tensor_protocol(p, qubits);
      const EffectiveMeasurement clear = measurement_operators(p);
      out.deviation = std::max(out.deviation, unity_residual(p) / n);
      for (const ChannelKind& ch : sample_channels()) {
        const QuantumChannel single = make_channel(ch);
        const QuantumChannel channel =
            qubits > 1 ? tensor_channel(std::vector<QuantumChannel>(qubits, single)) : single;
        out.deviation = std::max(out.deviation, unity_residual(fold_channel(clear, channel)) / n);
      }
    }
  }
  out.passed = out.deviation <= out.tolerance;
  return out;
}

CheckResult normalization_identity() {
  CheckResult out{"<c|H|c> = 2n with exactly one zero mode", false, 0.0, 1e-6};
  std::mt19937_64 rng(20260102);
  bool complete = true;
  for (ProtocolKind kind : kProtocols) {
    const double n = 4000.0;
    const EffectiveMeasurement clear = measurement_operators(build_protocol(kind, n));
    for (const ChannelKind& ch : sample_channels()) {
      if (ch.type == ChannelType::kBitFlip && ch.value == 0.5) continue;  // erases x/z information
      const EffectiveMeasurement fuzzy = fold_channel(clear, make_channel(ch));
      for (int i = 0; i < 8; ++i) {
        const PureState c = state_from_bloch(random_direction(rng));
        const InformationMatrix info = information_matrix(c, fuzzy);
        const RealState v = realify_state(c);
        const double q = v.dot(info.h * v);
        out.deviation = std::max(out.deviation, std::abs(q - 2.0 * n) / n);
        try {
          loss_spectrum(info);
        } catch (const NumericalError&) {
          complete = false;
        }
      }
    }
  }
  out.passed = complete && out.deviation <= out.tolerance;
  return out;
}

}  // namespace

std::vector<CheckResult> run_selfcheck() {
  return {closed_form_vs_kraus(), unity_decomposition(), normalization_identity()};
}

}  // namespace noisytomo
