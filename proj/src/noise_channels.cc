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

#include "noisytomo/noise_channels.h"

#include <cctype>
#include <cmath>
#include <sstream>

namespace noisytomo {

namespace {

constexpr double kDropNorm = 1e-15;
constexpr double kTraceTolerance = 1e-12;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

double parse_number(std::string_view text, std::string_view spec) {
  std::string buf(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("channel spec '" + std::string(spec) + "': bad number");
  }
  if (used != buf.size()) {
    throw std::invalid_argument("channel spec '" + std::string(spec) + "': bad number");
  }
  return v;
}

}  // namespace

std::string_view to_string(ChannelType type) {
  switch (type) {
    case ChannelType::kIdentity:
      return "identity";
    case ChannelType::kAmplitudeRelaxation:
      return "amplitude_relaxation";
    case ChannelType::kPureDephasing:
      return "pure_dephasing";
    case ChannelType::kBitFlip:
      return "bit_flip";
    case ChannelType::kPhaseFlip:
      return "phase_flip";
  }
  return "unknown";
}

std::optional<ChannelType> parse_channel_type(std::string_view name) {
  const std::string n = lower(name);
  if (n == "identity" || n == "none" || n == "ideal") return ChannelType::kIdentity;
  if (n == "amplitude_relaxation" || n == "amplitude" || n == "amp")
    return ChannelType::kAmplitudeRelaxation;
  if (n == "pure_dephasing" || n == "dephasing" || n == "phase_relaxation")
    return ChannelType::kPureDephasing;
  if (n == "bit_flip" || n == "bitflip") return ChannelType::kBitFlip;
  if (n == "phase_flip" || n == "phaseflip") return ChannelType::kPhaseFlip;
  return std::nullopt;
}

void ChannelKind::validate() const {
  switch (type) {
    case ChannelType::kIdentity:
      return;
    case ChannelType::kAmplitudeRelaxation:
    case ChannelType::kPureDephasing:
      if (!(value >= 0.0)) {
        throw std::invalid_argument(std::string(to_string(type)) +
                                    ": duration ratio must be non-negative");
      }
      return;
    case ChannelType::kBitFlip:
    case ChannelType::kPhaseFlip:
      if (!(value >= 0.0 && value <= 0.5)) {
        throw std::invalid_argument(std::string(to_string(type)) +
                                    ": error probability must lie in [0, 1/2]");
      }
      return;
  }
}

std::string_view ChannelKind::parameter_name() const {
  switch (type) {
    case ChannelType::kAmplitudeRelaxation:
      return "t_over_T1";
    case ChannelType::kPureDephasing:
      return "t_over_T2pure";
    case ChannelType::kBitFlip:
    case ChannelType::kPhaseFlip:
      return "p";
    case ChannelType::kIdentity:
      break;
  }
  return "";
}

std::string ChannelKind::describe() const {
  std::ostringstream out;
  out << to_string(type);
  if (type != ChannelType::kIdentity) {
    out << "(" << parameter_name() << "=" << value << ")";
  }
  return out.str();
}

ChannelKind parse_channel_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto type = parse_channel_type(spec.substr(0, colon));
  if (!type) {
    throw std::invalid_argument("unknown channel kind in '" + std::string(spec) + "'");
  }
  ChannelKind kind{*type, 0.0};
  if (*type == ChannelType::kIdentity) {
    return kind;
  }
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("channel spec '" + std::string(spec) + "' needs a parameter");
  }
  std::string_view arg = spec.substr(colon + 1);
  const auto eq = arg.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("channel spec '" + std::string(spec) + "': expected key=value");
  }
  const std::string key = lower(arg.substr(0, eq));
  std::string_view value = arg.substr(eq + 1);
  if (*type == ChannelType::kBitFlip || *type == ChannelType::kPhaseFlip) {
    if (key != "p") {
      throw std::invalid_argument("channel spec '" + std::string(spec) + "': expected p=...");
    }
  } else {
    if (key != "t") {
      throw std::invalid_argument("channel spec '" + std::string(spec) + "': expected t=...");
    }
    // Accept an optional unit suffix naming the relaxation time.
    const std::string unit = *type == ChannelType::kAmplitudeRelaxation ? "t1" : "t2";
    const std::string v = lower(value);
    for (const std::string& suffix : {unit + "pure", unit}) {
      if (v.size() > suffix.size() && v.ends_with(suffix)) {
        value = value.substr(0, value.size() - suffix.size());
        break;
      }
    }
  }
  kind.value = parse_number(value, spec);
  kind.validate();
  return kind;
}

double trace_preservation_residual(const std::vector<ComplexOperator>& kraus) {
  const Eigen::Index dim = kraus.front().rows();
  ComplexOperator sum = ComplexOperator::Zero(dim, dim);
  for (const auto& e : kraus) sum += e.adjoint() * e;
  return max_abs(sum - identity(static_cast<int>(dim)));
}

QuantumChannel::QuantumChannel(std::string label, std::vector<ComplexOperator> kraus,
                               std::map<std::string, double> params)
    : label_(std::move(label)), params_(std::move(params)) {
  if (kraus.empty()) {
    throw std::invalid_argument("channel '" + label_ + "' has no Kraus operators");
  }
  const Eigen::Index dim = kraus.front().rows();
  for (const auto& e : kraus) {
    if (e.rows() != dim || e.cols() != dim) {
      throw std::invalid_argument("channel '" + label_ + "': Kraus operators must be square");
    }
  }
  const double residual = trace_preservation_residual(kraus);
  if (residual > kTraceTolerance) {
    throw NumericalError("channel '" + label_ + "' is not trace preserving (residual " +
                         std::to_string(residual) + ")");
  }
  for (auto& e : kraus) {
    if (e.norm() >= kDropNorm) kraus_.push_back(std::move(e));
  }
}

QuantumChannel make_channel(const ChannelKind& kind) {
  kind.validate();
  const std::string label = kind.describe();
  std::map<std::string, double> params;
  if (kind.type != ChannelType::kIdentity) {
    params.emplace(std::string(kind.parameter_name()), kind.value);
  }
  switch (kind.type) {
    case ChannelType::kIdentity:
      return QuantumChannel(label, {identity(2)}, params);
    case ChannelType::kAmplitudeRelaxation: {
      const double gamma = -std::expm1(-kind.value);
      ComplexOperator e0 = ComplexOperator::Zero(2, 2);
      e0(0, 0) = 1.0;
      e0(1, 1) = std::exp(-kind.value / 2.0);
      ComplexOperator e1 = ComplexOperator::Zero(2, 2);
      e1(0, 1) = std::sqrt(gamma);
      return QuantumChannel(label, {e0, e1}, params);
    }
    case ChannelType::kPureDephasing: {
      const double p = -std::expm1(-kind.value) / 2.0;
      return QuantumChannel(label, {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * pauli_z()},
                            params);
    }
    case ChannelType::kBitFlip:
      return QuantumChannel(
          label, {std::sqrt(1.0 - kind.value) * identity(2), std::sqrt(kind.value) * pauli_x()},
          params);
    case ChannelType::kPhaseFlip:
      return QuantumChannel(
          label, {std::sqrt(1.0 - kind.value) * identity(2), std::sqrt(kind.value) * pauli_z()},
          params);
  }
  throw std::invalid_argument("make_channel: unknown channel type");
}

QuantumChannel tensor_channel(const std::vector<QuantumChannel>& channels,
                              const ResourceLimits& limits) {
  if (channels.empty()) {
    throw std::invalid_argument("tensor_channel: no channels given");
  }
  std::size_t count = 1;
  std::size_t dim = 1;
  for (const auto& ch : channels) {
    count *= ch.kraus().size();
    dim *= static_cast<std::size_t>(ch.dim());
    if (count * dim > limits.max_rows_times_dim) {
      throw std::invalid_argument("tensor_channel: product channel exceeds the resource limit");
    }
  }
  std::vector<ComplexOperator> kraus = channels.front().kraus();
  std::string label = channels.front().label();
  std::map<std::string, double> params;
  for (std::size_t q = 0; q < channels.size(); ++q) {
    for (const auto& [key, value] : channels[q].params()) {
      params.emplace("q" + std::to_string(q) + "." + key, value);
    }
  }
  for (std::size_t q = 1; q < channels.size(); ++q) {
    std::vector<ComplexOperator> next;
    next.reserve(kraus.size() * channels[q].kraus().size());
    for (const auto& left : kraus) {
      for (const auto& right : channels[q].kraus()) {
        next.push_back(tensor(left, right));
      }
    }
    kraus = std::move(next);
    label += " x " + channels[q].label();
  }
  return QuantumChannel(label, std::move(kraus), std::move(params));
}

ComplexOperator apply_channel(const QuantumChannel& channel, const ComplexOperator& rho) {
  if (rho.rows() != channel.dim() || rho.cols() != channel.dim()) {
    throw std::invalid_argument("apply_channel: dimension mismatch");
  }
  ComplexOperator out = ComplexOperator::Zero(rho.rows(), rho.cols());
  for (const auto& e : channel.kraus()) out += e * rho * e.adjoint();
  return out;
}

EffectiveMeasurement fold_channel(const EffectiveMeasurement& meas, const QuantumChannel& channel) {
  if (meas.dim() != channel.dim()) {
    throw std::invalid_argument("fold_channel: dimension mismatch between measurement (" +
                                std::to_string(meas.dim()) + ") and channel (" +
                                std::to_string(channel.dim()) + ")");
  }
  if (trace_preservation_residual(channel.kraus()) > kTraceTolerance) {
    throw NumericalError("fold_channel: channel is not trace preserving");
  }
  std::vector<ComplexOperator> folded;
  folded.reserve(meas.operators().size());
  for (const auto& op : meas.operators()) {
    ComplexOperator acc = ComplexOperator::Zero(op.rows(), op.cols());
    for (const auto& e : channel.kraus()) acc += e.adjoint() * op * e;
    folded.push_back(hermitian_part(acc));
  }
  return EffectiveMeasurement(meas.label() + " | " + channel.label(), std::move(folded),
                              meas.weights(), meas.n());
}

ComplexOperator closed_form_operator(const BlochVector& r, const ChannelKind& kind) {
  if (std::abs(r.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("closed_form_operator: Bloch vector is not unit length");
  }
  kind.validate();
  const Complex off(r.x, r.y);
  ComplexOperator m(2, 2);
  switch (kind.type) {
    case ChannelType::kIdentity:
      m << 1.0 + r.z, off, std::conj(off), 1.0 - r.z;
      break;
    case ChannelType::kAmplitudeRelaxation: {
      const double decay = std::exp(-kind.value);
      const double half = std::exp(-kind.value / 2.0);
      m << 1.0 + r.z, off * half, std::conj(off) * half, 1.0 - r.z * (2.0 * decay - 1.0);
      break;
    }
    case ChannelType::kPureDephasing: {
      const double decay = std::exp(-kind.value);
      m << 1.0 + r.z, off * decay, std::conj(off) * decay, 1.0 - r.z;
      break;
    }
    case ChannelType::kBitFlip: {
      const double f = 1.0 - 2.0 * kind.value;
      const Complex o(r.x, r.y * f);
      m << 1.0 + r.z * f, o, std::conj(o), 1.0 - r.z * f;
      break;
    }
    case ChannelType::kPhaseFlip: {
      const double f = 1.0 - 2.0 * kind.value;
      m << 1.0 + r.z, off * f, std::conj(off) * f, 1.0 - r.z;
      break;
    }
  }
  return 0.5 * m;
}

}  // namespace noisytomo
