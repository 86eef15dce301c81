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

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "noisytomo/estimation.h"
#include "noisytomo/information.h"
#include "noisytomo/noise_channels.h"
#include "noisytomo/protocols.h"

namespace noisytomo {

using Json = nlohmann::json;

/// Malformed configuration or input document. `path` locates the offending
/// field, e.g. "channels[1].t_over_T1".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Complex numbers travel as [re, im] pairs.
Json complex_vector_to_json(const ComplexVector& v);
ComplexVector complex_vector_from_json(const Json& j, const std::string& path);
Json complex_matrix_to_json(const ComplexOperator& m);
ComplexOperator complex_matrix_from_json(const Json& j, const std::string& path);

/// {label, rows: [[[re,im],...],...], weights, n}
Json protocol_to_json(const Protocol& protocol);
Protocol protocol_from_json(const Json& j, const std::string& path = "protocol");

/// {"kind": "amplitude_relaxation", "t_over_T1": 0.8} and friends.
Json channel_kind_to_json(const ChannelKind& kind);
ChannelKind channel_kind_from_json(const Json& j, const std::string& path = "channel");
/// Accepts a named kind or {"kind": "kraus", "operators": [matrix, ...]};
/// raw Kraus sets are checked for trace preservation at load.
QuantumChannel channel_from_json(const Json& j, const std::string& path = "channel");

/// CSV with header "row,k,t".
std::string counts_to_csv(const CountVector& counts);
CountVector counts_from_csv(const std::string& text, double n);

Json reconstruction_to_json(const ReconstructionResult& result);

/// CSV with header "theta,phi,L,regular".
std::string bloch_map_to_csv(const BlochMap& map);
Json bloch_map_summary(const BlochMap& map);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace noisytomo
