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

#include "noisytomo/serialization.h"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace noisytomo {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

}  // namespace

Json complex_vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

ComplexVector complex_vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of [re, im]");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& e = j[i];
    if (e.is_number()) {
      v[static_cast<Eigen::Index>(i)] = e.get<double>();
    } else if (e.is_array() && e.size() == 2) {
      v[static_cast<Eigen::Index>(i)] = Complex(number_at(e[0], p + "[0]"), number_at(e[1], p + "[1]"));
    } else {
      throw ConfigError(p, "expected [re, im]");
    }
  }
  return v;
}

Json complex_matrix_to_json(const ComplexOperator& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(complex_vector_to_json(m.row(r).transpose()));
  return out;
}

ComplexOperator complex_matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  ComplexOperator m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string p = path + "[" + std::to_string(r) + "]";
    const ComplexVector row = complex_vector_from_json(j[static_cast<std::size_t>(r)], p);
    if (row.size() != rows) throw ConfigError(p, "matrix must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

Json protocol_to_json(const Protocol& protocol) {
  Json rows = Json::array();
  for (const auto& r : protocol.rows()) rows.push_back(complex_vector_to_json(r));
  return Json{{"label", protocol.label()},
              {"rows", rows},
              {"weights", protocol.weights()},
              {"n", protocol.n()}};
}

Protocol protocol_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("rows")) throw ConfigError(path + ".rows", "missing");
  if (!j.contains("weights")) throw ConfigError(path + ".weights", "missing");
  if (!j.contains("n")) throw ConfigError(path + ".n", "missing");
  std::vector<ComplexVector> rows;
  const Json& jr = j.at("rows");
  if (!jr.is_array() || jr.empty()) throw ConfigError(path + ".rows", "expected a non-empty array");
  for (std::size_t i = 0; i < jr.size(); ++i) {
    rows.push_back(complex_vector_from_json(jr[i], path + ".rows[" + std::to_string(i) + "]"));
  }
  std::vector<double> weights;
  const Json& jw = j.at("weights");
  if (!jw.is_array()) throw ConfigError(path + ".weights", "expected an array");
  for (std::size_t i = 0; i < jw.size(); ++i) {
    weights.push_back(number_at(jw[i], path + ".weights[" + std::to_string(i) + "]"));
  }
  const double n = number_at(j.at("n"), path + ".n");
  const std::string label = j.value("label", std::string("custom"));
  try {
    return Protocol(label, std::move(rows), std::move(weights), n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  } catch (const NumericalError& e) {
    throw ConfigError(path, e.what());
  }
}

Json channel_kind_to_json(const ChannelKind& kind) {
  Json out{{"kind", std::string(to_string(kind.type))}};
  if (kind.type != ChannelType::kIdentity) out[std::string(kind.parameter_name())] = kind.value;
  return out;
}

ChannelKind channel_kind_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_channel_spec(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(path + ".kind", "expected a channel kind string");
  }
  const auto type = parse_channel_type(j.at("kind").get<std::string>());
  if (!type) throw ConfigError(path + ".kind", "unknown channel kind '" + j.at("kind").get<std::string>() + "'");
  ChannelKind kind{*type, 0.0};
  if (kind.type != ChannelType::kIdentity) {
    const std::string key(kind.parameter_name());
    if (!j.contains(key)) throw ConfigError(path + "." + key, "missing");
    kind.value = number_at(j.at(key), path + "." + key);
  }
  try {
    kind.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + "." + std::string(kind.parameter_name()), e.what());
  }
  return kind;
}

QuantumChannel channel_from_json(const Json& j, const std::string& path) {
  if (j.is_object() && j.contains("kind") && j.at("kind") == "kraus") {
    if (!j.contains("operators") || !j.at("operators").is_array() || j.at("operators").empty()) {
      throw ConfigError(path + ".operators", "expected a non-empty list of matrices");
    }
    std::vector<ComplexOperator> kraus;
    const Json& ops = j.at("operators");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      kraus.push_back(complex_matrix_from_json(ops[i], path + ".operators[" + std::to_string(i) + "]"));
    }
    const std::string label = j.value("label", std::string("kraus"));
    try {
      return QuantumChannel(label, std::move(kraus));
    } catch (const std::exception& e) {
      throw ConfigError(path + ".operators", e.what());
    }
  }
  return make_channel(channel_kind_from_json(j, path));
}

std::string counts_to_csv(const CountVector& counts) {
  std::ostringstream out;
  out << "row,k,t\n";
  for (std::size_t j = 0; j < counts.counts.size(); ++j) {
    out << j << ',' << counts.counts[j] << ',' << format_double(counts.weights[j]) << '\n';
  }
  return out.str();
}

CountVector counts_from_csv(const std::string& text, double n) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "row,k,t") throw ConfigError("counts", "missing header row,k,t");
  CountVector out;
  out.n = n;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      throw ConfigError("counts line " + std::to_string(lineno), "expected three fields");
    }
    try {
      out.counts.push_back(std::stoll(b));
      out.weights.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw ConfigError("counts line " + std::to_string(lineno), "bad number");
    }
  }
  return out;
}

Json reconstruction_to_json(const ReconstructionResult& result) {
  return Json{{"estimate", complex_vector_to_json(result.estimate.amplitudes())},
              {"norm_squared", result.norm_squared},
              {"iterations", result.iterations},
              {"converged", result.converged},
              {"final_residual", result.final_residual},
              {"log_likelihood", result.log_likelihood},
              {"regularized_cells", result.regularized_cells}};
}

std::string bloch_map_to_csv(const BlochMap& map) {
  std::ostringstream out;
  out << "theta,phi,L,regular\n";
  for (const auto& p : map.grid) {
    out << format_double(p.theta) << ',' << format_double(p.phi) << ',' << format_double(p.loss)
        << ',' << (p.regular ? 1 : 0) << '\n';
  }
  return out.str();
}

Json bloch_map_summary(const BlochMap& map) {
  auto extremum = [](const BlochExtremum& e) {
    return Json{{"L", e.loss}, {"theta", e.theta}, {"phi", e.phi}};
  };
  return Json{{"protocol", map.protocol_label},
              {"channel", map.channel_label},
              {"grid_points", map.grid.size()},
              {"irregular_points", map.irregular_points},
              {"L_min", extremum(map.min)},
              {"L_max", extremum(map.max)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace noisytomo
