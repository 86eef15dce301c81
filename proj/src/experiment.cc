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

#include "noisytomo/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <set>
#include <sstream>

#include "noisytomo/stats.h"
#include "noisytomo/svg.h"

namespace noisytomo {

namespace {

constexpr std::uint64_t kTheorySeedIndex = 0xffffffffffffffffULL;

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + key, "missing");
  return j.at(key);
}

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::int64_t get_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>())) {
    throw ConfigError(path, "expected an integer");
  }
  return j.is_number_integer() ? j.get<std::int64_t>() : static_cast<std::int64_t>(j.get<double>());
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

ChannelConfig channel_config_from_json(const Json& j, const std::string& path) {
  ChannelConfig out;
  if (j.is_object() && j.contains("kind") && j.at("kind") == "kraus") {
    const QuantumChannel ch = channel_from_json(j, path);  // validates
    out.kraus = ch.kraus();
    out.label = ch.label();
    return out;
  }
  out.kind = channel_kind_from_json(j, path);
  return out;
}

Json channel_config_to_json(const ChannelConfig& c) {
  if (c.kind) return channel_kind_to_json(*c.kind);
  Json ops = Json::array();
  for (const auto& e : c.kraus) ops.push_back(complex_matrix_to_json(e));
  return Json{{"kind", "kraus"}, {"label", c.label}, {"operators", ops}};
}

QuantumChannel resolve_channel(const ChannelConfig& c) {
  if (c.kind) return make_channel(*c.kind);
  return QuantumChannel(c.label, c.kraus);
}

PureState power_state(const PureState& single, int qubits) {
  PureState out = single;
  for (int q = 1; q < qubits; ++q) out = tensor(out, single);
  return out;
}

PureState resolve_state(const StateConfig& state, int qubits, const EffectiveMeasurement& fuzzy) {
  const int dim = 1 << qubits;
  if (state.preset.empty()) {
    if (state.amplitudes.size() != dim) {
      throw ConfigError("state", "expected " + std::to_string(dim) + " amplitudes, got " +
                                     std::to_string(state.amplitudes.size()));
    }
    try {
      return PureState(state.amplitudes);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("state", e.what());
    }
  }
  const std::string& p = state.preset;
  const double r2 = std::sqrt(0.5);
  auto qubit = [](Complex a, Complex b) {
    ComplexVector v(2);
    v << a, b;
    return PureState(v);
  };
  if (p == "zero") return power_state(qubit(1.0, 0.0), qubits);
  if (p == "one") return power_state(qubit(0.0, 1.0), qubits);
  if (p == "plus") return power_state(qubit(r2, r2), qubits);
  if (p == "minus") return power_state(qubit(r2, -r2), qubits);
  if (p == "plus_i") return power_state(qubit(r2, Complex(0.0, r2)), qubits);
  if (p == "fig4") {
    if (qubits != 2) throw ConfigError("state", "preset 'fig4' is a two-qubit state");
    ComplexVector v(4);
    v << 1.0, Complex(0.0, 1.0), 0.0, 1.0;
    return PureState(v);
  }
  if (p == "worst" || p == "best") {
    if (qubits != 1) throw ConfigError("state", "preset '" + p + "' needs a single-qubit protocol");
    const BlochMap map = bloch_loss_map(fuzzy);
    const BlochExtremum& e = p == "worst" ? map.max : map.min;
    return state_from_angles(e.theta, e.phi);
  }
  throw ConfigError("state", "unknown state preset '" + p + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  static const std::set<std::string> known{
      "protocol", "qubits",      "rotation",   "channel",        "channels",
      "state",    "n",           "trials",     "master_seed",    "output_dir",
      "sampling", "exact_probabilities",       "bins",           "theory_samples",
      "reconstruction"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError(key, "unknown field");
  }

  ExperimentConfig cfg;
  const Json& proto = require(j, "protocol", "");
  std::string kind_name;
  if (proto.is_string()) {
    kind_name = proto.get<std::string>();
  } else if (proto.is_object()) {
    kind_name = get_string(require(proto, "kind", "protocol."), "protocol.kind");
    if (proto.contains("qubits")) cfg.qubits = static_cast<int>(get_integer(proto.at("qubits"), "protocol.qubits"));
    if (proto.contains("rotation")) {
      const Json& rot = proto.at("rotation");
      const Json& axis = require(rot, "axis", "protocol.rotation.");
      if (!axis.is_array() || axis.size() != 3) throw ConfigError("protocol.rotation.axis", "expected [x, y, z]");
      RotationConfig r;
      r.axis = BlochVector{get_number(axis[0], "protocol.rotation.axis[0]"),
                           get_number(axis[1], "protocol.rotation.axis[1]"),
                           get_number(axis[2], "protocol.rotation.axis[2]")};
      if (!(r.axis.norm() > 0.0)) throw ConfigError("protocol.rotation.axis", "axis must be non-zero");
      if (std::abs(r.axis.norm() - 1.0) > 1e-12) r.axis = r.axis.normalized();
      r.angle = get_number(require(rot, "angle", "protocol.rotation."), "protocol.rotation.angle");
      cfg.rotation = r;
    }
  } else {
    throw ConfigError("protocol", "expected a protocol name or object");
  }
  const auto kind = parse_protocol_kind(kind_name);
  if (!kind) throw ConfigError(proto.is_string() ? "protocol" : "protocol.kind", "unknown protocol '" + kind_name + "'");
  cfg.protocol = *kind;
  if (j.contains("qubits")) cfg.qubits = static_cast<int>(get_integer(j.at("qubits"), "qubits"));
  if (cfg.qubits < 1) throw ConfigError("qubits", "must be at least 1");

  if (j.contains("channel") && j.contains("channels")) {
    throw ConfigError("channel", "give either 'channel' or 'channels', not both");
  }
  if (j.contains("channel")) {
    cfg.channels.push_back(channel_config_from_json(j.at("channel"), "channel"));
  } else if (j.contains("channels")) {
    const Json& chs = j.at("channels");
    if (!chs.is_array()) throw ConfigError("channels", "expected an array");
    for (std::size_t i = 0; i < chs.size(); ++i) {
      cfg.channels.push_back(channel_config_from_json(chs[i], "channels[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("state")) {
    const Json& st = j.at("state");
    if (st.is_string()) {
      cfg.state = {st.get<std::string>(), {}};
    } else if (st.is_array()) {
      cfg.state = {"", complex_vector_from_json(st, "state")};
    } else if (st.is_object() && st.contains("amplitudes")) {
      cfg.state = {"", complex_vector_from_json(st.at("amplitudes"), "state.amplitudes")};
    } else {
      throw ConfigError("state", "expected a preset name or an amplitude list");
    }
  }

  if (j.contains("n")) cfg.n = get_number(j.at("n"), "n");
  if (!(cfg.n >= 1.0)) throw ConfigError("n", "sample size must be at least 1");
  if (j.contains("trials")) cfg.trials = static_cast<int>(get_integer(j.at("trials"), "trials"));
  if (cfg.trials < 1) throw ConfigError("trials", "must be at least 1");
  if (j.contains("master_seed")) {
    const Json& s = j.at("master_seed");
    if (!s.is_number_integer()) throw ConfigError("master_seed", "expected an integer");
    cfg.master_seed = s.is_number_unsigned() ? s.get<std::uint64_t>()
                                             : static_cast<std::uint64_t>(s.get<std::int64_t>());
  }
  if (j.contains("output_dir")) cfg.output_dir = get_string(j.at("output_dir"), "output_dir");
  if (j.contains("sampling")) {
    const auto model = parse_sampling_model(get_string(j.at("sampling"), "sampling"));
    if (!model) throw ConfigError("sampling", "expected 'multinomial' or 'poisson'");
    cfg.sampling = *model;
  }
  if (cfg.sampling == SamplingModel::kMultinomial && std::floor(cfg.n) != cfg.n) {
    throw ConfigError("n", "multinomial sampling needs an integer sample size");
  }
  if (j.contains("exact_probabilities")) {
    cfg.exact_probabilities = get_bool(j.at("exact_probabilities"), "exact_probabilities");
  }
  if (j.contains("bins")) cfg.bins = static_cast<int>(get_integer(j.at("bins"), "bins"));
  if (cfg.bins < 0) throw ConfigError("bins", "must be non-negative");
  if (j.contains("theory_samples")) {
    const auto v = get_integer(j.at("theory_samples"), "theory_samples");
    if (v < 1) throw ConfigError("theory_samples", "must be at least 1");
    cfg.theory_samples = static_cast<std::size_t>(v);
  }
  if (j.contains("reconstruction")) {
    const Json& r = j.at("reconstruction");
    if (!r.is_object()) throw ConfigError("reconstruction", "expected an object");
    if (r.contains("step")) cfg.reconstruction.step = get_number(r.at("step"), "reconstruction.step");
    if (!(cfg.reconstruction.step > 0.0 && cfg.reconstruction.step <= 1.0)) {
      throw ConfigError("reconstruction.step", "must lie in (0, 1]");
    }
    if (r.contains("max_iterations")) {
      cfg.reconstruction.max_iterations =
          static_cast<int>(get_integer(r.at("max_iterations"), "reconstruction.max_iterations"));
    }
    if (r.contains("tolerance")) {
      cfg.reconstruction.tolerance = get_number(r.at("tolerance"), "reconstruction.tolerance");
    }
  }
  return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json proto{{"kind", std::string(to_string(cfg.protocol))}, {"qubits", cfg.qubits}};
  if (cfg.rotation) {
    proto["rotation"] = Json{{"axis", {cfg.rotation->axis.x, cfg.rotation->axis.y, cfg.rotation->axis.z}},
                             {"angle", cfg.rotation->angle}};
  }
  Json channels = Json::array();
  for (const auto& c : cfg.channels) channels.push_back(channel_config_to_json(c));
  Json state = cfg.state.preset.empty() ? complex_vector_to_json(cfg.state.amplitudes) : Json(cfg.state.preset);
  return Json{{"protocol", proto},
              {"channels", channels},
              {"state", state},
              {"n", cfg.n},
              {"trials", cfg.trials},
              {"master_seed", cfg.master_seed},
              {"output_dir", cfg.output_dir},
              {"sampling", std::string(to_string(cfg.sampling))},
              {"exact_probabilities", cfg.exact_probabilities},
              {"bins", cfg.bins},
              {"theory_samples", cfg.theory_samples},
              {"reconstruction",
               {{"step", cfg.reconstruction.step},
                {"max_iterations", cfg.reconstruction.max_iterations},
                {"tolerance", cfg.reconstruction.tolerance}}}};
}

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg) {
  Protocol protocol = build_protocol(cfg.protocol, cfg.n);
  if (cfg.rotation) protocol = rotate_protocol(protocol, cfg.rotation->axis, cfg.rotation->angle);
  try {
    if (cfg.qubits > 1) protocol = tensor_protocol(protocol, cfg.qubits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("qubits", e.what());
  }
  const int dim = protocol.dim();

  std::vector<QuantumChannel> per_qubit;
  if (cfg.channels.empty()) {
    per_qubit.push_back(make_channel(ChannelKind::identity()));
  } else {
    for (const auto& c : cfg.channels) per_qubit.push_back(resolve_channel(c));
  }
  std::optional<QuantumChannel> channel;
  if (per_qubit.size() == 1 && per_qubit.front().dim() == dim) {
    channel = per_qubit.front();
  } else if (per_qubit.size() == 1 && per_qubit.front().dim() == 2) {
    channel = tensor_channel(std::vector<QuantumChannel>(static_cast<std::size_t>(cfg.qubits), per_qubit.front()));
  } else if (per_qubit.size() == static_cast<std::size_t>(cfg.qubits)) {
    for (std::size_t q = 0; q < per_qubit.size(); ++q) {
      if (per_qubit[q].dim() != 2) {
        throw ConfigError("channels[" + std::to_string(q) + "]", "per-qubit channels must act on one qubit");
      }
    }
    channel = tensor_channel(per_qubit);
  } else {
    throw ConfigError("channels", "expected one channel or one per qubit (" + std::to_string(cfg.qubits) + ")");
  }

  EffectiveMeasurement clear = measurement_operators(protocol);
  EffectiveMeasurement fuzzy = fold_channel(clear, *channel);
  PureState truth = resolve_state(cfg.state, cfg.qubits, fuzzy);
  return ExperimentSetup{std::move(protocol), std::move(*channel), std::move(clear), std::move(fuzzy),
                         std::move(truth)};
}

TheoryReport theory_report(const ExperimentSetup& setup) {
  const InformationMatrix info = information_matrix(setup.truth, setup.fuzzy);
  TheoryReport out;
  out.spectrum = loss_spectrum(info);
  out.moments = loss_moments(out.spectrum);
  out.scaled_loss = scaled_loss(out.spectrum);
  out.nu = 2 * setup.truth.dim() - 2;
  out.nu_h = 2 * setup.truth.dim() - 1;
  out.skipped_rows = info.skipped_rows;
  return out;
}

Json theory_to_json(const TheoryReport& theory) {
  return Json{{"d", theory.spectrum.d},
              {"mean_loss", theory.moments.mean},
              {"variance_loss", theory.moments.variance},
              {"L", theory.scaled_loss},
              {"nu", theory.nu},
              {"nu_H", theory.nu_h},
              {"excluded_zero_eigenvalue", theory.spectrum.excluded_zero},
              {"excluded_max_eigenvalue", theory.spectrum.excluded_max},
              {"skipped_rows", theory.skipped_rows}};
}

ExperimentSummary summarize(const std::vector<TrialRecord>& trials, const TheoryReport& theory,
                            const std::vector<double>& theory_samples, SamplingModel model,
                            int dim) {
  ExperimentSummary s;
  std::vector<double> losses;
  std::vector<double> chi2;
  for (const auto& t : trials) {
    if (!t.ok()) {
      ++s.failed;
      continue;
    }
    ++s.completed;
    if (t.converged) ++s.converged;
    losses.push_back(t.loss);
    chi2.push_back(t.chi2);
  }
  s.theoretical_mean = theory.moments.mean;
  s.theoretical_variance = theory.moments.variance;
  s.chi2_expected_dof = model == SamplingModel::kPoisson ? 2 * dim - 1 : 2 * dim - 2;
  if (losses.empty()) return s;
  s.empirical_mean = mean(losses);
  s.empirical_variance = sample_variance(losses);
  s.standard_error = std::sqrt(s.empirical_variance / static_cast<double>(losses.size()));
  s.mean_z = s.standard_error > 0.0 ? (s.empirical_mean - s.theoretical_mean) / s.standard_error : 0.0;
  s.chi2_mean = mean(chi2);
  if (!theory_samples.empty()) s.ks_distance = ks_distance(losses, theory_samples);
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
  const ExperimentSetup setup = prepare_experiment(cfg);
  ExperimentResult result;
  result.config = cfg;
  result.theory = theory_report(setup);
  const InformationMatrix info = information_matrix(setup.truth, setup.fuzzy);

  result.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(result.trials.size(), resolve_thread_count(threads), [&](std::size_t i) {
    TrialRecord& rec = result.trials[i];
    rec.index = i;
    rec.seed = derive_seed(cfg.master_seed, i);
    try {
      const CountVector counts = cfg.exact_probabilities
                                     ? expected_counts(setup.fuzzy, setup.truth)
                                     : sample_counts(setup.fuzzy, setup.truth, rec.seed, cfg.sampling);
      rec.total_counts = counts.total();
      const ReconstructionResult r = reconstruct(counts, setup.fuzzy, cfg.reconstruction);
      rec.fidelity = fidelity(setup.truth, r.estimate);
      rec.loss = std::max(0.0, 1.0 - rec.fidelity);
      rec.chi2 = chi2_statistic(setup.truth, r.unnormalized_estimate(), info);
      rec.converged = r.converged;
      rec.iterations = r.iterations;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });

  result.theory_samples = sample_loss_distribution(result.theory.spectrum, cfg.theory_samples,
                                                   derive_seed(cfg.master_seed, kTheorySeedIndex));
  result.summary = summarize(result.trials, result.theory, result.theory_samples, cfg.sampling,
                             setup.truth.dim());
  return result;
}

Json result_to_json(const ExperimentResult& result) {
  const ExperimentSummary& s = result.summary;
  Json trials = Json::array();
  for (const auto& t : result.trials) {
    Json jt{{"index", t.index},       {"seed", t.seed},         {"fidelity", t.fidelity},
            {"loss", t.loss},         {"chi2", t.chi2},         {"converged", t.converged},
            {"iterations", t.iterations}, {"total_counts", t.total_counts}};
    if (!t.ok()) jt["error"] = t.error;
    trials.push_back(std::move(jt));
  }
  return Json{{"config", config_to_json(result.config)},
              {"theory", theory_to_json(result.theory)},
              {"summary",
               {{"completed", s.completed},
                {"failed", s.failed},
                {"converged", s.converged},
                {"empirical_mean_loss", s.empirical_mean},
                {"empirical_variance_loss", s.empirical_variance},
                {"standard_error", s.standard_error},
                {"theoretical_mean_loss", s.theoretical_mean},
                {"theoretical_variance_loss", s.theoretical_variance},
                {"mean_z", s.mean_z},
                {"ks_distance", s.ks_distance},
                {"chi2_mean", s.chi2_mean},
                {"chi2_expected_dof", s.chi2_expected_dof}}},
              {"trials", trials}};
}

std::string trials_to_csv(const std::vector<TrialRecord>& trials) {
  std::ostringstream out;
  out << "trial,seed,fidelity,loss,chi2,converged,iterations,total_counts,error\n";
  for (const auto& t : trials) {
    out << t.index << ',' << t.seed << ',' << format_double(t.fidelity) << ','
        << format_double(t.loss) << ',' << format_double(t.chi2) << ',' << (t.converged ? 1 : 0)
        << ',' << t.iterations << ',' << t.total_counts << ',';
    std::string err = t.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << err << '\n';
  }
  return out.str();
}

void write_experiment_outputs(const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(result.config.output_dir);
  fs::create_directories(dir);
  write_text_file((dir / "result.json").string(), result_to_json(result).dump(2) + "\n");
  write_text_file((dir / "trials.csv").string(), trials_to_csv(result.trials));

  std::vector<double> losses;
  for (const auto& t : result.trials) {
    if (t.ok()) losses.push_back(t.loss);
  }
  if (!losses.empty()) {
    const int bins = result.config.bins > 0 ? result.config.bins : freedman_diaconis_bins(losses);
    // Range covers the bulk of both distributions; the far theoretical tail is cut.
    std::vector<double> sorted_theory = result.theory_samples;
    std::sort(sorted_theory.begin(), sorted_theory.end());
    double hi = *std::max_element(losses.begin(), losses.end());
    if (!sorted_theory.empty()) {
      hi = std::max(hi, sorted_theory[static_cast<std::size_t>(0.995 * (sorted_theory.size() - 1))]);
    }
    if (!(hi > 0.0)) hi = 1e-12;
    const Histogram emp = make_histogram(losses, 0.0, hi, bins);
    const Histogram theo = make_histogram(result.theory_samples, 0.0, hi, bins);
    std::ostringstream csv;
    csv << "loss,empirical_density,theoretical_density\n";
    for (std::size_t i = 0; i < emp.density.size(); ++i) {
      csv << format_double(emp.center(i)) << ',' << format_double(emp.density[i]) << ','
          << format_double(theo.density[i]) << '\n';
    }
    write_text_file((dir / "loss_hist.csv").string(), csv.str());
    std::ostringstream title;
    title << "Fidelity loss, " << to_string(result.config.protocol) << " (" << result.trials.size()
          << " trials, n=" << result.config.n << ")";
    write_text_file((dir / "loss_hist.svg").string(), loss_histogram_svg(emp, theo, title.str()));
  }

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_text_file((dir / "metadata.json").string(),
                  Json{{"written_at", stamp}}.dump(2) + "\n");
}

}  // namespace noisytomo
