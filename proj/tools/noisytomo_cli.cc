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


// Command-line front end: protocol inspection, Monte Carlo simulation,
// Bloch-sphere loss maps and the analytic loss distribution.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noisytomo/experiment.h"
#include "noisytomo/selfcheck.h"
#include "noisytomo/serialization.h"
#include "noisytomo/svg.h"

namespace {

using namespace noisytomo;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::optional<RotationConfig> parse_rotation(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--rotate", "not a number: '" + item + "'");
    }
  }
  if (v.size() != 4) throw ConfigError("--rotate", "expected ax,ay,az,angle");
  BlochVector axis{v[0], v[1], v[2]};
  if (!(axis.norm() > 0.0)) throw ConfigError("--rotate", "axis must be non-zero");
  return RotationConfig{axis.normalized(), v[3]};
}

ProtocolKind protocol_kind_or_throw(const std::string& name) {
  const auto kind = parse_protocol_kind(name);
  if (!kind) throw ConfigError("protocol", "unknown protocol '" + name + "'");
  return *kind;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string complex_str(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.6f%+.6fi", z.real(), z.imag());
  return buf;
}

int cmd_protocol_show(const std::string& name, int qubits, const std::string& rotate, double n) {
  Protocol p = build_protocol(protocol_kind_or_throw(name), n);
  if (const auto rot = parse_rotation(rotate)) p = rotate_protocol(p, rot->axis, rot->angle);
  if (qubits < 1) throw ConfigError("--qubits", "must be at least 1");
  if (qubits > 1) {
    try {
      p = tensor_protocol(p, qubits);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--qubits", e.what());
    }
  }
  std::cout << "protocol " << p.label() << "  rows=" << p.size() << "  dim=" << p.dim() << "  n=" << fmt(p.n())
            << "\n";
  for (int j = 0; j < p.size(); ++j) {
    std::cout << "  " << j << ":";
    for (Eigen::Index a = 0; a < p.rows()[j].size(); ++a) std::cout << ' ' << complex_str(p.rows()[j][a]);
    std::cout << "   t=" << fmt(p.weights()[j]) << "\n";
  }
  std::cout << "unity residual " << fmt(unity_residual(p)) << "\n";
  return 0;
}

ExperimentConfig load_config(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), "invalid config");
  }
}

int cmd_simulate(const std::string& path, const std::string& out_dir, int threads) {
  ExperimentConfig cfg = load_config(path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const ExperimentResult result = run_experiment(cfg, threads);
  write_experiment_outputs(result);
  const ExperimentSummary& s = result.summary;
  std::cout << "trials " << s.completed << " completed, " << s.failed << " failed, " << s.converged
            << " converged\n";
  std::cout << "mean 1-F " << fmt(s.empirical_mean) << " (theory " << fmt(s.theoretical_mean) << ", z "
            << fmt(s.mean_z) << ")\n";
  std::cout << "variance " << fmt(s.empirical_variance) << " (theory " << fmt(s.theoretical_variance) << ")\n";
  std::cout << "KS distance " << fmt(s.ks_distance) << "\n";
  std::cout << "chi2 mean " << fmt(s.chi2_mean) << " (expected " << s.chi2_expected_dof << ")\n";
  std::cout << "wrote " << (std::filesystem::path(cfg.output_dir) / "result.json").string() << "\n";
  return s.failed > 0 && s.completed == 0 ? kExitNumerical : 0;
}

int cmd_theory(const std::string& path, bool as_json) {
  const ExperimentConfig cfg = load_config(path);
  const ExperimentSetup setup = prepare_experiment(cfg);
  const TheoryReport t = theory_report(setup);
  if (as_json) {
    std::cout << theory_to_json(t).dump(2) << "\n";
    return 0;
  }
  std::cout << "measurement " << setup.fuzzy.label() << "\n";
  std::cout << "d:";
  for (double d : t.spectrum.d) std::cout << ' ' << fmt(d);
  std::cout << "\n";
  std::cout << "mean 1-F " << fmt(t.moments.mean) << "\n";
  std::cout << "variance 1-F " << fmt(t.moments.variance) << "\n";
  std::cout << "L " << fmt(t.scaled_loss) << "\n";
  std::cout << "nu " << t.nu << "\n";
  std::cout << "nu_H " << t.nu_h << "\n";
  if (t.skipped_rows > 0) std::cout << "skipped rows " << t.skipped_rows << "\n";
  return 0;
}

int cmd_blochmap(const std::string& name, const std::string& channel_spec, const std::string& rotate,
                 const std::vector<int>& grid, const std::string& out_dir, bool refine) {
  Protocol p = build_protocol(protocol_kind_or_throw(name), 1.0);
  if (const auto rot = parse_rotation(rotate)) p = rotate_protocol(p, rot->axis, rot->angle);
  QuantumChannel channel = make_channel(ChannelKind::identity());
  try {
    channel = make_channel(parse_channel_spec(channel_spec));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--channel", e.what());
  }
  BlochMapOptions opts;
  if (!grid.empty()) {
    if (grid.size() != 2 || grid[0] < 2 || grid[1] < 1) throw ConfigError("--grid", "expected T,P with T>=2, P>=1");
    opts.theta_points = grid[0];
    opts.phi_points = grid[1];
  }
  opts.refine = refine;
  const BlochMap map = bloch_loss_map(p, channel, opts);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_text_file((dir / "blochmap.csv").string(), bloch_map_to_csv(map));
  write_text_file((dir / "blochmap.svg").string(), bloch_map_svg(map));
  write_text_file((dir / "blochmap.json").string(), bloch_map_summary(map).dump(2) + "\n");
  std::cout << "L_min " << fmt(map.min.loss) << " at theta=" << fmt(map.min.theta) << " phi=" << fmt(map.min.phi)
            << "\n";
  std::cout << "L_max " << fmt(map.max.loss) << " at theta=" << fmt(map.max.theta) << " phi=" << fmt(map.max.phi)
            << "\n";
  if (map.irregular_points > 0) std::cout << "irregular points " << map.irregular_points << "\n";
  return 0;
}

int cmd_selfcheck() {
  bool all = true;
  for (const CheckResult& r : run_selfcheck()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (deviation " << fmt(r.deviation)
              << ", tolerance " << fmt(r.tolerance) << ")\n";
    all = all && r.passed;
  }
  return all ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pure-state tomography with noisy measurements"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: NOISY_TOMO_THREADS or hardware)");

  auto* protocol = app.add_subcommand("protocol", "Inspect a measurement protocol");
  protocol->require_subcommand(1);
  auto* show = protocol->add_subcommand("show", "Print rows, weights and the unity residual");
  std::string show_kind;
  int show_qubits = 1;
  std::string show_rotate;
  double show_n = 1.0;
  show->add_option("kind", show_kind, "tetrahedron, cube or octahedron")->required();
  show->add_option("--qubits", show_qubits, "Tensor power");
  show->add_option("--rotate", show_rotate, "ax,ay,az,angle");
  show->add_option("--n", show_n, "Sample size used for the weights");

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  std::string sim_config;
  std::string sim_out;
  simulate->add_option("config", sim_config, "JSON config file")->required();
  simulate->add_option("--out", sim_out, "Override output_dir");

  auto* blochmap = app.add_subcommand("blochmap", "Map L over the Bloch sphere");
  std::string map_kind;
  std::string map_channel = "identity";
  std::string map_rotate;
  std::vector<int> map_grid;
  std::string map_out = ".";
  bool map_no_refine = false;
  blochmap->add_option("kind", map_kind, "tetrahedron, cube or octahedron")->required();
  blochmap->add_option("--channel", map_channel, "e.g. dephasing:t=0.8T2, amplitude:t=1.5T1, bitflip:p=0.1");
  blochmap->add_option("--rotate", map_rotate, "ax,ay,az,angle");
  blochmap->add_option("--grid", map_grid, "T,P grid size")->delimiter(',');
  blochmap->add_option("--out", map_out, "Output directory");
  blochmap->add_flag("--no-refine", map_no_refine, "Report raw grid extrema");

  auto* theory = app.add_subcommand("theory", "Analytic loss distribution for a config");
  std::string theory_config;
  bool theory_json = false;
  theory->add_option("config", theory_config, "JSON config file")->required();
  theory->add_flag("--json", theory_json, "Print JSON");

  auto* selfcheck = app.add_subcommand("selfcheck", "Run the cross-module consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (show->parsed()) return cmd_protocol_show(show_kind, show_qubits, show_rotate, show_n);
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out, threads);
    if (blochmap->parsed()) {
      return cmd_blochmap(map_kind, map_channel, map_rotate, map_grid, map_out, !map_no_refine);
    }
    if (theory->parsed()) return cmd_theory(theory_config, theory_json);
    if (selfcheck->parsed()) return cmd_selfcheck();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
