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

#include <cstring>

#include "gtest/gtest.h"
#include "noisytomo/experiment.h"
#include "test_util.h"

using namespace noisytomo;
using namespace noisytomo::testing;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

std::string error_path(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(ProtocolJson, round_trip_is_bit_identical) {
  std::mt19937_64 rng(51);
  for (ProtocolKind kind : {ProtocolKind::kTetrahedron, ProtocolKind::kCube, ProtocolKind::kOctahedron}) {
    const Protocol p = rotate_protocol(build_protocol(kind, 4000.0), random_direction(rng), 0.731);
    const std::string text = protocol_to_json(p).dump();
    const Protocol q = protocol_from_json(Json::parse(text));
    ASSERT_EQ(p.size(), q.size());
    EXPECT_EQ(q.label(), p.label());
    EXPECT_TRUE(bit_equal(q.n(), p.n()));
    for (int j = 0; j < p.size(); ++j) {
      EXPECT_TRUE(bit_equal(q.weights()[j], p.weights()[j]));
      for (int a = 0; a < p.dim(); ++a) {
        EXPECT_TRUE(bit_equal(q.rows()[j][a].real(), p.rows()[j][a].real()));
        EXPECT_TRUE(bit_equal(q.rows()[j][a].imag(), p.rows()[j][a].imag()));
      }
    }
    EXPECT_EQ(protocol_to_json(q).dump(), text);
  }
}

TEST(ProtocolJson, errors_name_the_field) {
  Json j = protocol_to_json(build_protocol(ProtocolKind::kCube, 1.0));
  j["rows"][2][1] = "oops";
  EXPECT_EQ(error_path([&] { protocol_from_json(j, "protocol"); }), "protocol.rows[2][1]");
  Json k = protocol_to_json(build_protocol(ProtocolKind::kCube, 1.0));
  k.erase("weights");
  EXPECT_EQ(error_path([&] { protocol_from_json(k, "protocol"); }), "protocol.weights");
  Json broken = protocol_to_json(build_protocol(ProtocolKind::kCube, 1.0));
  broken["weights"][0] = 5.0;
  EXPECT_THROW(protocol_from_json(broken), ConfigError);
}

TEST(ChannelJson, kinds_round_trip) {
  for (const ChannelKind& k : {ChannelKind::identity(), ChannelKind::amplitude_relaxation(0.8),
                               ChannelKind::pure_dephasing(0.5), ChannelKind::bit_flip(0.1),
                               ChannelKind::phase_flip(0.25)}) {
    const ChannelKind back = channel_kind_from_json(Json::parse(channel_kind_to_json(k).dump()));
    EXPECT_EQ(back.type, k.type);
    EXPECT_TRUE(bit_equal(back.value, k.value));
  }
  const Json j = channel_kind_to_json(ChannelKind::amplitude_relaxation(0.8));
  EXPECT_EQ(j["kind"], "amplitude_relaxation");
  EXPECT_EQ(j["t_over_T1"], 0.8);
}

TEST(ChannelJson, string_spec_and_errors) {
  EXPECT_EQ(channel_kind_from_json(Json("dephasing:t=0.8T2")).type, ChannelType::kPureDephasing);
  EXPECT_EQ(error_path([] { channel_kind_from_json(Json{{"kind", "bit_flip"}}, "channel"); }), "channel.p");
  EXPECT_EQ(error_path([] { channel_kind_from_json(Json{{"kind", "bit_flip"}, {"p", 0.7}}, "channel"); }),
            "channel.p");
  EXPECT_EQ(error_path([] { channel_kind_from_json(Json{{"kind", "nope"}}, "channel"); }), "channel.kind");
}

TEST(ChannelJson, raw_kraus_checked_at_load) {
  const double g = 0.3;
  // Operators are given row by row as lists of [re, im].
  Json ops = Json::array();
  ops.push_back(Json::array({Json::array({Json::array({1, 0}), Json::array({0, 0})}),
                             Json::array({Json::array({0, 0}), Json::array({std::sqrt(1 - g), 0})})}));
  ops.push_back(Json::array({Json::array({Json::array({0, 0}), Json::array({std::sqrt(g), 0})}),
                             Json::array({Json::array({0, 0}), Json::array({0, 0})})}));
  const QuantumChannel ch = channel_from_json(Json{{"kind", "kraus"}, {"operators", ops}});
  EXPECT_EQ(ch.kraus().size(), 2u);
  Json bad_ops = ops;
  bad_ops[0][1][1] = Json::array({0.5, 0});
  EXPECT_EQ(error_path([&] { channel_from_json(Json{{"kind", "kraus"}, {"operators", bad_ops}}, "channel"); }),
            "channel.operators");
}

TEST(CountsCsv, round_trip) {
  CountVector k;
  k.counts = {10, 0, 2000, 5};
  k.weights = {0.1, 1.0 / 3.0, 2.5, 1e-7};
  k.n = 7.0;
  const CountVector back = counts_from_csv(counts_to_csv(k), 7.0);
  EXPECT_EQ(back.counts, k.counts);
  for (std::size_t j = 0; j < k.weights.size(); ++j) EXPECT_TRUE(bit_equal(back.weights[j], k.weights[j]));
  EXPECT_THROW(counts_from_csv("a,b\n1,2\n", 1.0), ConfigError);
}

TEST(ReconstructionJson, amplitudes_as_pairs) {
  const auto m = measurement_operators(build_protocol(ProtocolKind::kCube, 1000.0));
  const auto r = reconstruct(expected_counts(m, PureState::basis(2, 0)), m);
  const Json j = reconstruction_to_json(r);
  ASSERT_EQ(j["estimate"].size(), 2u);
  EXPECT_EQ(j["estimate"][0].size(), 2u);
  EXPECT_TRUE(j["converged"].get<bool>());
}

TEST(ConfigJson, round_trip) {
  const Json in = Json::parse(R"({
    "protocol": {"kind": "cube", "qubits": 2, "rotation": {"axis": [1, 1, 0], "angle": 0.785}},
    "channels": [{"kind": "amplitude_relaxation", "t_over_T1": 0.5}, "dephasing:t=0.2T2"],
    "state": [[1, 0], [0, 1], [0, 0], [1, 0]],
    "n": 5000, "trials": 7, "master_seed": 12345678901234, "output_dir": "out",
    "sampling": "poisson", "bins": 30, "theory_samples": 1000,
    "reconstruction": {"step": 0.25, "max_iterations": 500, "tolerance": 1e-11}
  })");
  const ExperimentConfig cfg = config_from_json(in);
  EXPECT_EQ(cfg.protocol, ProtocolKind::kCube);
  EXPECT_EQ(cfg.qubits, 2);
  ASSERT_TRUE(cfg.rotation.has_value());
  EXPECT_NEAR(cfg.rotation->axis.x, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(cfg.channels.size(), 2u);
  EXPECT_EQ(cfg.sampling, SamplingModel::kPoisson);
  EXPECT_EQ(cfg.master_seed, 12345678901234u);
  const Json out = config_to_json(cfg);
  EXPECT_EQ(config_to_json(config_from_json(out)).dump(), out.dump());
}

TEST(ConfigJson, errors_carry_field_paths) {
  auto path_of = [](const char* text) { return error_path([&] { config_from_json(Json::parse(text)); }); };
  EXPECT_EQ(path_of(R"({"n": 10})"), "protocol");
  EXPECT_EQ(path_of(R"({"protocol": "dodeca"})"), "protocol");
  EXPECT_EQ(path_of(R"({"protocol": {"kind": "cube", "rotation": {"axis": [1, 0], "angle": 1}}})"),
            "protocol.rotation.axis");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "n": 0})"), "n");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "trials": 0})"), "trials");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "channels": [{"kind": "bit_flip", "p": 0.9}]})"), "channels[0].p");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "state": [[1, 0], [0, "x"]]})"), "state[1][1]");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "sampling": "gaussian"})"), "sampling");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "frobnicate": 1})"), "frobnicate");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "n": 10.5})"), "n");
  EXPECT_EQ(path_of(R"({"protocol": "cube", "reconstruction": {"step": 2}})"), "reconstruction.step");
}
