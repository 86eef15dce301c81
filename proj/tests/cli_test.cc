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


// Drives the command-line binary end to end.

#include <cmath>
#include <cstdio>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(NOISYTOMO_CLI) + " " + args + " 2>&1";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("noisytomo_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

double value_after(const std::string& out, const std::string& key) {
  const auto pos = out.find(key);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(out.substr(pos + key.size()));
}

}  // namespace

TEST(Cli, selfcheck_passes) {
  const Outcome r = run("selfcheck");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, protocol_show) {
  const Outcome r = run("protocol show cube --qubits 2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("rows=36"), std::string::npos);
  EXPECT_LT(value_after(r.out, "unity residual "), 1e-10);
  EXPECT_EQ(run("protocol show cube --rotate 1,1,0,0.785398").code, 0);
  EXPECT_EQ(run("protocol show dodecahedron").code, 1);
  EXPECT_EQ(run("protocol show cube --rotate 1,1").code, 1);
}

TEST(Cli, theory_worst_tetrahedron) {
  const auto dir = scratch("theory");
  write(dir / "cfg.json", R"({"protocol": "tetrahedron", "state": "worst", "n": 4000})");
  const Outcome r = run("theory " + (dir / "cfg.json").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(value_after(r.out, "\nL "), 1.5, 0.03);
  EXPECT_NE(r.out.find("nu_H 3"), std::string::npos);
}

TEST(Cli, blochmap_writes_files) {
  const auto dir = scratch("blochmap");
  const Outcome r = run("blochmap cube --channel dephasing:t=0.8T2 --grid 31,60 --out " + dir.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(value_after(r.out, "L_min "), 4.09, 0.08);
  for (const char* f : {"blochmap.csv", "blochmap.svg", "blochmap.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(run("blochmap cube --channel warp:t=1").code, 1);
}

TEST(Cli, simulate_writes_outputs) {
  const auto dir = scratch("simulate");
  write(dir / "cfg.json", R"({"protocol": "tetrahedron", "channel": "dephasing:t=0.5T2", "state": "plus_i",
                             "n": 4000, "trials": 20, "theory_samples": 1000})");
  const Outcome r = run("simulate " + (dir / "cfg.json").string() + " --out " + (dir / "out").string());
  EXPECT_EQ(r.code, 0) << r.out;
  for (const char* f : {"result.json", "trials.csv", "loss_hist.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
}

TEST(Cli, exit_codes) {
  const auto dir = scratch("errors");
  write(dir / "bad.json", R"({"protocol": "cube", "n": -3})");
  Outcome r = run("theory " + (dir / "bad.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("n"), std::string::npos);
  write(dir / "broken.json", "{not json");
  EXPECT_EQ(run("simulate " + (dir / "broken.json").string()).code, 1);
  EXPECT_EQ(run("theory " + (dir / "missing.json").string()).code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  // Bit flips with p = ½ erase the y and z components: tomography becomes incomplete.
  write(dir / "incomplete.json", R"({"protocol": "cube", "channel": "bitflip:p=0.5", "state": "plus"})");
  r = run("theory " + (dir / "incomplete.json").string());
  EXPECT_EQ(r.code, 2) << r.out;
}
