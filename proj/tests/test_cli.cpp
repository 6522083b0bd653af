// Copyright 2026 The nvdfs Authors
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

// End-to-end runs of the command-line binary.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "nvdfs/nvdfs.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(NVDFS_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nvdfs_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kQuickPm = "optimize --method pm --T 4 --seed 7 --trials 2 --slices 200 "
                       "--options '{\"optimizer\": {\"nm_max_evaluations\": 60}}'";

}  // namespace

TEST(Cli, OptimizeResultResimulates) {
  const fs::path dir = scratch("opt");
  const Outcome o = run(std::string(kQuickPm) + " --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.out;
  const json result = json::parse(slurp(dir / "result.json"));
  const double best = result.at("best_fidelity").get<double>();

  nvdfs_params* p = nullptr;
  nvdfs_shape* s = nullptr;
  ASSERT_EQ(nvdfs_params_default(nullptr, &p), NVDFS_OK);
  ASSERT_EQ(nvdfs_shape_from_json(result.at("best_shape").dump().c_str(), &s), NVDFS_OK);
  double again = 0.0;
  ASSERT_EQ(nvdfs_fidelity(p, s, 4.0, "{\"n_slices\": 200}", &again), NVDFS_OK);
  EXPECT_EQ(again, best);
  nvdfs_shape_free(s);
  nvdfs_params_free(p);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "result_field.csv"));
}

TEST(Cli, SameSeedSameBytes) {
  const fs::path dir = scratch("repeat");
  std::string first[3];
  const char* files[3] = {"result.json", "result_field.csv", "result_trace.csv"};
  ASSERT_EQ(run(std::string(kQuickPm) + " --threads 1 --out " + dir.string()).code, 0);
  for (int i = 0; i < 3; ++i) first[i] = slurp(dir / files[i]);
  ASSERT_EQ(run(std::string(kQuickPm) + " --threads 2 --out " + dir.string()).code, 0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(slurp(dir / files[i]), first[i]) << files[i];
}

TEST(Cli, MissingSeedIsAnError) {
  const Outcome o = run("optimize --method pm --T 4 --out " + scratch("noseed").string());
  EXPECT_NE(o.code, 0);
  const json err = json::parse(o.out.substr(o.out.find('{')));
  EXPECT_EQ(err.at("error"), "InvalidArgument");
  EXPECT_NE(err.at("message").get<std::string>().find("seed"), std::string::npos);
}

TEST(Cli, BadFlagsAreRejected) {
  EXPECT_NE(run("simulate --T 4 --integrator euler").code, 0);
  EXPECT_NE(run("simulate --T banana").code, 0);
  EXPECT_NE(run("frobnicate").code, 0);
}

TEST(Cli, SweepWritesTable) {
  const fs::path dir = scratch("sweep");
  const Outcome o = run("sweep --method stirap --T 3..4 --seed 1 --trials 2 --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.out;
  std::ifstream in(dir / "sweep.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 3);  // header plus two durations
}

TEST(Cli, SimulateAndRobustnessMap) {
  const fs::path dir = scratch("map");
  ASSERT_EQ(run("simulate --T 16 --out " + dir.string()).code, 0);
  const json sim = json::parse(slurp(dir / "manifest.json"));
  EXPECT_NEAR(sim.at("summary").at("fidelity").get<double>(), 0.72, 0.01);
  std::ofstream(dir / "shape.json") << R"({"kind": "gaussian", "sigma_us": 0.5, "delay_us": 0.7})";
  const Outcome o = run("robustness map --shape " + (dir / "shape.json").string() +
                        " --T 4 --grid-delta -0.6,0.6,3 --grid-kappa -0.5,0.5,3 --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(dir / "map.csv"));
}
