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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "nvdfs/error.hpp"
#include "nvdfs/io.hpp"
#include "nvdfs/run.hpp"

using namespace nvdfs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nvdfs_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, ParamsRoundTrip) {
  SystemParams p = SystemParams::defaults();
  p.bx_gauss = 42.0;
  p.t2_nuclear2_us = std::numeric_limits<double>::infinity();
  const Json j = to_json(p);
  EXPECT_TRUE(j.at("T2n2_us").is_null());
  EXPECT_EQ(params_from_json(j), p);
  EXPECT_EQ(params_from_json(Json::parse(j.dump())), p);
}

TEST(Io, ParamsPartialAndConvention) {
  const SystemParams p = params_from_json(Json{{"Bx", 50.0}});
  EXPECT_EQ(p.bx_gauss, 50.0);
  EXPECT_EQ(p.hyperfine_1, SystemParams::defaults().hyperfine_1);
  const SystemParams a = params_from_json(Json{{"convention", "angular"}});
  EXPECT_EQ(a, SystemParams::defaults(CouplingConvention::angular));
  EXPECT_THROW(params_from_json(Json{{"Bq", 1.0}}), Error);
  EXPECT_THROW(params_from_json(Json{{"T2e_us", -3.0}}), Error);
  EXPECT_THROW(params_from_json(Json::array()), Error);
}

TEST(Io, ShapesRoundTrip) {
  std::vector<PulseShape> shapes(4);
  shapes[0].form = GaussianPulse{2.0, 1.5, 0.25};
  shapes[1].form = PiecewiseConstantPulse{{0.1, 0.2}, {0.3, -0.4}};
  shapes[2].form = CrabPulse{{{1, 2, 3, 4}}, {0.25}};
  shapes[3].form = PmPulse{{{1.0, 0.1 / 3.0, 2.0}, {0.5, -1.0, 3.5}}};
  shapes[3].omega_max = 2.5;
  shapes[3].boundary_exponent = 10.0;
  for (const PulseShape& s : shapes) {
    const PulseShape r = shape_from_json(Json::parse(to_json(s).dump()));
    EXPECT_EQ(to_json(r), to_json(s));
    EXPECT_STREQ(r.kind(), s.kind());
  }
  EXPECT_THROW(shape_from_json(Json{{"kind", "square"}}), Error);
  EXPECT_THROW(shape_from_json(Json{{"sigma_us", 1.0}}), Error);
}

TEST(Io, ResultRoundTrip) {
  OptimizationResult r;
  r.method = Method::crab;
  r.duration_us = 4.0;
  r.n_slices = 1000;
  r.best_shape.form = CrabPulse{{{0.1, 0.2, 0.3, 0.4}}, {-0.1}};
  r.best_fidelity = 0.68312345678901234;
  r.n_evaluations = 77;
  r.seed = 18446744073709551557ull;
  r.trials = {{1, 0.5, 40, false}, {2, 0.68312345678901234, 37, true}};
  r.best_trial = 1;
  const OptimizationResult b = result_from_json(Json::parse(to_json(r).dump()));
  EXPECT_EQ(to_json(b), to_json(r));
  EXPECT_EQ(b.best_fidelity, r.best_fidelity);
  EXPECT_EQ(b.seed, r.seed);
}

TEST(Io, OptimizerConfigOverrides) {
  const OptimizerConfig c = optimizer_config_from_json(Json{{"n_trials", 3}, {"delta", 0.2}, {"grape_slices", 40}});
  EXPECT_EQ(c.n_trials, 3);
  EXPECT_EQ(c.grape_slices, 40);
  EXPECT_EQ(c.disturbance.delta, 0.2);
  EXPECT_EQ(optimizer_config_from_json(to_json(c)).n_trials, 3);
  EXPECT_THROW(optimizer_config_from_json(Json{{"n_trails", 3}}), Error);
}

TEST(Io, GridForms) {
  const Grid a = grid_from_json(Json{{"delta", {-1.0, 1.0, 3}}, {"kappa", {-0.2, 0.2, 5}}});
  EXPECT_EQ(a.delta_axis, (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(a.kappa_axis.size(), 5u);
  const Grid b = grid_from_json(to_json(a));
  EXPECT_EQ(b.delta_axis, a.delta_axis);
  EXPECT_EQ(grid_from_json(Json()).size(), 2500u);
  EXPECT_THROW(grid_from_json(Json{{"delta", {1.0, 2.0}}}), Error);
}

TEST(Io, NumbersSurviveText) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Io, FieldCsvRoundTrip) {
  const SampledField f{{0.0, 0.5, 1.0}, {0.0, 1.0 / 3.0, 0.0}, {0.0, -2.0 / 7.0, 0.0}};
  const std::string path = scratch("field.csv").string();
  write_field_csv(path, f);
  const SampledField g = read_field_csv(path);
  EXPECT_EQ(g.times, f.times);
  EXPECT_EQ(g.omega_p, f.omega_p);
  EXPECT_EQ(g.omega_s, f.omega_s);
}

TEST(Io, TraceCsvToleratesCommentsAndHeader) {
  const std::string path = scratch("trace.csv").string();
  write_text_file(path, "# scope capture\ntime_us,volts\n0,0.1\r\n1,0.5\n\n2,0.2\n");
  const MeasuredTrace t = read_trace_csv(path);
  EXPECT_EQ(t.times_us, (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(t.volts, (std::vector<double>{0.1, 0.5, 0.2}));
  write_text_file(path, "0,0.1\n1,abc\n");
  EXPECT_THROW(read_trace_csv(path), Error);
  try {
    read_numeric_csv(scratch("missing.csv").string() + ".nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
  }
}

TEST(Io, MapCsvLayout) {
  RobustnessMap m;
  m.delta_axis = {-1.0, 1.0};
  m.kappa_axis = {0.0, 0.5, 1.0};
  m.values = Eigen::MatrixXd::Constant(2, 3, 0.25);
  m.provenance = Provenance::estimated;
  m.samples = {{0.1, 0.2, 0.3}};
  const std::string path = scratch("map.csv").string();
  write_map_csv(path, m);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_EQ(lines[1], "delta_axis,-1,1");
  EXPECT_EQ(lines[3], "values");
  EXPECT_EQ(lines[4], "0.25,0.25,0.25");
  EXPECT_EQ(lines[8], "0.10000000000000001,0.20000000000000001,0.29999999999999999");
}

TEST(Io, RunConfigValidation) {
  RunConfig c = run_config_from_json(Json{{"task", "simulate"}, {"out_dir", "x"}});
  EXPECT_EQ(c.task, "simulate");
  EXPECT_THROW(run_config_from_json(Json{{"task", "optimize"}}), Error);
  EXPECT_THROW(run_config_from_json(Json{{"task", "dance"}, {"seed", 1}}), Error);
  EXPECT_THROW(run_config_from_json(Json{{"task", "simulate"}, {"threads", -2}}), Error);
  const RunConfig d = run_config_from_json(Json{{"task", "sweep"}, {"seed", 5}, {"durations_us", {3, 4}}});
  EXPECT_EQ(run_config_from_json(to_json(d)).durations, d.durations);
  EXPECT_EQ(*run_config_from_json(to_json(d)).seed, 5u);
}
