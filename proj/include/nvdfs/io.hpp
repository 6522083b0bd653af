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

#ifndef NVDFS_IO_HPP
#define NVDFS_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "nvdfs/calibration.hpp"
#include "nvdfs/dynamics.hpp"
#include "nvdfs/optimizers.hpp"
#include "nvdfs/pulses.hpp"
#include "nvdfs/robustness.hpp"

namespace nvdfs {

using Json = nlohmann::json;

// Keys D, gamma_e, gamma_c, d12, Azz1, Azz2 (rad/us, per G for the ratios),
// Bx, Bz (G), T2e_us, T2n1_us, T2n2_us (us; null = no dephasing). Missing keys
// take the defaults of "convention" (literal unless given).
Json to_json(const SystemParams& p);
SystemParams params_from_json(const Json& j);

Json to_json(const PulseShape& s);
PulseShape shape_from_json(const Json& j);

Json to_json(const OptimizerConfig& c);
OptimizerConfig optimizer_config_from_json(const Json& j, OptimizerConfig base = {});

Json to_json(const OptimizationResult& r);
OptimizationResult result_from_json(const Json& j);

Json to_json(const CalibrationFit& f);

// {"delta": [lo, hi, n], "kappa": [lo, hi, n]} or explicit axes
// {"delta_axis": [...], "kappa_axis": [...]}.
Json to_json(const Grid& g);
Grid grid_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// CSV writers. Numbers use 17 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_field_csv(const std::string& path, const SampledField& field);
void write_trace_csv(const std::string& path, const std::vector<double>& trace);
// Axis header rows, then the value matrix; the sample table follows for estimates.
void write_map_csv(const std::string& path, const RobustnessMap& map);

// Readers skip blank lines and lines starting with '#'; a non-numeric first
// row is taken as a header.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path);
SampledField read_field_csv(const std::string& path);
MeasuredTrace read_trace_csv(const std::string& path);

std::string format_number(double v);

}  // namespace nvdfs

#endif  // NVDFS_IO_HPP
