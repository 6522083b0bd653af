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

#ifndef NVDFS_RUN_HPP
#define NVDFS_RUN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvdfs/io.hpp"

namespace nvdfs {

const char* version_string();

// One reproducible toolkit invocation.
//   task: simulate | optimize | sweep | robustness_map | robustness_estimate |
//         robustness_optimize | calibrate | export
// `options` carries task-specific settings (shape, grid, weights, optimizer
// hyperparameters, calibration inputs); see README for the keys.
struct RunConfig {
  std::string task = "simulate";
  Json params = Json::object();  // inline parameters, or {"path": file}
  std::string method = "pm";     // optimize: one method; sweep: "all" or comma list
  double duration_us = 4.0;
  std::vector<double> durations;  // sweep; empty means 3..16
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int threads = 0;
  Json options = Json::object();

  void validate() const;
};

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

// Executes the task, writes artifacts and manifest.json into out_dir, and
// returns the manifest.
Json run(const RunConfig& config);

}  // namespace nvdfs

#endif  // NVDFS_RUN_HPP
