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

// Command-line front end. Every subcommand is translated into a run config
// and handed to nvdfs_run through the C interface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nvdfs/nvdfs.h"

using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string run_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> method;
  std::optional<std::string> durations;
  std::string options;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "System parameter file (JSON)");
  app->add_option("--run", c.run_file, "Full run config (JSON); flags given on the command line override it");
  app->add_option("--seed", c.seed, "RNG seed (required for stochastic tasks)");
  app->add_option("--out", c.out, "Output directory (default: out)");
  app->add_option("--threads", c.threads, "Worker threads (default 0 = all cores)");
  app->add_option("--method", c.method, "stirap | grape_gaussian | grape_inverse_lambda | crab | pm | all");
  app->add_option("--T", c.durations, "Duration in us (default 4); sweeps accept a..b or a,b,c");
  app->add_option("--options", c.options, "Extra task options as a JSON object");
}

std::vector<double> parse_durations(const std::string& text) {
  std::vector<double> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const double lo = std::stod(text.substr(0, dots));
    const double hi = std::stod(text.substr(dots + 2));
    for (double t = lo; t <= hi + 1e-9; t += 1.0) out.push_back(t);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<double> parse_triple(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 3) throw CLI::ValidationError("grid axis", "expected lo,hi,count");
  return v;
}

json read_file_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  return json::parse(f);
}

int execute(const std::string& task, const Common& c, json options) {
  json cfg = c.run_file.empty() ? json::object() : read_file_json(c.run_file);
  cfg["task"] = task;
  if (!c.config.empty()) cfg["params"] = {{"path", c.config}};
  if (c.seed) cfg["seed"] = *c.seed;
  cfg["out_dir"] = c.out.value_or(cfg.value("out_dir", std::string("out")));
  if (c.threads) cfg["threads"] = *c.threads;
  if (c.method) cfg["method"] = *c.method;
  if (c.durations) {
    const std::vector<double> ts = parse_durations(*c.durations);
    if (ts.empty()) throw std::invalid_argument("empty duration list");
    if (task == "sweep") cfg["durations_us"] = ts;
    else cfg["T_us"] = ts.front();
  }
  json merged = cfg.value("options", json::object());
  if (!c.options.empty()) merged.merge_patch(json::parse(c.options));
  merged.merge_patch(options);
  cfg["options"] = merged;

  char* manifest = nullptr;
  const nvdfs_status st = nvdfs_run(cfg.dump().c_str(), &manifest);
  if (st != NVDFS_OK) {
    json err{{"error", nvdfs_status_name(st)}, {"code", static_cast<int>(st)}, {"message", nvdfs_last_error()}};
    std::cerr << err.dump() << '\n';
    return static_cast<int>(st);
  }
  const json m = json::parse(manifest);
  nvdfs_string_free(manifest);
  std::cout << m.at("summary").dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nvdfs: pulse optimization for an NV-mediated two-nuclear-spin register"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nvdfs_version()));

  Common common;
  json options = json::object();
  std::string task;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Propagate one field and write field + trajectory CSVs");
  add_common(sim, common);
  std::string shape_path, integrator;
  std::size_t slices = 0;
  double delta = 0.0, kappa = 0.0;
  sim->add_option("--shape", shape_path, "Pulse shape JSON (default: fixed STIRAP, sigma = T/8)");
  sim->add_option("--slices", slices, "Propagation slices (default 1000)");
  sim->add_option("--delta", delta, "Detuning, rad/us");
  sim->add_option("--kappa", kappa, "Relative amplitude bias");
  sim->add_option("--integrator", integrator, "taylor | rk4 | liouvillian_exp");
  sim->callback([&] { task = "simulate"; });

  // optimize
  auto* optc = app.add_subcommand("optimize", "Multi-start optimization at one duration");
  add_common(optc, common);
  int trials = 0;
  optc->add_option("--trials", trials, "Restarts (default 20)");
  optc->add_option("--slices", slices, "Propagation slices for continuous shapes");
  optc->callback([&] { task = "optimize"; });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Best fidelity per method over a range of durations");
  add_common(sweep, common);
  sweep->add_option("--trials", trials, "Restarts per method and duration");
  sweep->callback([&] { task = "sweep"; });

  // robustness
  auto* rob = app.add_subcommand("robustness", "Detuning / amplitude-bias landscapes and B-PM");
  rob->require_subcommand(1);
  std::string grid_delta, grid_kappa, result_path;
  double sigma_delta = 0.0, sigma_kappa = 0.0;
  std::size_t samples = 0;
  bool compare = false;
  auto robust_sub = [&](const char* name, const char* help, const char* task_name) {
    auto* s = rob->add_subcommand(name, help);
    add_common(s, common);
    s->add_option("--shape", shape_path, "Pulse shape JSON");
    s->add_option("--result", result_path, "Optimization result JSON whose best shape is used");
    s->add_option("--grid-delta", grid_delta, "lo,hi,count in rad/us");
    s->add_option("--grid-kappa", grid_kappa, "lo,hi,count");
    s->add_option("--sigma-delta", sigma_delta, "Weight width for delta, rad/us");
    s->add_option("--sigma-kappa", sigma_kappa, "Weight width for kappa");
    s->add_option("--samples", samples, "Surrogate samples (default 16)");
    s->add_option("--slices", slices, "Propagation slices");
    s->callback([&, task_name] { task = task_name; });
    return s;
  };
  robust_sub("map", "Brute-force landscape", "robustness_map");
  auto* est = robust_sub("estimate", "Surrogate landscape from few samples", "robustness_estimate");
  est->add_flag("--compare", compare, "Also compute the brute map and report the RMSE");
  robust_sub("optimize", "B-PM robust optimization", "robustness_optimize");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Linear calibrations and measured-trace comparison");
  add_common(cal, common);
  std::vector<std::string> fits;
  std::string trace, sim_field, channel;
  cal->add_option("--fit", fits, "name=path.csv (two columns x,y); repeatable");
  cal->add_option("--trace", trace, "Measured trace CSV (time_us, volts)");
  cal->add_option("--sim-field", sim_field, "Simulated field CSV");
  cal->add_option("--channel", channel, "pump | stokes");
  cal->callback([&] { task = "calibrate"; });

  // export
  auto* exp = app.add_subcommand("export", "Sample a shape or result to a field CSV");
  add_common(exp, common);
  exp->add_option("--shape", shape_path, "Pulse shape JSON");
  exp->add_option("--result", result_path, "Optimization result JSON");
  exp->add_option("--samples", samples, "Number of samples (default 1001)");
  exp->callback([&] { task = "export"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!shape_path.empty()) options["shape_path"] = shape_path;
    if (!result_path.empty()) options["result"] = result_path;
    if (!integrator.empty()) options["integrator"] = integrator;
    if (slices) {
      options["n_slices"] = slices;
      options["optimizer"]["n_slices"] = slices;
    }
    if (delta != 0.0) options["delta"] = delta;
    if (kappa != 0.0) options["kappa"] = kappa;
    if (trials) options["optimizer"]["n_trials"] = trials;
    if (!grid_delta.empty()) options["grid"]["delta"] = parse_triple(grid_delta);
    if (!grid_kappa.empty()) options["grid"]["kappa"] = parse_triple(grid_kappa);
    if (sigma_delta > 0.0) options["sigma_delta"] = sigma_delta;
    if (sigma_kappa > 0.0) options["sigma_kappa"] = sigma_kappa;
    if (samples) options["n_samples"] = samples;
    if (compare) options["compare"] = true;
    if (!fits.empty()) {
      json list = json::array();
      for (const auto& f : fits) {
        const auto eq = f.find('=');
        list.push_back(eq == std::string::npos ? json{{"name", f}, {"csv", f}}
                                               : json{{"name", f.substr(0, eq)}, {"csv", f.substr(eq + 1)}});
      }
      options["fits"] = list;
    }
    if (!trace.empty()) options["trace"] = trace;
    if (!sim_field.empty()) options["sim_field"] = sim_field;
    if (!channel.empty()) options["channel"] = channel;
    return execute(task, common, options);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InvalidArgument"}, {"code", 1}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
