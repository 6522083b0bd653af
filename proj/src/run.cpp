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

#include "nvdfs/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

#include "nvdfs/error.hpp"

namespace nvdfs {

namespace fs = std::filesystem;

const char* version_string() { return "0.3.0"; }

namespace {

const char* const kTasks[] = {"simulate",          "optimize",           "sweep",
                              "robustness_map",    "robustness_estimate", "robustness_optimize",
                              "calibrate",         "export"};

bool needs_seed(const std::string& task) {
  return task == "optimize" || task == "sweep" || task == "robustness_estimate" ||
         task == "robustness_optimize";
}

template <class T>
T opt(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorCode::invalid_argument, std::string("option '") + key + "' has the wrong type");
  }
}

struct Context {
  const RunConfig& config;
  fs::path out;
  Json artifacts = Json::array();
  Json summary = Json::object();
  std::shared_ptr<const LindbladModel> model;

  std::string path(const std::string& name) {
    artifacts.push_back(name);
    return (out / name).string();
  }
};

SystemParams load_params(const Json& j) {
  if (j.is_object() && j.contains("path")) {
    require(j.size() == 1, "params given by path take no other keys");
    return params_from_json(read_json_file(j.at("path").get<std::string>()));
  }
  return params_from_json(j.is_null() ? Json::object() : j);
}

OptimizerConfig optimizer_config(const RunConfig& c) {
  OptimizerConfig base;
  base.threads = c.threads;
  base.seed = c.seed.value_or(0);
  OptimizerConfig out = optimizer_config_from_json(c.options.value("optimizer", Json()), base);
  out.threads = c.threads;
  out.seed = c.seed.value_or(0);
  return out;
}

TransferTask transfer_task(const RunConfig& c) {
  TransferTask t{opt(c.options, "initial_level", 1), opt(c.options, "target_level", 2)};
  t.validate();
  return t;
}

RobustnessConfig robustness_config(const RunConfig& c) {
  RobustnessConfig r;
  r.threads = c.threads;
  r.n_slices = opt<std::size_t>(c.options, "n_slices", kDefaultSlices);
  r.task = transfer_task(c);
  r.n_samples = opt<std::size_t>(c.options, "n_samples", 16);
  return r;
}

WeightModel weights(const RunConfig& c, const Grid& grid) {
  WeightModel w = WeightModel::standard(grid);
  w.sigma_delta = opt(c.options, "sigma_delta", w.sigma_delta);
  w.sigma_kappa = opt(c.options, "sigma_kappa", w.sigma_kappa);
  w.validate();
  return w;
}

// Shape from options.shape, options.shape_path or options.result (a result
// file); nullopt when none is given.
std::optional<PulseShape> explicit_shape(const RunConfig& c) {
  if (c.options.contains("shape")) return shape_from_json(c.options.at("shape"));
  if (c.options.contains("shape_path"))
    return shape_from_json(read_json_file(c.options.at("shape_path").get<std::string>()));
  if (c.options.contains("result"))
    return result_from_json(read_json_file(c.options.at("result").get<std::string>())).best_shape;
  return std::nullopt;
}

PulseShape fixed_stirap(double duration) {
  const double sigma = duration / 8.0;
  return PulseShape{GaussianPulse{kPi, sigma, std::sqrt(2.0) * sigma}};
}

void write_result(Context& ctx, const OptimizationResult& r, const std::string& stem) {
  write_text_file(ctx.path(stem + ".json"), to_json(r).dump(2) + "\n");
  write_trace_csv(ctx.path(stem + "_trace.csv"), r.trace);
  write_field_csv(ctx.path(stem + "_field.csv"),
                  sample(r.best_shape, r.duration_us, opt<std::size_t>(ctx.config.options, "n_samples_field", 1001)));
}

// PM optimum used as the robustness subject when no shape is supplied.
PulseShape robustness_subject(Context& ctx) {
  if (auto s = explicit_shape(ctx.config)) return *s;
  require(ctx.config.seed.has_value(), "a seed is required to optimize the PM field first");
  const OptimizationResult r = optimize_pm(ctx.config.duration_us, ctx.model, optimizer_config(ctx.config));
  write_result(ctx, r, "pm_result");
  ctx.summary["pm_nominal_fidelity"] = r.best_fidelity;
  return r.best_shape;
}

void task_simulate(Context& ctx) {
  const RunConfig& c = ctx.config;
  const PulseShape shape = explicit_shape(c).value_or(fixed_stirap(c.duration_us));
  const std::size_t n_slices = opt<std::size_t>(c.options, "n_slices", kDefaultSlices);
  const TransferTask task = transfer_task(c);
  const Disturbance dist{opt(c.options, "delta", 0.0), opt(c.options, "kappa", 0.0)};
  PropagationOptions po;
  const std::string integrator = opt<std::string>(c.options, "integrator", "taylor");
  if (integrator == "rk4") po.integrator = Integrator::rk4;
  else if (integrator == "liouvillian_exp") po.integrator = Integrator::liouvillian_exp;
  else require(integrator == "taylor", "unknown integrator '" + integrator + "'");
  po.checkpoint_stride = opt<std::size_t>(c.options, "checkpoint_stride", 10);

  const FidelityEvaluator eval(ctx.model, task, dist, n_slices);
  const ControlSlices slices = eval.slices_for(shape, c.duration_us);
  const Trajectory traj = propagate(*ctx.model, slices, dist, DensityMatrix::pure(task.initial_level), po);
  write_field_csv(ctx.path("field.csv"), sample(shape, c.duration_us, slices.size() + 1));
  write_trajectory_csv(ctx.path("trajectory.csv"), traj);
  ctx.summary["fidelity"] = fidelity(traj.final_state(), task.target_level);
  ctx.summary["symmetrization_adjustment"] = traj.symmetrization_adjustment;
  ctx.summary["shape"] = to_json(shape);
}

void task_optimize(Context& ctx) {
  OptimizerConfig oc = optimizer_config(ctx.config);
  oc.task = transfer_task(ctx.config);
  const OptimizationResult r = optimize(parse_method(ctx.config.method), ctx.config.duration_us, ctx.model, oc);
  write_result(ctx, r, "result");
  ctx.summary["best_fidelity"] = r.best_fidelity;
  ctx.summary["n_evaluations"] = r.n_evaluations;
}

std::vector<Method> sweep_methods(const std::string& spec) {
  if (spec == "all")
    return {Method::stirap, Method::grape_gaussian, Method::grape_inverse_lambda, Method::crab, Method::pm};
  std::vector<Method> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_method(item));
  require(!out.empty(), "sweep needs at least one method");
  return out;
}

void task_sweep(Context& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<double> durations = c.durations;
  if (durations.empty())
    for (int t = 3; t <= 16; ++t) durations.push_back(t);
  OptimizerConfig oc = optimizer_config(c);
  oc.task = transfer_task(c);
  const auto methods = sweep_methods(c.method);

  std::ostringstream csv;
  csv << "T_us,method,best_fidelity,n_evaluations,mean_evaluations_per_trial\n";
  Json rows = Json::array();
  for (double t : durations) {
    double best = -1.0;
    std::string best_method;
    for (Method m : methods) {
      const OptimizationResult r = optimize(m, t, ctx.model, oc);
      const double mean_evals = static_cast<double>(r.n_evaluations) / static_cast<double>(r.trials.size());
      csv << format_number(t) << ',' << method_name(m) << ',' << format_number(r.best_fidelity) << ','
          << r.n_evaluations << ',' << format_number(mean_evals) << '\n';
      if (r.best_fidelity > best) {
        best = r.best_fidelity;
        best_method = method_name(m);
      }
    }
    rows.push_back({{"T_us", t}, {"best_fidelity", best}, {"best_method", best_method}});
  }
  write_text_file(ctx.path("sweep.csv"), csv.str());
  ctx.summary["best_per_T"] = rows;
}

void map_summary(Context& ctx, const RobustnessMap& map, const WeightModel& w, const std::string& prefix) {
  ctx.summary[prefix + "average_fidelity"] = average_fidelity(map, w);
  ctx.summary[prefix + "area_at_least_0_7"] = map.count_at_least(0.7);
  ctx.summary[prefix + "max"] = map.max_value();
}

void task_robustness_map(Context& ctx) {
  const Grid grid = grid_from_json(ctx.config.options.value("grid", Json()));
  const PulseShape shape = robustness_subject(ctx);
  const RobustnessMap map = landscape_brute(shape, ctx.config.duration_us, grid, ctx.model, robustness_config(ctx.config));
  write_map_csv(ctx.path("map.csv"), map);
  map_summary(ctx, map, weights(ctx.config, grid), "");
}

void task_robustness_estimate(Context& ctx) {
  const Grid grid = grid_from_json(ctx.config.options.value("grid", Json()));
  const PulseShape shape = robustness_subject(ctx);
  const RobustnessConfig rc = robustness_config(ctx.config);
  const RobustnessMap est = landscape_estimate(shape, ctx.config.duration_us, grid, ctx.model, *ctx.config.seed, rc);
  write_map_csv(ctx.path("map_estimated.csv"), est);
  map_summary(ctx, est, weights(ctx.config, grid), "");
  if (opt(ctx.config.options, "compare", false)) {
    const RobustnessMap brute = landscape_brute(shape, ctx.config.duration_us, grid, ctx.model, rc);
    write_map_csv(ctx.path("map_brute.csv"), brute);
    ctx.summary["rmse_vs_brute"] = root_mean_square_error(est, brute);
  }
}

void task_robustness_optimize(Context& ctx) {
  const Grid grid = grid_from_json(ctx.config.options.value("grid", Json()));
  const WeightModel w = weights(ctx.config, grid);
  const PulseShape start = robustness_subject(ctx);
  BpmConfig bc;
  bc.optimizer = optimizer_config(ctx.config);
  bc.robustness = robustness_config(ctx.config);
  bc.nelder_mead.max_evaluations = opt(ctx.config.options, "bpm_max_evaluations", bc.nelder_mead.max_evaluations);
  bc.initial_spread = opt(ctx.config.options, "bpm_initial_spread", bc.initial_spread);
  bc.restarts = opt(ctx.config.options, "bpm_restarts", bc.restarts);
  bc.spread_decay = opt(ctx.config.options, "bpm_spread_decay", bc.spread_decay);
  const RobustnessMap before = landscape_brute(start, ctx.config.duration_us, grid, ctx.model, bc.robustness);
  const BpmResult r = bpm_optimize(ctx.config.duration_us, ctx.model, start, grid, w, bc);
  write_map_csv(ctx.path("map_nominal.csv"), before);
  write_map_csv(ctx.path("map_bpm.csv"), r.map);
  write_result(ctx, r.result, "bpm_result");
  map_summary(ctx, before, w, "nominal_");
  map_summary(ctx, r.map, w, "bpm_");
}

Json fit_report(const Json& spec) {
  std::vector<double> x, y;
  if (spec.contains("csv")) {
    for (const auto& row : read_numeric_csv(spec.at("csv").get<std::string>())) {
      require(row.size() >= 2, "fit CSV rows need x, y");
      x.push_back(row[0]);
      y.push_back(row[1]);
    }
  } else {
    x = opt<std::vector<double>>(spec, "x", {});
    y = opt<std::vector<double>>(spec, "y", {});
  }
  return Json{{"name", opt<std::string>(spec, "name", "fit")},
              {"y_on_x", to_json(linear_fit(x, y))},
              {"x_on_y", to_json(linear_fit(y, x))}};
}

void task_calibrate(Context& ctx) {
  const Json& o = ctx.config.options;
  Json report = Json::object();
  Json fits = Json::array();
  if (o.contains("fits"))
    for (const auto& f : o.at("fits")) fits.push_back(fit_report(f));
  report["fits"] = fits;
  if (o.contains("trace")) {
    require(o.contains("sim_field"), "trace comparison needs 'sim_field'");
    const MeasuredTrace real = read_trace_csv(o.at("trace").get<std::string>());
    const SampledField sim = read_field_csv(o.at("sim_field").get<std::string>());
    const std::string ch = opt<std::string>(o, "channel", "pump");
    require(ch == "pump" || ch == "stokes", "channel must be 'pump' or 'stokes'");
    const RescaledTrace r = rescale_trace(real, sim, ch == "pump" ? Channel::pump : Channel::stokes);
    const auto& reference = ch == "pump" ? sim.omega_p : sim.omega_s;
    report["trace"] = {{"channel", ch},
                       {"d_sim", r.d_sim},
                       {"d_real", r.d_real},
                       {"scale", r.scale},
                       {"offset", r.offset},
                       {"shape_discrepancy", shape_discrepancy(reference, r.values)}};
    std::ostringstream csv;
    csv << "time_us,sim,rescaled\n";
    for (std::size_t i = 0; i < r.times_us.size(); ++i)
      csv << format_number(r.times_us[i]) << ',' << format_number(reference[i]) << ','
          << format_number(r.values[i]) << '\n';
    write_text_file(ctx.path("rescaled_trace.csv"), csv.str());
  }
  write_text_file(ctx.path("calibration.json"), report.dump(2) + "\n");
  ctx.summary["calibration"] = report;
}

void task_export(Context& ctx) {
  const auto shape = explicit_shape(ctx.config);
  require(shape.has_value(), "export needs options.shape, options.shape_path or options.result");
  const auto n = opt<std::size_t>(ctx.config.options, "n_samples", 1001);
  const SampledField f = sample(*shape, ctx.config.duration_us, n);
  write_field_csv(ctx.path("field.csv"), f);
  ctx.summary["n_samples"] = n;
}

}  // namespace

void RunConfig::validate() const {
  bool known = false;
  for (const char* t : kTasks) known |= task == t;
  require(known, "unknown task '" + task + "'");
  require(std::isfinite(duration_us) && duration_us > 0.0, "T must be positive");
  for (double t : durations) require(std::isfinite(t) && t > 0.0, "sweep durations must be positive");
  require(threads >= 0, "thread count must be non-negative");
  require(!out_dir.empty(), "output directory must be given");
  require(options.is_object(), "options must be a JSON object");
  if (needs_seed(task)) require(seed.has_value(), "task '" + task + "' is stochastic and needs a seed");
}

Json to_json(const RunConfig& c) {
  Json j{{"task", c.task},       {"params", c.params},   {"method", c.method},
         {"T_us", c.duration_us}, {"durations_us", c.durations}, {"out_dir", c.out_dir},
         {"threads", c.threads}, {"options", c.options}};
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  require(j.is_object(), "run config must be a JSON object");
  RunConfig c;
  c.task = opt<std::string>(j, "task", c.task);
  if (j.contains("params")) c.params = j.at("params");
  c.method = opt<std::string>(j, "method", c.method);
  c.duration_us = opt(j, "T_us", c.duration_us);
  c.durations = opt<std::vector<double>>(j, "durations_us", {});
  if (j.contains("seed") && !j.at("seed").is_null()) c.seed = opt<std::uint64_t>(j, "seed", 0);
  c.out_dir = opt<std::string>(j, "out_dir", c.out_dir);
  c.threads = opt(j, "threads", c.threads);
  if (j.contains("options")) c.options = j.at("options");
  c.validate();
  return c;
}

Json run(const RunConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create output directory '" + config.out_dir + "': " + ec.message());

  Context ctx{config, fs::path(config.out_dir), Json::array(), Json::object(), nullptr};
  const SystemParams params = load_params(config.params);
  ctx.model = std::make_shared<const LindbladModel>(params);

  if (config.task == "simulate") task_simulate(ctx);
  else if (config.task == "optimize") task_optimize(ctx);
  else if (config.task == "sweep") task_sweep(ctx);
  else if (config.task == "robustness_map") task_robustness_map(ctx);
  else if (config.task == "robustness_estimate") task_robustness_estimate(ctx);
  else if (config.task == "robustness_optimize") task_robustness_optimize(ctx);
  else if (config.task == "calibrate") task_calibrate(ctx);
  else task_export(ctx);

  Json manifest{{"toolkit", "nvdfs"},
                {"version", version_string()},
                {"task", config.task},
                {"config", to_json(config)},
                {"params", to_json(params)},
                {"seed", config.seed ? Json(*config.seed) : Json(nullptr)},
                {"summary", ctx.summary}};
  ctx.artifacts.push_back("manifest.json");
  manifest["artifacts"] = ctx.artifacts;
  write_text_file((ctx.out / "manifest.json").string(), manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace nvdfs
