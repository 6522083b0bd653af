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

#include "nvdfs/nvdfs.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "nvdfs/error.hpp"
#include "nvdfs/run.hpp"

struct nvdfs_params {
  std::shared_ptr<const nvdfs::LindbladModel> model;
};
struct nvdfs_shape {
  nvdfs::PulseShape shape;
};
struct nvdfs_result {
  nvdfs::OptimizationResult result;
};
struct nvdfs_map {
  nvdfs::RobustnessMap map;
};

namespace {

thread_local std::string last_error;

nvdfs_status to_status(nvdfs::ErrorCode c) { return static_cast<nvdfs_status>(static_cast<int>(c)); }

template <class F>
nvdfs_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return NVDFS_OK;
  } catch (const nvdfs::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NVDFS_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NVDFS_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  nvdfs::require(p != nullptr, std::string(what) + " must not be NULL");
}

nvdfs::Json parse(const char* text) {
  if (text == nullptr || *text == '\0') return nvdfs::Json();
  try {
    return nvdfs::Json::parse(text);
  } catch (const nvdfs::Json::parse_error& e) {
    nvdfs::fail(nvdfs::ErrorCode::invalid_argument, std::string("invalid JSON: ") + e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class T>
T option(const nvdfs::Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nvdfs::Json::exception&) {
    nvdfs::fail(nvdfs::ErrorCode::invalid_argument, std::string("option '") + key + "' has the wrong type");
  }
}

nvdfs::RobustnessConfig robustness_options(const nvdfs::Json& o) {
  nvdfs::RobustnessConfig rc;
  rc.threads = option(o, "threads", 0);
  rc.n_slices = option<std::size_t>(o, "n_slices", nvdfs::kDefaultSlices);
  rc.n_samples = option<std::size_t>(o, "n_samples", 16);
  rc.task = {option(o, "initial_level", 1), option(o, "target_level", 2)};
  return rc;
}

std::shared_ptr<const nvdfs::LindbladModel> make_model(const nvdfs::SystemParams& p) {
  return std::make_shared<const nvdfs::LindbladModel>(p);
}

}  // namespace

extern "C" {

const char* nvdfs_version(void) { return nvdfs::version_string(); }

const char* nvdfs_last_error(void) { return last_error.c_str(); }

const char* nvdfs_status_name(nvdfs_status status) {
  if (status == NVDFS_OK) return "Ok";
  if (status == NVDFS_INTERNAL) return "Internal";
  if (status >= NVDFS_INVALID_ARGUMENT && status <= NVDFS_FLAT_TRACE)
    return nvdfs::error_code_name(static_cast<nvdfs::ErrorCode>(status));
  return "Unknown";
}

void nvdfs_string_free(char* s) { std::free(s); }

nvdfs_status nvdfs_params_default(const char* convention, nvdfs_params** out) {
  return guarded([&] {
    need(out, "out");
    const auto c = convention ? nvdfs::parse_convention(convention) : nvdfs::CouplingConvention::literal;
    *out = new nvdfs_params{make_model(nvdfs::SystemParams::defaults(c))};
  });
}

nvdfs_status nvdfs_params_from_json(const char* json, nvdfs_params** out) {
  return guarded([&] {
    need(out, "out");
    const nvdfs::Json j = parse(json);
    *out = new nvdfs_params{make_model(nvdfs::params_from_json(j.is_null() ? nvdfs::Json::object() : j))};
  });
}

nvdfs_status nvdfs_params_to_json(const nvdfs_params* params, char** out) {
  return guarded([&] {
    need(params, "params");
    need(out, "out");
    *out = copy_string(nvdfs::to_json(params->model->params()).dump());
  });
}

nvdfs_status nvdfs_params_energies(const nvdfs_params* params, double* energies) {
  return guarded([&] {
    need(params, "params");
    need(energies, "energies");
    const auto& e = params->model->eigensystem().energies;
    for (int i = 0; i < nvdfs::kDim; ++i) energies[i] = e(i);
  });
}

void nvdfs_params_free(nvdfs_params* params) { delete params; }

nvdfs_status nvdfs_shape_from_json(const char* json, nvdfs_shape** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new nvdfs_shape{nvdfs::shape_from_json(parse(json))};
  });
}

nvdfs_status nvdfs_shape_gaussian(double amplitude, double sigma_us, double delay_us, nvdfs_shape** out) {
  return guarded([&] {
    need(out, "out");
    nvdfs::PulseShape s{nvdfs::GaussianPulse{amplitude, sigma_us, delay_us}};
    s.validate();
    *out = new nvdfs_shape{std::move(s)};
  });
}

nvdfs_status nvdfs_shape_to_json(const nvdfs_shape* shape, char** out) {
  return guarded([&] {
    need(shape, "shape");
    need(out, "out");
    *out = copy_string(nvdfs::to_json(shape->shape).dump());
  });
}

nvdfs_status nvdfs_shape_sample(const nvdfs_shape* shape, double duration_us, size_t n_samples,
                                double* times, double* omega_p, double* omega_s) {
  return guarded([&] {
    need(shape, "shape");
    need(times, "times");
    need(omega_p, "omega_p");
    need(omega_s, "omega_s");
    const nvdfs::SampledField f = nvdfs::sample(shape->shape, duration_us, n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
      times[i] = f.times[i];
      omega_p[i] = f.omega_p[i];
      omega_s[i] = f.omega_s[i];
    }
  });
}

void nvdfs_shape_free(nvdfs_shape* shape) { delete shape; }

nvdfs_status nvdfs_fidelity(const nvdfs_params* params, const nvdfs_shape* shape, double duration_us,
                            const char* options, double* out) {
  return guarded([&] {
    need(params, "params");
    need(shape, "shape");
    need(out, "out");
    nvdfs::require(duration_us > 0.0, "duration must be positive");
    const nvdfs::Json o = parse(options);
    const nvdfs::TransferTask task{option(o, "initial_level", 1), option(o, "target_level", 2)};
    const nvdfs::Disturbance dist{option(o, "delta", 0.0), option(o, "kappa", 0.0)};
    const nvdfs::FidelityEvaluator eval(params->model, task, dist,
                                        option<std::size_t>(o, "n_slices", nvdfs::kDefaultSlices));
    const std::string integrator = option<std::string>(o, "integrator", "taylor");
    nvdfs::Integrator in = nvdfs::Integrator::taylor;
    if (integrator == "rk4") in = nvdfs::Integrator::rk4;
    else if (integrator == "liouvillian_exp") in = nvdfs::Integrator::liouvillian_exp;
    else nvdfs::require(integrator == "taylor", "unknown integrator '" + integrator + "'");
    const nvdfs::DensityMatrix rho =
        nvdfs::final_state(*params->model, eval.slices_for(shape->shape, duration_us), dist,
                           nvdfs::DensityMatrix::pure(task.initial_level), in);
    *out = nvdfs::fidelity(rho, task.target_level);
  });
}

nvdfs_status nvdfs_optimize(const nvdfs_params* params, const char* method, double duration_us,
                            const char* options, nvdfs_result** out) {
  return guarded([&] {
    need(params, "params");
    need(method, "method");
    need(out, "out");
    const nvdfs::OptimizerConfig c = nvdfs::optimizer_config_from_json(parse(options));
    *out = new nvdfs_result{nvdfs::optimize(nvdfs::parse_method(method), duration_us, params->model, c)};
  });
}

nvdfs_status nvdfs_result_fidelity(const nvdfs_result* result, double* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    *out = result->result.best_fidelity;
  });
}

nvdfs_status nvdfs_result_evaluations(const nvdfs_result* result, int* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    *out = result->result.n_evaluations;
  });
}

nvdfs_status nvdfs_result_shape(const nvdfs_result* result, nvdfs_shape** out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    *out = new nvdfs_shape{result->result.best_shape};
  });
}

nvdfs_status nvdfs_result_to_json(const nvdfs_result* result, char** out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    *out = copy_string(nvdfs::to_json(result->result).dump());
  });
}

void nvdfs_result_free(nvdfs_result* result) { delete result; }

nvdfs_status nvdfs_map_brute(const nvdfs_params* params, const nvdfs_shape* shape, double duration_us,
                             const char* grid, const char* options, nvdfs_map** out) {
  return guarded([&] {
    need(params, "params");
    need(shape, "shape");
    need(out, "out");
    const nvdfs::Grid g = nvdfs::grid_from_json(parse(grid));
    *out = new nvdfs_map{nvdfs::landscape_brute(shape->shape, duration_us, g, params->model,
                                                robustness_options(parse(options)))};
  });
}

nvdfs_status nvdfs_map_estimate(const nvdfs_params* params, const nvdfs_shape* shape, double duration_us,
                                const char* grid, const char* options, uint64_t seed, nvdfs_map** out) {
  return guarded([&] {
    need(params, "params");
    need(shape, "shape");
    need(out, "out");
    const nvdfs::Grid g = nvdfs::grid_from_json(parse(grid));
    *out = new nvdfs_map{nvdfs::landscape_estimate(shape->shape, duration_us, g, params->model, seed,
                                                   robustness_options(parse(options)))};
  });
}

nvdfs_status nvdfs_map_size(const nvdfs_map* map, size_t* n_delta, size_t* n_kappa) {
  return guarded([&] {
    need(map, "map");
    need(n_delta, "n_delta");
    need(n_kappa, "n_kappa");
    *n_delta = map->map.delta_axis.size();
    *n_kappa = map->map.kappa_axis.size();
  });
}

nvdfs_status nvdfs_map_value(const nvdfs_map* map, size_t i, size_t j, double* out) {
  return guarded([&] {
    need(map, "map");
    need(out, "out");
    nvdfs::require(i < map->map.delta_axis.size() && j < map->map.kappa_axis.size(), "map index out of range");
    *out = map->map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

nvdfs_status nvdfs_map_average(const nvdfs_map* map, const char* weights, double* out) {
  return guarded([&] {
    need(map, "map");
    need(out, "out");
    const nvdfs::Json w = parse(weights);
    const nvdfs::Grid grid{map->map.delta_axis, map->map.kappa_axis};
    nvdfs::WeightModel wm = nvdfs::WeightModel::standard(grid);
    wm.sigma_delta = option(w, "sigma_delta", wm.sigma_delta);
    wm.sigma_kappa = option(w, "sigma_kappa", wm.sigma_kappa);
    *out = nvdfs::average_fidelity(map->map, wm);
  });
}

nvdfs_status nvdfs_map_rmse(const nvdfs_map* a, const nvdfs_map* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = nvdfs::root_mean_square_error(a->map, b->map);
  });
}

nvdfs_status nvdfs_map_write_csv(const nvdfs_map* map, const char* path) {
  return guarded([&] {
    need(map, "map");
    need(path, "path");
    nvdfs::write_map_csv(path, map->map);
  });
}

void nvdfs_map_free(nvdfs_map* map) { delete map; }

nvdfs_status nvdfs_linear_fit(const double* x, const double* y, size_t n, double* a, double* b,
                              double* residual_rms, double* a_stderr, double* b_stderr) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(a, "a");
    need(b, "b");
    const nvdfs::CalibrationFit f = nvdfs::linear_fit(std::vector<double>(x, x + n), std::vector<double>(y, y + n));
    *a = f.a;
    *b = f.b;
    if (residual_rms) *residual_rms = f.residual_rms;
    if (a_stderr) *a_stderr = f.a_stderr;
    if (b_stderr) *b_stderr = f.b_stderr;
  });
}

nvdfs_status nvdfs_run(const char* config, char** manifest) {
  return guarded([&] {
    need(config, "config");
    const nvdfs::Json m = nvdfs::run(nvdfs::run_config_from_json(parse(config)));
    if (manifest) *manifest = copy_string(m.dump(2));
  });
}

}  // extern "C"
