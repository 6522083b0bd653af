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

#ifndef NVDFS_OPTIMIZERS_HPP
#define NVDFS_OPTIMIZERS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nvdfs/dynamics.hpp"
#include "nvdfs/pulses.hpp"

namespace nvdfs {

// ---------------------------------------------------------------- simplex search

struct NelderMeadConfig {
  int max_evaluations = 2000;
  double f_tolerance = 1e-4;  // stop once max f - min f over the simplex drops below
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  int n_evaluations = 0;
  std::vector<double> trace;  // objective value of every call, in order
  bool budget_exhausted = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Maximizes `objective` from the given n + 1 vertices.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<std::vector<double>> simplex,
                             const NelderMeadConfig& config = {});

// ---------------------------------------------------------------- fidelity objective

struct TransferTask {
  int initial_level = 1;
  int target_level = 2;
  void validate() const;
};

// F(shape, T) = <psi_target| rho(T) |psi_target> from |psi_initial>. Continuous
// shapes are propagated on n_slices slices; piecewise-constant ones on their own N.
class FidelityEvaluator {
 public:
  FidelityEvaluator(std::shared_ptr<const LindbladModel> model, TransferTask task = {},
                    Disturbance dist = {}, std::size_t n_slices = kDefaultSlices);

  double operator()(const PulseShape& shape, double duration) const;
  double operator()(const ControlSlices& slices) const;
  ControlSlices slices_for(const PulseShape& shape, double duration) const;

  const LindbladModel& model() const { return *model_; }
  const std::shared_ptr<const LindbladModel>& model_ptr() const { return model_; }
  const TransferTask& task() const { return task_; }
  const Disturbance& disturbance() const { return dist_; }
  std::size_t n_slices() const { return n_slices_; }

 private:
  std::shared_ptr<const LindbladModel> model_;
  TransferTask task_;
  Disturbance dist_;
  std::size_t n_slices_;
};

// ---------------------------------------------------------------- results

enum class Method { stirap, grape_gaussian, grape_inverse_lambda, crab, pm, bpm };

const char* method_name(Method m);
Method parse_method(const std::string& name);

struct TrialRecord {
  std::uint64_t seed = 0;
  double best_fidelity = 0.0;
  int n_evaluations = 0;
  bool budget_exhausted = false;
};

struct OptimizationResult {
  Method method = Method::pm;
  double duration_us = 0.0;
  std::size_t n_slices = 0;  // propagation slices used by the objective
  PulseShape best_shape;
  double best_fidelity = 0.0;
  int n_evaluations = 0;
  std::vector<double> trace;  // every objective value, trials concatenated in index order
  std::uint64_t seed = 0;
  std::vector<TrialRecord> trials;
  int best_trial = 0;
};

struct OptimizerConfig {
  int n_trials = 20;
  std::uint64_t seed = 0;
  int threads = 0;
  std::size_t n_slices = kDefaultSlices;
  int harmonics = kDefaultHarmonics;
  double omega_max = kDefaultOmegaMax;
  double boundary_exponent = kDefaultBoundaryExponent;
  NelderMeadConfig nelder_mead;
  // GRAPE
  int grape_slices = 100;
  int grape_max_iterations = 1000;
  double grape_tolerance = 1e-4;  // stop when one sweep improves F by less
  TransferTask task;
  Disturbance disturbance;

  void validate() const;
};

// Direct search over (sigma, delay) at fixed amplitude pi.
OptimizationResult optimize_stirap(double duration, std::shared_ptr<const LindbladModel> model,
                                   const OptimizerConfig& config = {});

struct GrapeGradient {
  double fidelity = 0.0;
  std::vector<double> gradient;  // dF/du_p[0..N), then dF/du_s[0..N)
};

// Exact gradient of the slice-wise propagated fidelity (amplitudes clipped to
// omega_max before use).
GrapeGradient grape_gradient(const LindbladModel& model, const PulseShape& shape, double duration,
                             const TransferTask& task = {}, const Disturbance& dist = {});

enum class GrapeInit { inverse_lambda, gaussian };

// Starting amplitudes for one GRAPE trial.
PulseShape grape_initial_shape(GrapeInit init, double duration, std::uint64_t seed,
                               const OptimizerConfig& config);

struct GrapeRun {
  PulseShape shape;
  double fidelity = 0.0;
  std::vector<double> trace;
  double initial_gradient_norm = 0.0;
  double final_gradient_norm = 0.0;  // projected onto the amplitude box
  int iterations = 0;
  bool budget_exhausted = false;
};

// Projected gradient ascent with adaptive step from one starting shape.
GrapeRun grape_ascent(const LindbladModel& model, PulseShape start, double duration,
                      const OptimizerConfig& config);

OptimizationResult optimize_grape(double duration, std::shared_ptr<const LindbladModel> model,
                                  GrapeInit init, const OptimizerConfig& config = {});

OptimizationResult optimize_crab(double duration, std::shared_ptr<const LindbladModel> model,
                                 const OptimizerConfig& config = {});

OptimizationResult optimize_pm(double duration, std::shared_ptr<const LindbladModel> model,
                               const OptimizerConfig& config = {});

// Random [a_1, b_1, v_1, a_2, ...] from the default PM box: a_n in
// [-omega_max, omega_max], v_n in [2 pi / T, 2 pi N_c / T], b_n in [0, 2 pi v_n].
std::vector<double> draw_pm_coefficients(double duration, const OptimizerConfig& config,
                                         std::mt19937_64& rng);

PulseShape pm_shape(const std::vector<double>& x, const OptimizerConfig& config);

OptimizationResult optimize(Method method, double duration, std::shared_ptr<const LindbladModel> model,
                            const OptimizerConfig& config = {});

}  // namespace nvdfs

#endif  // NVDFS_OPTIMIZERS_HPP
