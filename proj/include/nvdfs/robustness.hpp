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

#ifndef NVDFS_ROBUSTNESS_HPP
#define NVDFS_ROBUSTNESS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvdfs/optimizers.hpp"

namespace nvdfs {

struct Grid {
  std::vector<double> delta_axis;  // rad/us
  std::vector<double> kappa_axis;

  static Grid uniform(double delta_lo, double delta_hi, std::size_t n_delta, double kappa_lo,
                      double kappa_hi, std::size_t n_kappa);
  // 50 x 50 over delta / 2 pi in [-100, 100] kHz and kappa in [-0.5, 0.5].
  static Grid standard();
  std::size_t size() const { return delta_axis.size() * kappa_axis.size(); }
  void validate() const;
};

struct Box {
  double delta_lo = 0.0, delta_hi = 0.0, kappa_lo = 0.0, kappa_hi = 0.0;
  static Box around(const Grid& grid);
};

struct Sample {
  double delta = 0.0;
  double kappa = 0.0;
  double fidelity = 0.0;
};

enum class Provenance { brute, estimated };
const char* provenance_name(Provenance p);

struct RobustnessMap {
  std::vector<double> delta_axis;
  std::vector<double> kappa_axis;
  Eigen::MatrixXd values;  // rows follow delta, columns follow kappa
  Provenance provenance = Provenance::brute;
  std::vector<Sample> samples;

  double max_value() const { return values.maxCoeff(); }
  std::size_t count_at_least(double level) const;
};

struct WeightModel {
  double sigma_delta = 0.0;
  double sigma_kappa = 0.15;
  // Quarter of the delta half-range, sigma_kappa = 0.15.
  static WeightModel standard(const Grid& grid);
  void validate() const;
};

// Gaussian-process regressor with a squared-exponential kernel on inputs
// normalized to the unit box, constant mean and a fixed noise floor.
class Surrogate {
 public:
  static constexpr double kNoise = 1e-6;

  // Hyperparameters (two length scales, signal variance) maximize the
  // marginal likelihood. Throws Error(ill_conditioned) on duplicate or
  // degenerate sample sets.
  static Surrogate fit(const std::vector<Sample>& samples, const Box& box);

  double predict(double delta, double kappa) const;
  double length_scale(int axis) const { return length_[axis]; }
  double signal_variance() const { return signal_; }
  double log_marginal_likelihood() const { return lml_; }

 private:
  Box box_;
  double mean_ = 0.0;
  double length_[2] = {1.0, 1.0};
  double signal_ = 1.0;
  double lml_ = 0.0;
  Eigen::MatrixX2d x_;
  Eigen::VectorXd alpha_;
};

Surrogate surrogate_fit(const std::vector<Sample>& samples, const Box& box);

struct RobustnessConfig {
  int threads = 0;
  std::size_t n_slices = kDefaultSlices;
  TransferTask task;
  std::size_t n_samples = 16;
  std::optional<Box> sampling_box;  // default: the grid's bounding box
};

RobustnessMap landscape_brute(const PulseShape& shape, double duration, const Grid& grid,
                              std::shared_ptr<const LindbladModel> model,
                              const RobustnessConfig& config = {});

// Fits the surrogate to the given evaluated samples and predicts on the grid,
// clamped to [0, 1].
RobustnessMap estimate_from_samples(const std::vector<Sample>& samples, const Grid& grid,
                                    const Box& box);

// Uniform random sample locations drawn from `box`.
std::vector<Sample> draw_samples(const Box& box, std::size_t n, std::uint64_t seed);

// Fills in fidelity at each sample location.
void evaluate_samples(std::vector<Sample>& samples, const PulseShape& shape, double duration,
                      std::shared_ptr<const LindbladModel> model, const RobustnessConfig& config);

RobustnessMap landscape_estimate(const PulseShape& shape, double duration, const Grid& grid,
                                 std::shared_ptr<const LindbladModel> model, std::uint64_t seed,
                                 const RobustnessConfig& config = {});

// Normalized Gaussian-weighted mean of the map values.
double average_fidelity(const RobustnessMap& map, const WeightModel& weights);

double root_mean_square_error(const RobustnessMap& a, const RobustnessMap& b);

struct BpmConfig {
  OptimizerConfig optimizer;  // harmonics, omega_max, slices, seed, threads
  RobustnessConfig robustness;
  NelderMeadConfig nelder_mead{500, 1e-4, 1.0, 2.0, 0.5, 0.5};  // per round
  double initial_spread = 1.0;  // relative perturbation of the starting simplex
  // Each restart rebuilds the simplex around the incumbent with the spread
  // multiplied by spread_decay; every vertex is re-estimated from fresh samples.
  int restarts = 8;
  double spread_decay = 0.7;
};

struct BpmResult {
  OptimizationResult result;  // method bpm; trace holds surrogate objective values
  RobustnessMap map;          // brute map of the returned field
  double average_fidelity = 0.0;
};

// PM search on the surrogate-estimated average fidelity, starting from `start`
// (PM coefficients). Every candidate gets fresh seeded sample locations.
BpmResult bpm_optimize(double duration, std::shared_ptr<const LindbladModel> model,
                       const PulseShape& start, const Grid& grid, const WeightModel& weights,
                       const BpmConfig& config = {});

}  // namespace nvdfs

#endif  // NVDFS_ROBUSTNESS_HPP
