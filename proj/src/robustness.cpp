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

#include "nvdfs/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nvdfs/error.hpp"
#include "nvdfs/parallel.hpp"

namespace nvdfs {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = 0.5 * (lo + hi);
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

void check_axis(const std::vector<double>& axis, const char* name) {
  require(!axis.empty(), std::string(name) + " axis is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    require(std::isfinite(axis[i]), std::string(name) + " axis has non-finite values");
    if (i > 0) require(axis[i] > axis[i - 1], std::string(name) + " axis must be strictly increasing");
  }
}

constexpr double kStandardDeltaHalfRange = kTwoPi * 0.1;  // 100 kHz in rad/us

}  // namespace

Grid Grid::uniform(double delta_lo, double delta_hi, std::size_t n_delta, double kappa_lo,
                   double kappa_hi, std::size_t n_kappa) {
  require(n_delta >= 1 && n_kappa >= 1, "grid needs at least one point per axis");
  Grid g{linspace(delta_lo, delta_hi, n_delta), linspace(kappa_lo, kappa_hi, n_kappa)};
  g.validate();
  return g;
}

Grid Grid::standard() {
  return uniform(-kStandardDeltaHalfRange, kStandardDeltaHalfRange, 50, -0.5, 0.5, 50);
}

void Grid::validate() const {
  check_axis(delta_axis, "delta");
  check_axis(kappa_axis, "kappa");
  require(kappa_axis.front() > -1.0, "kappa axis must stay above -1");
}

Box Box::around(const Grid& grid) {
  grid.validate();
  return {grid.delta_axis.front(), grid.delta_axis.back(), grid.kappa_axis.front(),
          grid.kappa_axis.back()};
}

const char* provenance_name(Provenance p) { return p == Provenance::brute ? "brute" : "estimated"; }

std::size_t RobustnessMap::count_at_least(double level) const {
  return static_cast<std::size_t>((values.array() >= level).count());
}

WeightModel WeightModel::standard(const Grid& grid) {
  grid.validate();
  const double half = 0.5 * (grid.delta_axis.back() - grid.delta_axis.front());
  return {half > 0.0 ? 0.25 * half : 0.25 * kStandardDeltaHalfRange, 0.15};
}

void WeightModel::validate() const {
  require(sigma_delta > 0.0 && sigma_kappa > 0.0, "weight widths must be positive");
}

// ---------------------------------------------------------------- surrogate

namespace {

struct FitData {
  Eigen::MatrixX2d x;
  Eigen::VectorXd y;  // centred
};

// Returns -inf when the kernel matrix is not positive definite.
double evidence(const FitData& d, double l0, double l1, double signal,
                               Eigen::VectorXd* alpha) {
  const Eigen::Index n = d.x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double a = (d.x(i, 0) - d.x(j, 0)) / l0;
      const double b = (d.x(i, 1) - d.x(j, 1)) / l1;
      k(i, j) = k(j, i) = signal * std::exp(-0.5 * (a * a + b * b));
    }
    k(i, i) += Surrogate::kNoise;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  Eigen::VectorXd a = llt.solve(d.y);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) logdet += std::log(llt.matrixL()(i, i));
  if (alpha) *alpha = a;
  return -0.5 * d.y.dot(a) - logdet - 0.5 * static_cast<double>(n) * std::log(kTwoPi);
}

constexpr double kMinLength = 0.02, kMaxLength = 20.0;

}  // namespace

Surrogate Surrogate::fit(const std::vector<Sample>& samples, const Box& box) {
  require(samples.size() >= 4, "surrogate needs at least four samples");
  if (!(box.delta_hi > box.delta_lo) || !(box.kappa_hi > box.kappa_lo))
    fail(ErrorCode::ill_conditioned, "sampling box has zero extent");

  Surrogate s;
  s.box_ = box;
  const auto n = static_cast<Eigen::Index>(samples.size());
  FitData d{Eigen::MatrixX2d(n, 2), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& p = samples[static_cast<std::size_t>(i)];
    require(std::isfinite(p.delta) && std::isfinite(p.kappa) && std::isfinite(p.fidelity),
            "surrogate samples must be finite");
    d.x(i, 0) = (p.delta - box.delta_lo) / (box.delta_hi - box.delta_lo);
    d.x(i, 1) = (p.kappa - box.kappa_lo) / (box.kappa_hi - box.kappa_lo);
    d.y(i) = p.fidelity;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if ((d.x.row(i) - d.x.row(j)).norm() < 1e-9)
        fail(ErrorCode::ill_conditioned, "surrogate samples contain duplicate locations");
  const double range0 = d.x.col(0).maxCoeff() - d.x.col(0).minCoeff();
  const double range1 = d.x.col(1).maxCoeff() - d.x.col(1).minCoeff();
  if (range0 < 1e-9 || range1 < 1e-9)
    fail(ErrorCode::ill_conditioned, "surrogate samples do not span both axes");

  s.mean_ = d.y.mean();
  d.y.array() -= s.mean_;
  s.x_ = d.x;
  const double var = d.y.squaredNorm() / static_cast<double>(n);
  if (var <= 0.0) {
    s.alpha_ = Eigen::VectorXd::Zero(n);
    s.signal_ = 0.0;
    s.lml_ = evidence(d, 1.0, 1.0, 0.0, nullptr);
    return s;
  }

  auto unpack = [&](const std::vector<double>& t, double& l0, double& l1, double& sig) {
    l0 = std::clamp(std::exp(t[0]), kMinLength, kMaxLength);
    l1 = std::clamp(std::exp(t[1]), kMinLength, kMaxLength);
    sig = var * std::exp(std::clamp(t[2], -12.0, 12.0));
  };
  auto objective = [&](const std::vector<double>& t) {
    double l0, l1, sig;
    unpack(t, l0, l1, sig);
    return evidence(d, l0, l1, sig, nullptr);
  };
  NelderMeadConfig nm;
  nm.max_evaluations = 400;
  nm.f_tolerance = 1e-7;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_t;
  for (double l : {0.1, 0.3, 1.0}) {
    const double t0 = std::log(l);
    std::vector<std::vector<double>> simplex = {
        {t0, t0, 0.0}, {t0 + 0.5, t0, 0.0}, {t0, t0 + 0.5, 0.0}, {t0, t0, 1.0}};
    const NelderMeadResult r = nelder_mead(objective, simplex, nm);
    if (r.best_value > best) {
      best = r.best_value;
      best_t = r.best_point;
    }
  }
  if (!std::isfinite(best)) fail(ErrorCode::ill_conditioned, "surrogate kernel matrix is singular");
  unpack(best_t, s.length_[0], s.length_[1], s.signal_);
  s.lml_ = evidence(d, s.length_[0], s.length_[1], s.signal_, &s.alpha_);
  return s;
}

double Surrogate::predict(double delta, double kappa) const {
  if (signal_ == 0.0) return mean_;
  const double u0 = (delta - box_.delta_lo) / (box_.delta_hi - box_.delta_lo);
  const double u1 = (kappa - box_.kappa_lo) / (box_.kappa_hi - box_.kappa_lo);
  double acc = mean_;
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    const double a = (u0 - x_(i, 0)) / length_[0];
    const double b = (u1 - x_(i, 1)) / length_[1];
    acc += signal_ * std::exp(-0.5 * (a * a + b * b)) * alpha_(i);
  }
  return acc;
}

Surrogate surrogate_fit(const std::vector<Sample>& samples, const Box& box) {
  return Surrogate::fit(samples, box);
}

// ---------------------------------------------------------------- landscapes

RobustnessMap landscape_brute(const PulseShape& shape, double duration, const Grid& grid,
                              std::shared_ptr<const LindbladModel> model,
                              const RobustnessConfig& config) {
  grid.validate();
  const FidelityEvaluator nominal(model, config.task, {}, config.n_slices);
  const ControlSlices slices = nominal.slices_for(shape, duration);

  RobustnessMap map;
  map.delta_axis = grid.delta_axis;
  map.kappa_axis = grid.kappa_axis;
  map.provenance = Provenance::brute;
  const std::size_t nk = grid.kappa_axis.size();
  map.values.resize(static_cast<Eigen::Index>(grid.delta_axis.size()), static_cast<Eigen::Index>(nk));
  parallel_for(grid.size(), config.threads, [&](std::size_t idx) {
    const std::size_t i = idx / nk, j = idx % nk;
    const FidelityEvaluator eval(model, config.task, {grid.delta_axis[i], grid.kappa_axis[j]},
                                 config.n_slices);
    map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval(slices);
  });
  return map;
}

RobustnessMap estimate_from_samples(const std::vector<Sample>& samples, const Grid& grid,
                                    const Box& box) {
  grid.validate();
  const Surrogate s = Surrogate::fit(samples, box);
  RobustnessMap map;
  map.delta_axis = grid.delta_axis;
  map.kappa_axis = grid.kappa_axis;
  map.provenance = Provenance::estimated;
  map.samples = samples;
  map.values.resize(static_cast<Eigen::Index>(grid.delta_axis.size()),
                    static_cast<Eigen::Index>(grid.kappa_axis.size()));
  for (std::size_t i = 0; i < grid.delta_axis.size(); ++i)
    for (std::size_t j = 0; j < grid.kappa_axis.size(); ++j)
      map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::clamp(s.predict(grid.delta_axis[i], grid.kappa_axis[j]), 0.0, 1.0);
  return map;
}

std::vector<Sample> draw_samples(const Box& box, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(box.delta_lo, box.delta_hi);
  std::uniform_real_distribution<double> uk(box.kappa_lo, box.kappa_hi);
  std::vector<Sample> out(n);
  for (auto& s : out) {
    s.delta = ud(rng);
    s.kappa = uk(rng);
  }
  return out;
}

void evaluate_samples(std::vector<Sample>& samples, const PulseShape& shape, double duration,
                      std::shared_ptr<const LindbladModel> model, const RobustnessConfig& config) {
  const FidelityEvaluator nominal(model, config.task, {}, config.n_slices);
  const ControlSlices slices = nominal.slices_for(shape, duration);
  parallel_for(samples.size(), config.threads, [&](std::size_t i) {
    const FidelityEvaluator eval(model, config.task, {samples[i].delta, samples[i].kappa},
                                 config.n_slices);
    samples[i].fidelity = eval(slices);
  });
}

RobustnessMap landscape_estimate(const PulseShape& shape, double duration, const Grid& grid,
                                 std::shared_ptr<const LindbladModel> model, std::uint64_t seed,
                                 const RobustnessConfig& config) {
  require(config.n_samples >= 4, "estimation needs at least four samples");
  const Box box = config.sampling_box.value_or(Box::around(grid));
  std::vector<Sample> samples = draw_samples(box, config.n_samples, seed);
  evaluate_samples(samples, shape, duration, std::move(model), config);
  return estimate_from_samples(samples, grid, box);
}

double average_fidelity(const RobustnessMap& map, const WeightModel& weights) {
  weights.validate();
  require(map.values.rows() == static_cast<Eigen::Index>(map.delta_axis.size()) &&
              map.values.cols() == static_cast<Eigen::Index>(map.kappa_axis.size()) &&
              map.values.size() > 0,
          "map values do not match its axes");
  // Log-domain weights so that very narrow widths still normalize.
  std::vector<double> ld(map.delta_axis.size()), lk(map.kappa_axis.size());
  for (std::size_t i = 0; i < ld.size(); ++i) {
    const double z = map.delta_axis[i] / weights.sigma_delta;
    ld[i] = -0.5 * z * z;
  }
  for (std::size_t j = 0; j < lk.size(); ++j) {
    const double z = map.kappa_axis[j] / weights.sigma_kappa;
    lk[j] = -0.5 * z * z;
  }
  const double top = *std::max_element(ld.begin(), ld.end()) + *std::max_element(lk.begin(), lk.end());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ld.size(); ++i) {
    for (std::size_t j = 0; j < lk.size(); ++j) {
      const double w = std::exp(ld[i] + lk[j] - top);
      num += w * map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      den += w;
    }
  }
  return num / den;
}

double root_mean_square_error(const RobustnessMap& a, const RobustnessMap& b) {
  require(a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols(),
          "maps differ in shape");
  return std::sqrt((a.values - b.values).squaredNorm() / static_cast<double>(a.values.size()));
}

// ---------------------------------------------------------------- B-PM

BpmResult bpm_optimize(double duration, std::shared_ptr<const LindbladModel> model,
                       const PulseShape& start, const Grid& grid, const WeightModel& weights,
                       const BpmConfig& config) {
  require(duration > 0.0, "duration must be positive");
  grid.validate();
  weights.validate();
  config.optimizer.validate();
  require(config.restarts >= 0, "B-PM restarts must be non-negative");
  require(config.initial_spread > 0.0, "B-PM initial spread must be positive");
  require(config.spread_decay > 0.0 && config.spread_decay <= 1.0, "B-PM spread decay must lie in (0, 1]");
  const auto* pm = std::get_if<PmPulse>(&start.form);
  require(pm != nullptr, "B-PM starts from PM coefficients");

  std::vector<double> x0;
  for (const auto& row : pm->coefficients) x0.insert(x0.end(), row.begin(), row.end());
  const std::size_t dim = x0.size();
  OptimizerConfig shape_config = config.optimizer;
  shape_config.harmonics = static_cast<int>(pm->coefficients.size());

  const Box box = config.robustness.sampling_box.value_or(Box::around(grid));
  std::uint64_t candidate = 0;
  auto objective = [&](const std::vector<double>& x) {
    std::vector<Sample> samples =
        draw_samples(box, config.robustness.n_samples, derive_seed(config.optimizer.seed, candidate++));
    evaluate_samples(samples, pm_shape(x, shape_config), duration, model, config.robustness);
    return average_fidelity(estimate_from_samples(samples, grid, box), weights);
  };

  std::vector<double> centre = x0;
  double spread = config.initial_spread;
  NelderMeadResult nm;
  std::vector<double> trace;
  int evaluations = 0;
  for (int round = 0; round <= config.restarts; ++round, spread *= config.spread_decay) {
    std::vector<std::vector<double>> simplex(dim + 1, centre);
    for (std::size_t i = 0; i < dim; ++i) {
      double scale = config.optimizer.omega_max;
      if (i % 3 == 1) scale = kTwoPi;
      if (i % 3 == 2) scale = kTwoPi / duration;
      simplex[i + 1][i] += spread * std::max(std::abs(centre[i]), scale);
    }
    nm = nelder_mead(objective, simplex, config.nelder_mead);
    trace.insert(trace.end(), nm.trace.begin(), nm.trace.end());
    evaluations += nm.n_evaluations;
    centre = nm.best_point;
  }

  BpmResult out;
  OptimizationResult& r = out.result;
  r.method = Method::bpm;
  r.duration_us = duration;
  r.n_slices = config.robustness.n_slices;
  r.best_shape = pm_shape(nm.best_point, shape_config);
  r.n_evaluations = evaluations;
  r.trace = std::move(trace);
  r.seed = config.optimizer.seed;
  r.trials.push_back({config.optimizer.seed, nm.best_value, r.n_evaluations, nm.budget_exhausted});
  const FidelityEvaluator nominal(model, config.robustness.task, {}, config.robustness.n_slices);
  r.best_fidelity = nominal(r.best_shape, duration);
  out.map = landscape_brute(r.best_shape, duration, grid, model, config.robustness);
  out.average_fidelity = average_fidelity(out.map, weights);
  return out;
}

}  // namespace nvdfs
