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

#include "nvdfs/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nvdfs/error.hpp"
#include "nvdfs/parallel.hpp"

namespace nvdfs {

// ---------------------------------------------------------------- Nelder-Mead

namespace {

using Point = std::vector<double>;

Point affine(const Point& base, const Point& toward, double t) {
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<Point> simplex,
                             const NelderMeadConfig& config) {
  require(!simplex.empty(), "simplex needs vertices");
  const std::size_t dim = simplex.front().size();
  require(dim >= 1 && simplex.size() == dim + 1, "simplex needs n + 1 vertices in n dimensions");
  for (const auto& v : simplex) require(v.size() == dim, "simplex vertices differ in dimension");
  require(config.max_evaluations >= static_cast<int>(dim) + 1, "evaluation budget below simplex size");
  require(config.f_tolerance >= 0.0, "tolerance must be non-negative");

  NelderMeadResult res;
  res.best_value = -std::numeric_limits<double>::infinity();
  auto eval = [&](const Point& x) {
    double f = objective(x);
    if (std::isnan(f)) f = -std::numeric_limits<double>::infinity();
    ++res.n_evaluations;
    res.trace.push_back(f);
    if (f > res.best_value) {
      res.best_value = f;
      res.best_point = x;
    }
    return f;
  };
  auto budget_left = [&](int needed) { return res.n_evaluations + needed <= config.max_evaluations; };

  std::vector<double> f(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) f[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
    {
      std::vector<Point> vs;
      std::vector<double> fs;
      for (std::size_t i : order) {
        vs.push_back(std::move(simplex[i]));
        fs.push_back(f[i]);
      }
      simplex = std::move(vs);
      f = std::move(fs);
    }
    if (f.front() - f.back() < config.f_tolerance) break;
    if (!budget_left(1)) {
      res.budget_exhausted = true;
      break;
    }

    Point centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
    const Point& worst = simplex.back();

    const Point xr = affine(centroid, worst, -config.reflection);
    const double fr = eval(xr);
    if (fr > f.front()) {
      if (!budget_left(1)) {
        simplex.back() = xr;
        f.back() = fr;
        continue;
      }
      const Point xe = affine(centroid, xr, config.expansion);
      const double fe = eval(xe);
      simplex.back() = fe > fr ? xe : xr;
      f.back() = std::max(fe, fr);
      continue;
    }
    if (fr > f[dim - 1]) {
      simplex.back() = xr;
      f.back() = fr;
      continue;
    }
    if (!budget_left(1)) {
      res.budget_exhausted = true;
      break;
    }
    const bool outside = fr > f.back();
    const Point xc = outside ? affine(centroid, xr, config.contraction)
                             : affine(centroid, worst, config.contraction);
    const double fc = eval(xc);
    if (outside ? fc >= fr : fc > f.back()) {
      simplex.back() = xc;
      f.back() = fc;
      continue;
    }
    if (!budget_left(static_cast<int>(dim))) {
      res.budget_exhausted = true;
      break;
    }
    for (std::size_t i = 1; i <= dim; ++i) {
      simplex[i] = affine(simplex.front(), simplex[i], config.shrink);
      f[i] = eval(simplex[i]);
    }
  }
  return res;
}

// ---------------------------------------------------------------- evaluator

void TransferTask::validate() const {
  require(initial_level >= 1 && initial_level <= kDim, "initial level must be in 1..8");
  require(target_level >= 1 && target_level <= kDim, "target level must be in 1..8");
}

FidelityEvaluator::FidelityEvaluator(std::shared_ptr<const LindbladModel> model, TransferTask task,
                                     Disturbance dist, std::size_t n_slices)
    : model_(std::move(model)), task_(task), dist_(dist), n_slices_(n_slices) {
  require(model_ != nullptr, "evaluator needs a model");
  require(n_slices_ >= 1, "evaluator needs at least one slice");
  task_.validate();
  dist_.validate();
}

ControlSlices FidelityEvaluator::slices_for(const PulseShape& shape, double duration) const {
  if (const auto* pwc = std::get_if<PiecewiseConstantPulse>(&shape.form))
    return discretize(shape, duration, pwc->u_p.size());
  return discretize(shape, duration, n_slices_);
}

double FidelityEvaluator::operator()(const ControlSlices& slices) const {
  const DensityMatrix rho =
      final_state(*model_, slices, dist_, DensityMatrix::pure(task_.initial_level));
  return fidelity(rho, task_.target_level);
}

double FidelityEvaluator::operator()(const PulseShape& shape, double duration) const {
  return (*this)(slices_for(shape, duration));
}

// ---------------------------------------------------------------- results

const char* method_name(Method m) {
  switch (m) {
    case Method::stirap: return "stirap";
    case Method::grape_gaussian: return "grape_gaussian";
    case Method::grape_inverse_lambda: return "grape_inverse_lambda";
    case Method::crab: return "crab";
    case Method::pm: return "pm";
    case Method::bpm: return "bpm";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::stirap, Method::grape_gaussian, Method::grape_inverse_lambda,
                   Method::crab, Method::pm, Method::bpm})
    if (name == method_name(m)) return m;
  if (name == "grape_g") return Method::grape_gaussian;
  if (name == "grape_1/lambda" || name == "grape_inv") return Method::grape_inverse_lambda;
  fail(ErrorCode::invalid_argument, "unknown method '" + name + "'");
}

void OptimizerConfig::validate() const {
  require(n_trials >= 1, "need at least one trial");
  require(n_slices >= 1, "need at least one slice");
  require(harmonics >= 1, "need at least one harmonic");
  require(omega_max > 0.0 && std::isfinite(omega_max), "omega_max must be positive");
  require(grape_slices >= 2, "GRAPE needs at least two slices");
  require(grape_max_iterations >= 1, "GRAPE needs at least one iteration");
  require(grape_tolerance >= 0.0, "GRAPE tolerance must be non-negative");
  task.validate();
  disturbance.validate();
}

namespace {

struct TrialOutcome {
  PulseShape shape;
  double fidelity = -1.0;
  std::vector<double> trace;
  bool budget_exhausted = false;
  std::uint64_t seed = 0;
};

OptimizationResult run_trials(Method method, double duration, std::size_t n_slices,
                              const OptimizerConfig& config,
                              const std::function<TrialOutcome(std::uint64_t)>& trial) {
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.n_trials));
  parallel_for(outcomes.size(), config.threads, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(config.seed, i);
    outcomes[i] = trial(s);
    outcomes[i].seed = s;
  });

  OptimizationResult res;
  res.method = method;
  res.duration_us = duration;
  res.n_slices = n_slices;
  res.seed = config.seed;
  res.best_fidelity = -1.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    res.trials.push_back({o.seed, o.fidelity, static_cast<int>(o.trace.size()), o.budget_exhausted});
    res.trace.insert(res.trace.end(), o.trace.begin(), o.trace.end());
    if (o.fidelity > res.best_fidelity) {
      res.best_fidelity = o.fidelity;
      res.best_shape = o.shape;
      res.best_trial = static_cast<int>(i);
    }
  }
  res.n_evaluations = static_cast<int>(res.trace.size());
  return res;
}

PulseShape with_common(PulseShape s, const OptimizerConfig& config) {
  s.omega_max = config.omega_max;
  s.boundary_exponent = config.boundary_exponent;
  return s;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

TrialOutcome simplex_trial(const FidelityEvaluator& eval, double duration,
                           const std::function<PulseShape(const Point&)>& make,
                           std::vector<Point> simplex, const NelderMeadConfig& nm) {
  auto objective = [&](const Point& x) { return eval(make(x), duration); };
  NelderMeadResult r = nelder_mead(objective, std::move(simplex), nm);
  TrialOutcome o;
  o.shape = make(r.best_point);
  o.fidelity = r.best_value;
  o.trace = std::move(r.trace);
  o.budget_exhausted = r.budget_exhausted;
  return o;
}

}  // namespace

// ---------------------------------------------------------------- STIRAP

OptimizationResult optimize_stirap(double duration, std::shared_ptr<const LindbladModel> model,
                                   const OptimizerConfig& config) {
  require(duration > 0.0, "duration must be positive");
  config.validate();
  const FidelityEvaluator eval(model, config.task, config.disturbance, config.n_slices);
  auto make = [&](const Point& x) {
    GaussianPulse g{kPi, std::max(std::abs(x[0]), 1e-6), x[1]};
    return with_common(PulseShape{g}, config);
  };
  return run_trials(Method::stirap, duration, config.n_slices, config, [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> simplex(3);
    for (auto& v : simplex) v = {uniform(rng, duration / 16.0, duration / 2.0), uniform(rng, 0.0, duration)};
    return simplex_trial(eval, duration, make, std::move(simplex), config.nelder_mead);
  });
}

// ---------------------------------------------------------------- GRAPE

GrapeGradient grape_gradient(const LindbladModel& model, const PulseShape& shape, double duration,
                             const TransferTask& task, const Disturbance& dist) {
  const auto* pwc = std::get_if<PiecewiseConstantPulse>(&shape.form);
  require(pwc != nullptr, "GRAPE gradient needs a piecewise-constant shape");
  task.validate();
  const ControlSlices slices = discretize(shape, duration, pwc->u_p.size());
  const std::size_t n = slices.size();
  require(n >= 2, "GRAPE gradient needs at least two slices");
  const double dt = slices.width();

  const auto gen = std::make_unique<RealGenerator>(model.real_generator(dist));
  const RealOp directions[2] = {gen->pump, gen->stokes};
  const double direction_norms[2] = {gen->pump_norm, gen->stokes_norm};
  const RealVec target = to_real(model.to_product(DensityMatrix::pure(task.target_level).rho));

  std::vector<RealVec> dp(n), ds(n);
  auto m = std::make_unique<RealOp>();
  RealVec x = to_real(model.to_product(DensityMatrix::pure(task.initial_level).rho));
  for (std::size_t k = 0; k < n; ++k) {
    const double bound = gen->assemble(slices.omega_p[k], slices.omega_s[k], *m);
    RealVec d[2] = {RealVec::Zero(), RealVec::Zero()};
    taylor_step_with_derivatives(*m, bound, dt, directions, direction_norms, 2, x, d);
    dp[k] = d[0];
    ds[k] = d[1];
  }

  GrapeGradient out;
  out.fidelity = target.dot(x);
  out.gradient.assign(2 * n, 0.0);
  RealVec lambda = target;
  for (std::size_t k = n; k-- > 0;) {
    out.gradient[k] = lambda.dot(dp[k]);
    out.gradient[n + k] = lambda.dot(ds[k]);
    if (k == 0) break;
    const double bound = gen->assemble(slices.omega_p[k], slices.omega_s[k], *m);
    taylor_step(*m, bound, dt, lambda, true);
  }
  return out;
}

PulseShape grape_initial_shape(GrapeInit init, double duration, std::uint64_t seed,
                               const OptimizerConfig& config) {
  require(duration > 0.0, "duration must be positive");
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(config.grape_slices);
  PiecewiseConstantPulse p;
  p.u_p.resize(n);
  p.u_s.resize(n);
  const double dt = duration / static_cast<double>(n);
  if (init == GrapeInit::inverse_lambda) {
    const double amp = uniform(rng, 0.5 * kPi, 0.9 * kPi);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = (static_cast<double>(k) + 0.5) * dt;
      p.u_p[k] = p.u_s[k] = amp * envelope(t, duration, config.boundary_exponent);
    }
  } else {
    const double sigma = uniform(rng, 0.3, 3.0);
    const PulseShape g{GaussianPulse{0.9 * kPi, sigma, std::sqrt(2.0) * sigma}};
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = evaluate(g, (static_cast<double>(k) + 0.5) * dt, duration);
      p.u_p[k] = v[0];
      p.u_s[k] = v[1];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    p.u_p[k] = std::clamp(p.u_p[k], -config.omega_max, config.omega_max);
    p.u_s[k] = std::clamp(p.u_s[k], -config.omega_max, config.omega_max);
  }
  return with_common(PulseShape{std::move(p)}, config);
}

namespace {

double projected_norm(const std::vector<double>& u, const std::vector<double>& g, double limit) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if ((u[i] >= limit && g[i] > 0.0) || (u[i] <= -limit && g[i] < 0.0)) continue;
    s += g[i] * g[i];
  }
  return std::sqrt(s);
}

PulseShape pack(const std::vector<double>& u, const PulseShape& like) {
  const std::size_t n = u.size() / 2;
  PiecewiseConstantPulse p;
  p.u_p.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n));
  p.u_s.assign(u.begin() + static_cast<std::ptrdiff_t>(n), u.end());
  PulseShape s = like;
  s.form = std::move(p);
  return s;
}

}  // namespace

GrapeRun grape_ascent(const LindbladModel& model, PulseShape start, double duration,
                      const OptimizerConfig& config) {
  config.validate();
  const auto* pwc = std::get_if<PiecewiseConstantPulse>(&start.form);
  require(pwc != nullptr, "GRAPE needs a piecewise-constant start");
  const double limit = start.omega_max;
  std::shared_ptr<const LindbladModel> alias(&model, [](const LindbladModel*) {});
  const FidelityEvaluator eval(alias, config.task, config.disturbance);

  std::vector<double> u(pwc->u_p);
  u.insert(u.end(), pwc->u_s.begin(), pwc->u_s.end());
  for (double& v : u) v = std::clamp(v, -limit, limit);

  GrapeRun run;
  run.shape = pack(u, start);
  run.fidelity = eval(run.shape, duration);
  run.trace.push_back(run.fidelity);

  GrapeGradient gg = grape_gradient(model, run.shape, duration, config.task, config.disturbance);
  run.initial_gradient_norm = projected_norm(u, gg.gradient, limit);
  run.final_gradient_norm = run.initial_gradient_norm;
  const double gnorm = std::sqrt(std::inner_product(gg.gradient.begin(), gg.gradient.end(),
                                                    gg.gradient.begin(), 0.0));
  if (gnorm == 0.0) return run;
  double step = 0.1 * limit / gnorm;

  constexpr int kMaxHalvings = 40;
  std::vector<double> trial(u.size());
  for (run.iterations = 0; run.iterations < config.grape_max_iterations; ++run.iterations) {
    bool improved = false;
    double f_new = run.fidelity;
    double tried = step;
    for (int h = 0; h < kMaxHalvings; ++h, tried *= 0.5) {
      bool moved = false;
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = std::clamp(u[i] + tried * gg.gradient[i], -limit, limit);
        moved |= trial[i] != u[i];
      }
      if (!moved) break;
      f_new = eval(pack(trial, start), duration);
      run.trace.push_back(f_new);
      if ((improved = f_new > run.fidelity)) break;
    }
    if (!improved) break;
    const double gain = f_new - run.fidelity;
    GrapeGradient next = grape_gradient(model, pack(trial, start), duration, config.task,
                                        config.disturbance);
    // Barzilai-Borwein length from the accepted move; doubling if curvature is not negative.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double si = trial[i] - u[i];
      ss += si * si;
      sy += si * (gg.gradient[i] - next.gradient[i]);
    }
    step = sy > 0.0 ? ss / sy : 2.0 * tried;
    u = trial;
    run.fidelity = f_new;
    run.shape = pack(u, start);
    gg = std::move(next);
    run.final_gradient_norm = projected_norm(u, gg.gradient, limit);
    if (gain < config.grape_tolerance) break;
  }
  run.budget_exhausted = run.iterations >= config.grape_max_iterations;
  return run;
}

OptimizationResult optimize_grape(double duration, std::shared_ptr<const LindbladModel> model,
                                  GrapeInit init, const OptimizerConfig& config) {
  require(duration > 0.0, "duration must be positive");
  require(model != nullptr, "optimizer needs a model");
  config.validate();
  const Method method = init == GrapeInit::gaussian ? Method::grape_gaussian : Method::grape_inverse_lambda;
  return run_trials(method, duration, static_cast<std::size_t>(config.grape_slices), config,
                    [&](std::uint64_t seed) {
                      GrapeRun r = grape_ascent(*model, grape_initial_shape(init, duration, seed, config),
                                                duration, config);
                      TrialOutcome o;
                      o.shape = std::move(r.shape);
                      o.fidelity = r.fidelity;
                      o.trace = std::move(r.trace);
                      o.budget_exhausted = r.budget_exhausted;
                      return o;
                    });
}

// ---------------------------------------------------------------- CRAB and PM

OptimizationResult optimize_crab(double duration, std::shared_ptr<const LindbladModel> model,
                                 const OptimizerConfig& config) {
  require(duration > 0.0, "duration must be positive");
  config.validate();
  const FidelityEvaluator eval(model, config.task, config.disturbance, config.n_slices);
  const auto nc = static_cast<std::size_t>(config.harmonics);
  return run_trials(Method::crab, duration, config.n_slices, config, [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> r(nc);
    for (double& v : r) v = uniform(rng, -0.5, 0.5);
    auto make = [&](const Point& x) {
      CrabPulse c;
      c.randomization = r;
      for (std::size_t i = 0; i < nc; ++i) c.coefficients.push_back({x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]});
      return with_common(PulseShape{std::move(c)}, config);
    };
    std::vector<Point> simplex(4 * nc + 1, Point(4 * nc));
    for (auto& v : simplex)
      for (double& c : v) c = uniform(rng, -config.omega_max, config.omega_max);
    return simplex_trial(eval, duration, make, std::move(simplex), config.nelder_mead);
  });
}

std::vector<double> draw_pm_coefficients(double duration, const OptimizerConfig& config,
                                         std::mt19937_64& rng) {
  const auto nc = static_cast<std::size_t>(config.harmonics);
  std::vector<double> x(3 * nc);
  for (std::size_t i = 0; i < nc; ++i) {
    x[3 * i] = uniform(rng, -config.omega_max, config.omega_max);
    const double v = uniform(rng, kTwoPi / duration, kTwoPi * static_cast<double>(nc) / duration);
    x[3 * i + 1] = uniform(rng, 0.0, kTwoPi * v);
    x[3 * i + 2] = v;
  }
  return x;
}

PulseShape pm_shape(const std::vector<double>& x, const OptimizerConfig& config) {
  require(!x.empty() && x.size() % 3 == 0, "PM coefficients come in triples");
  PmPulse p;
  for (std::size_t i = 0; i < x.size(); i += 3) p.coefficients.push_back({x[i], x[i + 1], x[i + 2]});
  return with_common(PulseShape{std::move(p)}, config);
}

OptimizationResult optimize_pm(double duration, std::shared_ptr<const LindbladModel> model,
                               const OptimizerConfig& config) {
  require(duration > 0.0, "duration must be positive");
  config.validate();
  const FidelityEvaluator eval(model, config.task, config.disturbance, config.n_slices);
  auto make = [&](const Point& x) { return pm_shape(x, config); };
  return run_trials(Method::pm, duration, config.n_slices, config, [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> simplex(3 * static_cast<std::size_t>(config.harmonics) + 1);
    for (auto& v : simplex) v = draw_pm_coefficients(duration, config, rng);
    return simplex_trial(eval, duration, make, std::move(simplex), config.nelder_mead);
  });
}

OptimizationResult optimize(Method method, double duration, std::shared_ptr<const LindbladModel> model,
                            const OptimizerConfig& config) {
  switch (method) {
    case Method::stirap: return optimize_stirap(duration, std::move(model), config);
    case Method::grape_gaussian: return optimize_grape(duration, std::move(model), GrapeInit::gaussian, config);
    case Method::grape_inverse_lambda:
      return optimize_grape(duration, std::move(model), GrapeInit::inverse_lambda, config);
    case Method::crab: return optimize_crab(duration, std::move(model), config);
    case Method::pm: return optimize_pm(duration, std::move(model), config);
    case Method::bpm: break;
  }
  fail(ErrorCode::invalid_argument, "B-PM needs robustness weights; use bpm_optimize");
}

}  // namespace nvdfs
