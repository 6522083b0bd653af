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

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "nvdfs/error.hpp"
#include "nvdfs/optimizers.hpp"
#include "nvdfs/parallel.hpp"
#include "nvdfs/pulses.hpp"

using namespace nvdfs;

namespace {

std::shared_ptr<const LindbladModel> model() {
  static const auto m = std::make_shared<const LindbladModel>(SystemParams::defaults());
  return m;
}

PulseShape pwc(std::vector<double> p, std::vector<double> s) {
  PulseShape shape;
  shape.form = PiecewiseConstantPulse{std::move(p), std::move(s)};
  return shape;
}

double max_rel_error(const std::vector<double>& g, const std::vector<double>& ref) {
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(g[i] - ref[i]));
    scale = std::max(scale, std::abs(ref[i]));
  }
  return err / scale;
}

std::vector<double> central_difference(const PulseShape& shape, double duration) {
  const auto& p = std::get<PiecewiseConstantPulse>(shape.form);
  const std::size_t n = p.u_p.size();
  const FidelityEvaluator f(model(), {}, {}, n);
  const double h = 1e-5 * shape.omega_max;
  std::vector<double> out(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    PiecewiseConstantPulse up = p, dn = p;
    (i < n ? up.u_p[i] : up.u_s[i - n]) += h;
    (i < n ? dn.u_p[i] : dn.u_s[i - n]) -= h;
    out[i] = (f(pwc(up.u_p, up.u_s), duration) - f(pwc(dn.u_p, dn.u_s), duration)) / (2.0 * h);
  }
  return out;
}

OptimizerConfig small(int trials, std::uint64_t seed) {
  OptimizerConfig c;
  c.n_trials = trials;
  c.seed = seed;
  c.n_slices = 200;
  c.nelder_mead.max_evaluations = 120;
  return c;
}

}  // namespace

TEST(NelderMead, FindsQuadraticMaximum) {
  const std::vector<double> target{0.3, -1.7};
  auto f = [&](const std::vector<double>& x) {
    return -(std::pow(x[0] - target[0], 2) + std::pow(x[1] - target[1], 2));
  };
  NelderMeadConfig cfg;
  cfg.f_tolerance = 1e-14;
  const NelderMeadResult r = nelder_mead(f, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, cfg);
  EXPECT_NEAR(r.best_point[0], target[0], 1e-3);
  EXPECT_NEAR(r.best_point[1], target[1], 1e-3);
  EXPECT_FALSE(r.budget_exhausted);
  EXPECT_EQ(static_cast<std::size_t>(r.n_evaluations), r.trace.size());
}

TEST(NelderMead, RespectsBudgetAndHandlesNaN) {
  int calls = 0;
  auto f = [&](const std::vector<double>& x) {
    ++calls;
    return x[0] > 2.0 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  NelderMeadConfig cfg;
  cfg.max_evaluations = 25;
  cfg.f_tolerance = 0.0;
  const NelderMeadResult r = nelder_mead(f, {{0.0}, {1.0}}, cfg);
  EXPECT_EQ(calls, 25);
  EXPECT_EQ(r.n_evaluations, 25);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_LE(r.best_point[0], 2.0);
  EXPECT_TRUE(std::isfinite(r.best_value));
}

TEST(NelderMead, RejectsBadSimplex) {
  auto f = [](const std::vector<double>&) { return 0.0; };
  EXPECT_THROW(nelder_mead(f, {{0.0, 0.0}, {1.0, 0.0}}), Error);
}

TEST(Grape, GradientLengthAndZeroFieldSlice) {
  const double duration = 4.0;
  const PulseShape zero = pwc(std::vector<double>(8, 0.0), std::vector<double>(8, 0.0));
  const GrapeGradient g = grape_gradient(*model(), zero, duration);
  ASSERT_EQ(g.gradient.size(), 16u);
  const std::vector<double> fd = central_difference(zero, duration);
  EXPECT_NEAR(g.gradient[8], fd[8], 1e-4 * std::max(1e-12, std::abs(fd[8])) + 1e-10);
  // Nuclear dephasing acts in the product basis, so a little population
  // leaks from psi_1 into psi_2 even without drive.
  ControlSlices off{duration, std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)};
  EXPECT_NEAR(g.fidelity, FidelityEvaluator(model(), {}, {}, 8)(off), 1e-14);
}

TEST(Grape, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.95 * kPi, 0.95 * kPi);
  std::uniform_int_distribution<int> len(2, 20);
  std::uniform_real_distribution<double> dur(1.0, 12.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = len(rng);
    std::vector<double> p(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = u(rng);
      s[i] = u(rng);
    }
    const PulseShape shape = pwc(p, s);
    const double duration = dur(rng);
    const GrapeGradient g = grape_gradient(*model(), shape, duration);
    EXPECT_NEAR(g.fidelity, FidelityEvaluator(model(), {}, {}, n)(shape, duration), 1e-12);
    EXPECT_LT(max_rel_error(g.gradient, central_difference(shape, duration)), 1e-4) << trial;
  }
}

TEST(Grape, GradientUnderDisturbance) {
  const PulseShape shape = pwc({0.5, 1.5, -0.7, 2.0}, {2.2, -1.0, 0.4, 0.9});
  const Disturbance dist{0.4, -0.2};
  const GrapeGradient g = grape_gradient(*model(), shape, 3.0, {}, dist);
  const FidelityEvaluator f(model(), {}, dist, 4);
  const double h = 1e-5 * kPi;
  PulseShape up = pwc({0.5, 1.5 + h, -0.7, 2.0}, {2.2, -1.0, 0.4, 0.9});
  PulseShape dn = pwc({0.5, 1.5 - h, -0.7, 2.0}, {2.2, -1.0, 0.4, 0.9});
  EXPECT_NEAR(g.gradient[1], (f(up, 3.0) - f(dn, 3.0)) / (2.0 * h), 1e-4 * std::abs(g.gradient[1]));
}

TEST(Grape, AscentReachesStationaryPoint) {
  OptimizerConfig cfg;
  cfg.grape_slices = 20;
  cfg.grape_tolerance = 1e-10;
  cfg.grape_max_iterations = 3000;
  const PulseShape start = grape_initial_shape(GrapeInit::gaussian, 4.0, 5, cfg);
  const GrapeRun run = grape_ascent(*model(), start, 4.0, cfg);
  EXPECT_GT(run.fidelity, FidelityEvaluator(model(), {}, {}, 20)(start, 4.0));
  EXPECT_LT(run.final_gradient_norm, 1e-2 * run.initial_gradient_norm);
  for (double v : std::get<PiecewiseConstantPulse>(run.shape.form).u_p) EXPECT_LE(std::abs(v), kPi);
}

TEST(Grape, InitialShapes) {
  OptimizerConfig cfg;
  const PulseShape a = grape_initial_shape(GrapeInit::inverse_lambda, 4.0, 1, cfg);
  const PulseShape b = grape_initial_shape(GrapeInit::inverse_lambda, 4.0, 1, cfg);
  const auto& pa = std::get<PiecewiseConstantPulse>(a.form);
  EXPECT_EQ(pa.u_p, std::get<PiecewiseConstantPulse>(b.form).u_p);
  EXPECT_EQ(pa.u_p.size(), 100u);
  EXPECT_EQ(pa.u_p, pa.u_s);
  const double amp = pa.u_p[0] / envelope(0.02, 4.0);
  for (std::size_t k = 0; k < 100; ++k)
    EXPECT_NEAR(pa.u_p[k], amp * envelope((k + 0.5) * 0.04, 4.0), 1e-12);
  EXPECT_GE(amp, 0.5 * kPi);
  EXPECT_LE(amp, 0.9 * kPi);
}

TEST(Optimizers, StirapSearchBeatsFixed) {
  OptimizerConfig cfg = small(4, 2);
  cfg.nelder_mead.max_evaluations = 200;
  const OptimizationResult r = optimize_stirap(4.0, model(), cfg);
  PulseShape fixed;
  fixed.form = GaussianPulse{kPi, 0.5, std::sqrt(2.0) * 0.5};
  EXPECT_GT(r.best_fidelity, FidelityEvaluator(model(), {}, {}, 200)(fixed, 4.0) + 0.3);
}

TEST(Optimizers, ResultsRoundTripAndAccounting) {
  for (Method m : {Method::stirap, Method::crab, Method::pm, Method::grape_gaussian}) {
    OptimizerConfig cfg = small(3, 9);
    cfg.grape_slices = 20;
    cfg.grape_max_iterations = 30;
    const OptimizationResult r = optimize(m, 4.0, model(), cfg);
    const FidelityEvaluator f(model(), {}, {}, r.n_slices);
    EXPECT_DOUBLE_EQ(f(r.best_shape, 4.0), r.best_fidelity) << method_name(m);
    EXPECT_EQ(r.trials.size(), 3u);
    int evals = 0;
    double best = -1.0;
    for (const TrialRecord& t : r.trials) {
      evals += t.n_evaluations;
      best = std::max(best, t.best_fidelity);
    }
    EXPECT_EQ(evals, r.n_evaluations) << method_name(m);
    EXPECT_EQ(static_cast<std::size_t>(evals), r.trace.size()) << method_name(m);
    EXPECT_DOUBLE_EQ(best, r.best_fidelity);
    EXPECT_DOUBLE_EQ(r.trials[r.best_trial].best_fidelity, r.best_fidelity);
  }
}

TEST(Optimizers, DeterministicAcrossRunsAndThreads) {
  OptimizerConfig cfg = small(4, 77);
  cfg.threads = 1;
  const OptimizationResult a = optimize_pm(4.0, model(), cfg);
  cfg.threads = 3;
  const OptimizationResult b = optimize_pm(4.0, model(), cfg);
  EXPECT_EQ(a.best_fidelity, b.best_fidelity);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.best_trial, b.best_trial);
  cfg.seed = 78;
  EXPECT_NE(optimize_pm(4.0, model(), cfg).trace, a.trace);
}

TEST(Optimizers, ZeroCrabGivesNoTransfer) {
  PulseShape s;
  s.form = CrabPulse{{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}, {0.0, 0.0, 0.0}};
  SystemParams closed = SystemParams::defaults();
  closed.t2_nuclear1_us = closed.t2_nuclear2_us = std::numeric_limits<double>::infinity();
  const auto m = std::make_shared<const LindbladModel>(closed);
  EXPECT_NEAR(FidelityEvaluator(m)(s, 4.0), 0.0, 1e-14);
  // With nuclear dephasing the result equals the undriven leakage.
  ControlSlices off{4.0, std::vector<double>(1000, 0.0), std::vector<double>(1000, 0.0)};
  EXPECT_NEAR(FidelityEvaluator(model())(s, 4.0), FidelityEvaluator(model())(off), 1e-14);
}

TEST(Optimizers, MethodNames) {
  for (Method m : {Method::stirap, Method::grape_gaussian, Method::grape_inverse_lambda, Method::crab,
                   Method::pm, Method::bpm})
    EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_EQ(parse_method("grape_g"), Method::grape_gaussian);
  EXPECT_THROW(parse_method("simulated_annealing"), Error);
}

TEST(Optimizers, ConfigValidation) {
  OptimizerConfig c;
  c.n_trials = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.omega_max = -1.0;
  EXPECT_THROW(optimize_pm(4.0, model(), c), Error);
  EXPECT_THROW(optimize_pm(-4.0, model()), Error);
}

TEST(Parallel, CoversEveryIndexAndPropagatesErrors) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
  EXPECT_GE(resolve_threads(0), 1);
}
