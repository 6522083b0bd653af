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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nvdfs/calibration.hpp"
#include "nvdfs/error.hpp"
#include "nvdfs/optimizers.hpp"
#include "nvdfs/pulses.hpp"

using namespace nvdfs;

namespace {

struct Synthetic {
  std::vector<double> x, y;
};

// y = a x + b plus Gaussian noise at 1% of the largest |y|.
Synthetic affine(double a, double b, double x0, double x1, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Synthetic s;
  double top = 0.0;
  for (int i = 0; i < n; ++i) {
    s.x.push_back(x0 + (x1 - x0) * i / (n - 1));
    s.y.push_back(a * s.x.back() + b);
    top = std::max(top, std::abs(s.y.back()));
  }
  std::normal_distribution<double> noise(0.0, 0.01 * top);
  for (double& v : s.y) v += noise(rng);
  return s;
}

}  // namespace

TEST(Calibration, ExactLineRecovered) {
  const CalibrationFit f = linear_fit({0.0, 1.0, 2.0, 3.0}, {1.0, 3.5, 6.0, 8.5});
  EXPECT_DOUBLE_EQ(f.a, 2.5);
  EXPECT_DOUBLE_EQ(f.b, 1.0);
  EXPECT_NEAR(f.residual_rms, 0.0, 1e-15);
  EXPECT_NEAR(f.a_stderr, 0.0, 1e-15);
  EXPECT_EQ(f.n_points, 4u);
}

TEST(Calibration, FlatLine) {
  const CalibrationFit f = linear_fit({-1.0, 0.5, 2.0}, {0.3, 0.3, 0.3});
  EXPECT_NEAR(f.a, 0.0, 1e-16);
  EXPECT_NEAR(f.b, 0.3, 1e-16);
}

TEST(Calibration, DegenerateX) {
  try {
    linear_fit({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_x);
  }
  EXPECT_THROW(linear_fit({1.0}, {1.0}), Error);
  EXPECT_THROW(linear_fit({1.0, 2.0}, {1.0}), Error);
}

TEST(Calibration, QuotedCoefficientsRecoveredFromNoisyData) {
  const Synthetic rabi = affine(kRabiPerVolt.a, kRabiPerVolt.b, 0.0, 0.2, 40, 1);
  const CalibrationFit fr = linear_fit(rabi.x, rabi.y);
  EXPECT_NEAR(fr.a, kRabiPerVolt.a, 0.01 * kRabiPerVolt.a);
  EXPECT_NEAR(fr.b, kRabiPerVolt.b, kRabiPerVolt.b_uncertainty);

  const Synthetic osc = affine(kOscilloscopePerAwg.a, kOscilloscopePerAwg.b, 0.0, 1.0, 40, 2);
  const CalibrationFit fo = linear_fit(osc.x, osc.y);
  EXPECT_NEAR(fo.a, kOscilloscopePerAwg.a, kOscilloscopePerAwg.a_uncertainty);
  EXPECT_NEAR(fo.b, kOscilloscopePerAwg.b, kOscilloscopePerAwg.b_uncertainty);

  const Synthetic vf = affine(kVoltPerFrequency.a, kVoltPerFrequency.b, 0.0, 3.0, 40, 3);
  const CalibrationFit fv = linear_fit(vf.x, vf.y);
  EXPECT_NEAR(fv.a, kVoltPerFrequency.a, kVoltPerFrequency.a_uncertainty);
  EXPECT_NEAR(fv.b, kVoltPerFrequency.b, kVoltPerFrequency.b_uncertainty);
}

TEST(Calibration, StandardErrorsTrackScatter) {
  // Over many seeds the spread of fitted slopes matches the mean reported stderr.
  double sum = 0.0, sum2 = 0.0, se = 0.0;
  const int runs = 400;
  for (int s = 0; s < runs; ++s) {
    const Synthetic d = affine(2.0, 1.0, 0.0, 1.0, 12, 100 + s);
    const CalibrationFit f = linear_fit(d.x, d.y);
    sum += f.a;
    sum2 += f.a * f.a;
    se += f.a_stderr;
  }
  const double mean = sum / runs, sd = std::sqrt(sum2 / runs - mean * mean);
  EXPECT_NEAR(sd, se / runs, 0.15 * sd);
}

TEST(Calibration, RescaleIsAffineInvariant) {
  OptimizerConfig cfg;
  std::mt19937_64 rng(4);
  const PulseShape pm = pm_shape(draw_pm_coefficients(4.0, cfg, rng), cfg);
  const SampledField sim = sample(pm, 4.0, 401);
  for (auto [gain, offset] : {std::pair{0.016, -0.0026}, {3.0, 1.5}, {1e-3, 0.0}}) {
    MeasuredTrace real;
    real.times_us = sim.times;
    for (double v : sim.omega_p) real.volts.push_back(gain * v + offset);
    const RescaledTrace r = rescale_trace(real, sim, Channel::pump);
    EXPECT_DOUBLE_EQ(r.offset, offset);
    for (std::size_t i = 0; i < sim.size(); ++i) EXPECT_NEAR(r.values[i], sim.omega_p[i], 1e-12);
    EXPECT_NEAR(shape_discrepancy(sim.omega_p, r.values), 0.0, 1e-12);
  }
}

TEST(Calibration, RescaleInterpolatesOntoSimulationGrid) {
  MeasuredTrace real{{0.0, 1.0, 2.0}, {0.5, 1.5, 0.5}, "pump", 1.0};
  const RescaledTrace r = rescale_trace(real, {0.0, 0.5, 1.0, 1.5, 2.0}, {0.0, 1.0, 2.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(r.scale, 2.0);
  EXPECT_EQ(r.values, (std::vector<double>{0.0, 1.0, 2.0, 1.0, 0.0}));
}

TEST(Calibration, FlatTraceRejected) {
  MeasuredTrace real{{0.0, 1.0, 2.0}, {0.2, 0.2, 0.2}, "pump", 1.0};
  try {
    rescale_trace(real, {0.0, 1.0}, {0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::flat_trace);
  }
  MeasuredTrace backwards{{1.0, 0.0}, {0.0, 1.0}, "pump", 1.0};
  EXPECT_THROW(rescale_trace(backwards, {0.0, 1.0}, {0.0, 1.0}), Error);
}

TEST(Calibration, DiscrepancyExamples) {
  const std::vector<double> a{0.0, 1.0, 2.0, 4.0, 1.0};
  EXPECT_DOUBLE_EQ(shape_discrepancy(a, a), 0.0);
  std::vector<double> b = a;
  for (double& v : b) v += 0.2;
  EXPECT_NEAR(shape_discrepancy(a, b), 0.05, 1e-15);
  EXPECT_THROW(shape_discrepancy({0.0, 0.0}, {1.0, 1.0}), Error);
}

TEST(Calibration, DiscrepancyOfWhiteNoiseMatchesExpectation) {
  const int n = 500;
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = std::sin(kPi * i / (n - 1));
  const double sigma = 0.03;
  double mean = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> b = a;
    for (double& v : b) v += noise(rng);
    mean += shape_discrepancy(a, b) / 100.0;
  }
  const double peak = *std::max_element(a.begin(), a.end());
  EXPECT_NEAR(mean, sigma / peak, 0.1 * sigma / peak);
}

TEST(Calibration, Interpolate) {
  const std::vector<double> xs{0.0, 1.0, 3.0}, ys{0.0, 2.0, -2.0};
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(interpolate(xs, ys, 5.0), -2.0);
}
