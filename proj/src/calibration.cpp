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

#include "nvdfs/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "nvdfs/error.hpp"

namespace nvdfs {

CalibrationFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit inputs differ in length");
  require(x.size() >= 2, "fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && std::isfinite(y[i]), "fit inputs must be finite");
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::degenerate_x, "all x values are equal; slope is undefined");

  CalibrationFit f;
  f.n_points = x.size();
  f.a = sxy / sxx;
  f.b = my - f.a * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.a * x[i] + f.b);
    ssr += r * r;
  }
  f.residual_rms = std::sqrt(ssr / n);
  if (x.size() > 2) {
    const double s2 = ssr / (n - 2.0);
    f.a_stderr = std::sqrt(s2 / sxx);
    f.b_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

void MeasuredTrace::validate() const {
  require(!times_us.empty() && times_us.size() == volts.size(),
          "measured trace needs matching, non-empty time and voltage columns");
  for (std::size_t i = 0; i < times_us.size(); ++i) {
    require(std::isfinite(times_us[i]) && std::isfinite(volts[i]), "measured trace must be finite");
    if (i > 0) require(times_us[i] > times_us[i - 1], "measured trace times must be strictly increasing");
  }
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

namespace {

double span_from_start(const std::vector<double>& u) {
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  return peak - std::abs(u.front());
}

}  // namespace

RescaledTrace rescale_trace(const MeasuredTrace& real, const std::vector<double>& sim_times,
                            const std::vector<double>& sim_values) {
  real.validate();
  require(!sim_times.empty() && sim_times.size() == sim_values.size(),
          "simulated trace needs matching, non-empty columns");

  RescaledTrace out;
  out.offset = real.volts.front();
  std::vector<double> shifted(real.volts.size());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = real.volts[i] - out.offset;

  out.d_sim = span_from_start(sim_values);
  out.d_real = span_from_start(shifted);
  if (out.d_real == 0.0) fail(ErrorCode::flat_trace, "measured trace is flat after removing its first sample");
  out.scale = out.d_sim / out.d_real;

  out.times_us = sim_times;
  out.values.resize(sim_times.size());
  for (std::size_t i = 0; i < sim_times.size(); ++i)
    out.values[i] = out.scale * interpolate(real.times_us, shifted, sim_times[i]);
  return out;
}

RescaledTrace rescale_trace(const MeasuredTrace& real, const SampledField& sim, Channel channel) {
  sim.validate();
  return rescale_trace(real, sim.times, channel == Channel::pump ? sim.omega_p : sim.omega_s);
}

double shape_discrepancy(const std::vector<double>& a, const std::vector<double>& b) {
  require(!a.empty() && a.size() == b.size(), "discrepancy needs traces on a common grid");
  double peak = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    peak = std::max(peak, std::abs(a[i]));
    ss += (a[i] - b[i]) * (a[i] - b[i]);
  }
  require(peak > 0.0, "reference trace is identically zero");
  return std::sqrt(ss / static_cast<double>(a.size())) / peak;
}

}  // namespace nvdfs
