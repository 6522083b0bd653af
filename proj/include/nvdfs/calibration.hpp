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

#ifndef NVDFS_CALIBRATION_HPP
#define NVDFS_CALIBRATION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "nvdfs/dynamics.hpp"

namespace nvdfs {

// y = a x + b by ordinary least squares.
struct CalibrationFit {
  double a = 0.0;
  double b = 0.0;
  double residual_rms = 0.0;
  std::size_t n_points = 0;
  double a_stderr = 0.0;  // zero when n_points == 2
  double b_stderr = 0.0;
};

// Throws Error(degenerate_x) when all x coincide.
CalibrationFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Reference calibration values with their quoted uncertainties.
struct QuotedCoefficient {
  const char* name;
  double a, a_uncertainty;
  double b, b_uncertainty;
  const char* units;
};
inline constexpr QuotedCoefficient kRabiPerVolt{"rabi_awg", 40.4, 1.2, 1.0, 0.2, "MHz/V, V"};
inline constexpr QuotedCoefficient kOscilloscopePerAwg{"osci_awg", 0.016, 0.003, -0.0026, 0.0006, "V/V, V"};
inline constexpr QuotedCoefficient kVoltPerFrequency{"volt_frequency", -0.0092, 0.0028, 0.029, 0.008, "V/GHz, V"};

struct MeasuredTrace {
  std::vector<double> times_us;
  std::vector<double> volts;
  std::string channel;
  double gain = 1.0;

  void validate() const;
};

struct RescaledTrace {
  std::vector<double> times_us;  // the simulation grid
  std::vector<double> values;    // simulation units
  double d_sim = 0.0;
  double d_real = 0.0;
  double scale = 0.0;   // d_sim / d_real
  double offset = 0.0;  // first raw sample removed from the measured trace
};

// Removes the first measured sample, scales by d_sim / d_real with
// d = max|u| - |u(first)|, and interpolates linearly onto the simulation
// times. d_real is taken after the shift, so any gain > 0 and offset of the
// measured trace cancel. Throws Error(flat_trace) if d_real == 0.
RescaledTrace rescale_trace(const MeasuredTrace& real, const std::vector<double>& sim_times,
                            const std::vector<double>& sim_values);

enum class Channel { pump, stokes };
RescaledTrace rescale_trace(const MeasuredTrace& real, const SampledField& sim, Channel channel);

// RMS(a - b) / max|a| on a common grid.
double shape_discrepancy(const std::vector<double>& a, const std::vector<double>& b);

// Linear interpolation of (xs, ys) at x, held constant outside the data.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x);

}  // namespace nvdfs

#endif  // NVDFS_CALIBRATION_HPP
