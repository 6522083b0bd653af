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

#ifndef NVDFS_PULSES_HPP
#define NVDFS_PULSES_HPP

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "nvdfs/dynamics.hpp"
#include "nvdfs/types.hpp"

namespace nvdfs {

// Counterintuitive Gaussian pair centred on T/2: the Stokes peak sits at
// T/2 - delay/2 and the pump peak at T/2 + delay/2.
struct GaussianPulse {
  double amplitude = kPi;
  double sigma_us = 1.0;
  double delay_us = 1.0;
};

// GRAPE amplitudes on N equal slices of width T/N.
struct PiecewiseConstantPulse {
  std::vector<double> u_p;
  std::vector<double> u_s;
};

// Row n holds [A_n, B_n, C_n, D_n]; omega_n = 2 pi n (1 + r_n) / T with r_n frozen.
struct CrabPulse {
  std::vector<std::array<double, 4>> coefficients;
  std::vector<double> randomization;
};

// Row n holds [a_n, b_n, v_n].
struct PmPulse {
  std::vector<std::array<double, 3>> coefficients;
};

inline constexpr double kDefaultBoundaryExponent = 30.0;
inline constexpr double kDefaultOmegaMax = kPi;  // rad/us
inline constexpr int kDefaultHarmonics = 3;

struct PulseShape {
  std::variant<GaussianPulse, PiecewiseConstantPulse, CrabPulse, PmPulse> form;
  double boundary_exponent = kDefaultBoundaryExponent;
  double omega_max = kDefaultOmegaMax;

  const char* kind() const;  // "gaussian", "piecewise_constant", "crab", "pm"
  bool uses_envelope() const;
  void validate() const;
};

// lambda(t) = h^p / (h^p - (t - h)^p), h = T/2; +inf at t = 0 and t = T.
double boundary_factor(double t, double duration, double exponent = kDefaultBoundaryExponent);

// 1 / lambda(t) = 1 - ((t - h) / h)^p; exactly 0 at both endpoints.
double envelope(double t, double duration, double exponent = kDefaultBoundaryExponent);

// Unclipped closed form of both channels at time t.
std::array<double, 2> evaluate(const PulseShape& shape, double t, double duration);

struct ClipResult {
  SampledField field;
  std::size_t clipped = 0;
};

ClipResult clip_amplitude(const SampledField& field, double omega_max);

// n_samples points on [0, T] with endpoints, clipped to [-omega_max, omega_max].
SampledField sample(const PulseShape& shape, double duration, std::size_t n_samples);

// Slices for propagation. Piecewise-constant shapes map their N amplitudes onto
// n_slices (a multiple of N); continuous shapes are sampled at n_slices + 1
// points and averaged per slice.
ControlSlices discretize(const PulseShape& shape, double duration, std::size_t n_slices);

inline constexpr std::size_t kDefaultSlices = 1000;

}  // namespace nvdfs

#endif  // NVDFS_PULSES_HPP
