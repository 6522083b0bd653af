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

#include "nvdfs/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nvdfs/error.hpp"

namespace nvdfs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clip(double v, double limit) { return std::clamp(v, -limit, limit); }

// Keeps the PM phase argument finite when a modulation frequency hits zero.
double safe_frequency(double v) {
  constexpr double kSmallest = 1e-12;
  if (std::abs(v) >= kSmallest) return v;
  return v < 0.0 ? -kSmallest : kSmallest;
}

}  // namespace

const char* PulseShape::kind() const {
  return std::visit(overloaded{
                        [](const GaussianPulse&) { return "gaussian"; },
                        [](const PiecewiseConstantPulse&) { return "piecewise_constant"; },
                        [](const CrabPulse&) { return "crab"; },
                        [](const PmPulse&) { return "pm"; },
                    },
                    form);
}

bool PulseShape::uses_envelope() const {
  return std::holds_alternative<CrabPulse>(form) || std::holds_alternative<PmPulse>(form);
}

void PulseShape::validate() const {
  require(omega_max > 0.0 && std::isfinite(omega_max), "omega_max must be positive");
  require(boundary_exponent > 0.0 && std::fmod(boundary_exponent, 2.0) == 0.0,
          "boundary exponent must be a positive even number");
  std::visit(overloaded{
                 [](const GaussianPulse& g) {
                   require(g.sigma_us > 0.0, "gaussian width must be positive");
                   require(std::isfinite(g.amplitude) && std::isfinite(g.delay_us),
                           "gaussian parameters must be finite");
                 },
                 [](const PiecewiseConstantPulse& p) {
                   require(!p.u_p.empty() && p.u_p.size() == p.u_s.size(),
                           "piecewise-constant channels must have equal nonzero length");
                 },
                 [](const CrabPulse& c) {
                   require(!c.coefficients.empty(), "CRAB needs at least one harmonic");
                   require(c.randomization.size() == c.coefficients.size(),
                           "CRAB needs one frequency randomization per harmonic");
                   for (double r : c.randomization)
                     require(r >= -0.5 && r <= 0.5, "CRAB randomization must lie in [-0.5, 0.5]");
                 },
                 [](const PmPulse& p) {
                   require(!p.coefficients.empty(), "PM needs at least one harmonic");
                 },
             },
             form);
}

double boundary_factor(double t, double duration, double exponent) {
  const double inv = envelope(t, duration, exponent);
  return inv == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv;
}

double envelope(double t, double duration, double exponent) {
  const double h = 0.5 * duration;
  return 1.0 - std::pow((t - h) / h, exponent);
}

std::array<double, 2> evaluate(const PulseShape& shape, double t, double duration) {
  return std::visit(
      overloaded{
          [&](const GaussianPulse& g) -> std::array<double, 2> {
            const double mid = 0.5 * duration;
            const double two_var = 2.0 * g.sigma_us * g.sigma_us;
            const double dp = t - mid - 0.5 * g.delay_us;
            const double ds = t - mid + 0.5 * g.delay_us;
            return {g.amplitude * std::exp(-dp * dp / two_var),
                    g.amplitude * std::exp(-ds * ds / two_var)};
          },
          [&](const PiecewiseConstantPulse& p) -> std::array<double, 2> {
            const std::size_t n = p.u_p.size();
            auto k = static_cast<std::size_t>(std::floor(t / duration * static_cast<double>(n)));
            k = std::min(k, n - 1);
            return {p.u_p[k], p.u_s[k]};
          },
          [&](const CrabPulse& c) -> std::array<double, 2> {
            double op = 0.0, os = 0.0;
            for (std::size_t i = 0; i < c.coefficients.size(); ++i) {
              const auto& row = c.coefficients[i];
              const double w =
                  kTwoPi * static_cast<double>(i + 1) * (1.0 + c.randomization[i]) / duration;
              const double sn = std::sin(w * t), cs = std::cos(w * t);
              op += row[0] * sn + row[1] * cs;
              os += row[2] * sn + row[3] * cs;
            }
            const double env = envelope(t, duration, shape.boundary_exponent);
            return {env * op, env * os};
          },
          [&](const PmPulse& p) -> std::array<double, 2> {
            double op = 0.0, os = 0.0;
            for (const auto& row : p.coefficients) {
              const double v = safe_frequency(row[2]);
              const double depth = row[1] / v;
              op += row[0] * std::cos(depth * std::cos(v * t));
              os += row[0] * std::cos(depth * std::sin(v * t));
            }
            const double env = envelope(t, duration, shape.boundary_exponent);
            return {env * op, env * os};
          },
      },
      shape.form);
}

ClipResult clip_amplitude(const SampledField& field, double omega_max) {
  ClipResult out{field, 0};
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double p = clip(field.omega_p[i], omega_max);
    const double s = clip(field.omega_s[i], omega_max);
    out.clipped += (p != field.omega_p[i]) + (s != field.omega_s[i]);
    out.field.omega_p[i] = p;
    out.field.omega_s[i] = s;
  }
  return out;
}

SampledField sample(const PulseShape& shape, double duration, std::size_t n_samples) {
  require(n_samples >= 2, "sampling needs at least two points");
  require(duration > 0.0, "duration must be positive");
  shape.validate();
  SampledField f;
  f.times.resize(n_samples);
  f.omega_p.resize(n_samples);
  f.omega_s.resize(n_samples);
  const double last = static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = i + 1 == n_samples ? duration : duration * static_cast<double>(i) / last;
    const auto v = evaluate(shape, t, duration);
    f.times[i] = t;
    f.omega_p[i] = clip(v[0], shape.omega_max);
    f.omega_s[i] = clip(v[1], shape.omega_max);
  }
  return f;
}

ControlSlices discretize(const PulseShape& shape, double duration, std::size_t n_slices) {
  require(n_slices >= 1, "need at least one slice");
  if (const auto* pwc = std::get_if<PiecewiseConstantPulse>(&shape.form)) {
    shape.validate();
    require(duration > 0.0, "duration must be positive");
    const std::size_t n = pwc->u_p.size();
    require(n_slices % n == 0, "slice count must be a multiple of the piecewise-constant length");
    const std::size_t rep = n_slices / n;
    ControlSlices out;
    out.duration_us = duration;
    out.omega_p.reserve(n_slices);
    out.omega_s.reserve(n_slices);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t r = 0; r < rep; ++r) {
        out.omega_p.push_back(clip(pwc->u_p[k], shape.omega_max));
        out.omega_s.push_back(clip(pwc->u_s[k], shape.omega_max));
      }
    }
    return out;
  }
  return to_slices(sample(shape, duration, n_slices + 1));
}

}  // namespace nvdfs
