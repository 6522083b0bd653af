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

#include "nvdfs/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nvdfs/error.hpp"

namespace nvdfs {

namespace {

constexpr double kLabelTolerance = 1e-9;

using Mat2d = Eigen::Matrix2d;

Mat4d kron2(const Mat2d& a, const Mat2d& b) {
  Mat4d out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

struct SpinHalf {
  Mat2d z, x, plus, minus, id;
  SpinHalf() {
    z << 0.5, 0.0, 0.0, -0.5;
    x << 0.0, 0.5, 0.5, 0.0;
    plus << 0.0, 1.0, 0.0, 0.0;
    minus = plus.transpose();
    id.setIdentity();
  }
};

// Rotates a column so its largest-magnitude entry (first one on ties) is real positive.
void fix_phase(Vec8c& v) {
  double biggest = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < kDim; ++i) {
    if (std::abs(v(i)) >= biggest * (1.0 - 1e-12)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = cplx(v(i).real(), 0.0);
      return;
    }
  }
}

}  // namespace

const char* convention_name(CouplingConvention c) {
  return c == CouplingConvention::literal ? "literal" : "angular";
}

CouplingConvention parse_convention(const std::string& name) {
  if (name == "literal") return CouplingConvention::literal;
  if (name == "angular") return CouplingConvention::angular;
  fail(ErrorCode::invalid_argument, "unknown coupling convention '" + name + "'");
}

SystemParams SystemParams::defaults(CouplingConvention convention) {
  double scale = convention == CouplingConvention::angular ? kTwoPi : 1.0;
  SystemParams p{};
  p.zero_field_splitting = kTwoPi * 2870.0;
  p.gamma_e = kTwoPi * 2.8;
  p.gamma_c = kTwoPi * 1.7e-3;
  p.dipolar_coupling = scale * 4e-3;
  p.hyperfine_1 = scale * 12.45;
  p.hyperfine_2 = scale * 2.28;
  p.bx_gauss = 100.0;
  p.bz_gauss = 5.0;
  p.t2_electron_us = 7.0;
  p.t2_nuclear1_us = 500.0;
  p.t2_nuclear2_us = 700.0;
  return p;
}

void SystemParams::validate() const {
  const double couplings[] = {zero_field_splitting, gamma_e, gamma_c, dipolar_coupling,
                              hyperfine_1, hyperfine_2, bx_gauss, bz_gauss};
  for (double c : couplings) require(std::isfinite(c), "system parameters must be finite");
  const double times[] = {t2_electron_us, t2_nuclear1_us, t2_nuclear2_us};
  for (double t : times)
    require(t > 0.0 && !std::isnan(t), "coherence times must be strictly positive");
}

void Disturbance::validate() const {
  require(std::isfinite(delta), "detuning must be finite");
  require(std::isfinite(kappa) && kappa > -1.0, "amplitude bias must satisfy kappa > -1");
}

void LevelScheme::validate() const {
  auto in = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
  require(in(pump_level, 1, 4) && in(stokes_level, 1, 4) && pump_level != stokes_level,
          "pump and stokes levels must be distinct m_s=0 levels (1..4)");
  require(in(intermediate_level, 5, 8), "intermediate level must be an m_s=1 level (5..8)");
}

StaticBlocks build_static_blocks(const SystemParams& params) {
  const SpinHalf s;
  const Mat4d iz1 = kron2(s.z, s.id), iz2 = kron2(s.id, s.z);
  const Mat4d ix1 = kron2(s.x, s.id), ix2 = kron2(s.id, s.x);
  const Mat4d flip_flop = kron2(s.plus, s.minus) + kron2(s.minus, s.plus);
  const double g = params.gamma_c;
  const double d = params.dipolar_coupling;

  StaticBlocks out;
  out.ms0 = g * params.bz_gauss * (iz1 + iz2) + g * params.bx_gauss * (ix1 + ix2) +
            0.5 * d * (flip_flop - 4.0 * iz1 * iz2);
  out.ms1 = (params.zero_field_splitting + params.gamma_e * params.bz_gauss) * Mat4d::Identity() +
            params.hyperfine_1 * iz1 + params.hyperfine_2 * iz2;
  return out;
}

EigenSystem diagonalize(const SystemParams& params) {
  params.validate();
  const StaticBlocks blocks = build_static_blocks(params);

  Eigen::SelfAdjointEigenSolver<Mat4d> solver(blocks.ms0);
  const Eigen::Vector4d w = solver.eigenvalues();
  const Mat4d v = solver.eigenvectors();

  const Eigen::Vector4d singlet(0.0, std::sqrt(0.5), -std::sqrt(0.5), 0.0);
  int singlet_col = 0;
  double best_overlap = -1.0;
  for (int i = 0; i < 4; ++i) {
    double o = std::abs(v.col(i).dot(singlet));
    if (o > best_overlap) {
      best_overlap = o;
      singlet_col = i;
    }
  }

  const double scale0 = w.cwiseAbs().maxCoeff();
  const double tol0 = kLabelTolerance * scale0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!(std::abs(w(i) - w(j)) > tol0)) {
        std::ostringstream msg;
        msg << "m_s=0 eigenvalues " << w(i) << " and " << w(j)
            << " coincide; near-zero state cannot be identified";
        fail(ErrorCode::labeling_ambiguity, msg.str());
      }
    }
  }

  std::vector<int> rest;
  for (int i = 0; i < 4; ++i)
    if (i != singlet_col) rest.push_back(i);
  std::sort(rest.begin(), rest.end(),
            [&](int a, int b) { return std::abs(w(a)) < std::abs(w(b)); });
  const double separation = (std::abs(w(rest[1])) - std::abs(w(rest[0]))) / scale0;
  if (!(separation > kLabelTolerance))
    fail(ErrorCode::labeling_ambiguity, "two m_s=0 levels are equally close to zero energy");
  const int near_zero_col = rest[0];
  int low_col = rest[1], high_col = rest[2];
  if (w(low_col) > w(high_col)) std::swap(low_col, high_col);

  EigenSystem eig;
  eig.states.setZero();
  const int ms0_order[4] = {low_col, singlet_col, near_zero_col, high_col};
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d col = v.col(ms0_order[k]);
    if (k == 1) col = singlet;  // exact eigenvector of the block
    eig.states.block<4, 1>(0, k) = col.cast<cplx>();
    eig.energies(k) = k == 1 ? singlet.dot(blocks.ms0 * singlet) : w(ms0_order[k]);
  }

  // The m_s=1 block is diagonal; order its levels by energy.
  const Eigen::Vector4d diag1 = blocks.ms1.diagonal();
  std::array<int, 4> order1{0, 1, 2, 3};
  std::stable_sort(order1.begin(), order1.end(),
                   [&](int a, int b) { return diag1(a) < diag1(b); });
  const double tol1 = kLabelTolerance * diag1.cwiseAbs().maxCoeff();
  for (int k = 0; k + 1 < 4; ++k) {
    if (!(diag1(order1[k + 1]) - diag1(order1[k]) > tol1))
      fail(ErrorCode::labeling_ambiguity, "m_s=1 levels are degenerate");
  }
  for (int k = 0; k < 4; ++k) {
    eig.states(4 + order1[k], 4 + k) = 1.0;
    eig.energies(4 + k) = diag1(order1[k]);
  }

  for (int k = 0; k < kDim; ++k) {
    Vec8c c = eig.states.col(k);
    fix_phase(c);
    eig.states.col(k) = c;
  }

  eig.chi = transition_elements(eig.states);

  // Drive structure of the psi_1 -> psi_2 scheme: the Stokes tone reaches psi_2
  // only through psi_6 and psi_7.
  const double chi_scale = eig.chi.cwiseAbs().maxCoeff();
  if (!(std::abs(eig.chi(5, 1)) > 1e-6 * chi_scale && std::abs(eig.chi(6, 1)) > 1e-6 * chi_scale) ||
      eig.chi(4, 1) != 0.0 || eig.chi(7, 1) != 0.0) {
    fail(ErrorCode::labeling_ambiguity,
         "m_s=1 ordering is inconsistent with the psi_6/psi_7 drive structure");
  }

  eig.labeling.singlet_block_index = singlet_col;
  eig.labeling.near_zero_block_index = near_zero_col;
  eig.labeling.singlet_overlap = best_overlap;
  eig.labeling.near_zero_separation = separation;
  eig.labeling.rule =
      "psi2=singlet (exact zero), psi3=smallest |E| of the rest, psi1/psi4 ascending; "
      "psi5..psi8 ascending m_s=1 energy; largest component real positive";
  return eig;
}

double cubic_residual(double energy, const SystemParams& params) {
  const double d = params.dipolar_coupling;
  const double g2 = params.gamma_c * params.gamma_c;
  const double bx2 = params.bx_gauss * params.bx_gauss;
  const double bz2 = params.bz_gauss * params.bz_gauss;
  const double x = 2.0 * energy;
  return -2.0 * d * d * d - 4.0 * bx2 * d * g2 + 8.0 * bz2 * d * g2 -
         (3.0 * d * d + 4.0 * bx2 * g2 + 4.0 * bz2 * g2) * x + x * x * x;
}

std::pair<double, double> analytic_coefficients_at(double energy, const SystemParams& params) {
  if (params.bx_gauss == 0.0 || params.gamma_c == 0.0)
    fail(ErrorCode::degenerate_field, "closed-form eigenvectors need a nonzero transverse field");
  const double d = params.dipolar_coupling;
  const double g = params.gamma_c;
  const double bx = params.bx_gauss;
  const double common = -d - 2.0 * energy - 2.0 * params.bz_gauss * g;
  const double alpha = (2.0 * d - 2.0 * energy) * common / (2.0 * bx * bx * g * g);
  const double beta = common / (2.0 * bx * g);
  return {alpha, beta};
}

std::pair<double, double> analytic_coefficients(int j, const SystemParams& params) {
  require(j == 1 || j == 3 || j == 4, "closed-form coefficients exist for j = 1, 3, 4");
  if (params.bx_gauss == 0.0 || params.gamma_c == 0.0)
    fail(ErrorCode::degenerate_field, "closed-form eigenvectors need a nonzero transverse field");
  const EigenSystem eig = diagonalize(params);
  return analytic_coefficients_at(eig.energies(j - 1), params);
}

Eigen::Vector4d analytic_state(int j, const SystemParams& params) {
  auto [alpha, beta] = analytic_coefficients(j, params);
  return Eigen::Vector4d(alpha - 1.0, -beta, -beta, 1.0);
}

Mat8c transition_elements(const Mat8c& states) {
  Mat8c swapped;
  swapped.topRows<4>() = states.bottomRows<4>();
  swapped.bottomRows<4>() = states.topRows<4>();
  return states.adjoint() * swapped;
}

Mat8c build_rwa_generator(const EigenSystem& eig, double omega_p, double omega_s,
                          const Disturbance& dist, const LevelScheme& scheme) {
  scheme.validate();
  const int pump = scheme.pump_level - 1;
  const int stokes = scheme.stokes_level - 1;
  const int ref = scheme.intermediate_level - 1;
  const double factor = 0.5 * (1.0 + dist.kappa);

  Mat8c h = Mat8c::Zero();
  for (int j = 4; j < kDim; ++j) {
    h(j, pump) += factor * omega_p * eig.chi(j, pump);
    h(j, stokes) += factor * omega_s * eig.chi(j, stokes);
    h(pump, j) = std::conj(h(j, pump));
    h(stokes, j) = std::conj(h(j, stokes));
  }
  for (int i = 0; i < 4; ++i)
    h(i, i) = (i == pump || i == stokes) ? 0.0 : eig.energies(i);
  for (int i = 4; i < kDim; ++i)
    h(i, i) = i == ref ? -dist.delta : (eig.energies(i) - eig.energies(ref)) - dist.delta;
  return h;
}

}  // namespace nvdfs
