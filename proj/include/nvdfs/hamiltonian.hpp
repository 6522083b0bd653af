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

#ifndef NVDFS_HAMILTONIAN_HPP
#define NVDFS_HAMILTONIAN_HPP

#include <array>
#include <string>
#include <utility>

#include "nvdfs/types.hpp"

namespace nvdfs {

// How the tabulated d12 / Azz values are read. The table prints them without
// a 2*pi factor while D, gamma_e and gamma_c carry one explicitly.
enum class CouplingConvention {
  literal,  // 4 kHz -> 0.004 rad/us
  angular,  // 4 kHz -> 2*pi*0.004 rad/us
};

const char* convention_name(CouplingConvention c);
CouplingConvention parse_convention(const std::string& name);

// Static parameters of the NV electron + two 13C register.
// Frequencies are angular, in rad/us; fields in gauss; times in us.
// A dephasing time of +inf disables that channel.
struct SystemParams {
  double zero_field_splitting;  // D
  double gamma_e;               // rad/us per G
  double gamma_c;               // rad/us per G
  double dipolar_coupling;      // d12
  double hyperfine_1;           // Azz(1)
  double hyperfine_2;           // Azz(2)
  double bx_gauss;
  double bz_gauss;
  double t2_electron_us;
  double t2_nuclear1_us;
  double t2_nuclear2_us;

  // Tabulated values at the Bx = 100 G, Bz = 5 G operating point.
  static SystemParams defaults(CouplingConvention convention = CouplingConvention::literal);

  // Throws Error(invalid_argument) on non-finite couplings or non-positive times.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

// Static detuning and relative amplitude bias of both control fields.
struct Disturbance {
  double delta = 0.0;  // rad/us
  double kappa = 0.0;  // total amplitude factor is (1 + kappa)

  void validate() const;
};

struct StaticBlocks {
  Mat4d ms0;  // nuclear Zeeman + dipolar flip-flop, basis {uu, ud, du, dd}
  Mat4d ms1;  // (D + gamma_e Bz) 1 + Azz Iz terms, diagonal
};

StaticBlocks build_static_blocks(const SystemParams& params);

// Labels of the eigenbasis. Indices are 1-based in the physics
// (psi_1..psi_8) and 0-based here.
struct Labeling {
  int singlet_block_index;       // column of the m_s=0 eigensolver output chosen as psi_2
  int near_zero_block_index;     // ... chosen as psi_3
  double singlet_overlap;        // |<singlet|candidate>| before snapping
  double near_zero_separation;   // relative |E| gap that disambiguated psi_3
  std::string rule;
};

struct EigenSystem {
  Vec8d energies;  // E_1..E_8
  Mat8c states;    // column i is psi_{i+1} in the product basis
  Mat8c chi;       // <psi_i| sqrt(2) S_x |psi_j>
  Labeling labeling;
};

// Throws Error(labeling_ambiguity) when eigenvalues needed for the labels
// coincide to within 1e-9 relative separation.
EigenSystem diagonalize(const SystemParams& params);

// Left-hand side of the closed-form cubic for the non-singlet m_s=0 levels.
// The polynomial's variable is the doubled energy 2E, so this evaluates it
// at x = 2E; it vanishes at E_1, E_3 and E_4.
double cubic_residual(double energy, const SystemParams& params);

// Closed-form (alpha_j, beta_j) for j in {1, 3, 4}; the unnormalized state
// (alpha - 1)|uu> - beta (|ud> + |du>) + |dd> is parallel to psi_j.
// Throws Error(degenerate_field) if Bx == 0.
std::pair<double, double> analytic_coefficients(int j, const SystemParams& params);
std::pair<double, double> analytic_coefficients_at(double energy, const SystemParams& params);
Eigen::Vector4d analytic_state(int j, const SystemParams& params);

// chi_ij with V = sqrt(2) S_x (x) 1 acting between the m_s blocks.
Mat8c transition_elements(const Mat8c& states);

// Which levels the two tones address. Defaults give the psi_1 -> psi_2
// transfer through psi_6; {2, 3, 6} addresses the psi_2 <-> psi_3 flip-flop.
struct LevelScheme {
  int pump_level = 1;          // coupled to psi_5..psi_8 by Omega_p
  int stokes_level = 2;        // coupled to psi_5..psi_8 by Omega_s
  int intermediate_level = 6;  // frame reference for the m_s=1 manifold

  void validate() const;
};

// Rotating-wave interaction-picture generator in the eigenbasis, with drive
// scaled by (1 + kappa) / 2 and the m_s=1 levels shifted by -(E_ref + delta).
Mat8c build_rwa_generator(const EigenSystem& eig, double omega_p, double omega_s,
                          const Disturbance& dist, const LevelScheme& scheme = {});

}  // namespace nvdfs

#endif  // NVDFS_HAMILTONIAN_HPP
