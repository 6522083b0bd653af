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

#ifndef NVDFS_DYNAMICS_HPP
#define NVDFS_DYNAMICS_HPP

#include <cstddef>
#include <vector>

#include "nvdfs/hamiltonian.hpp"
#include "nvdfs/liouvillian.hpp"
#include "nvdfs/types.hpp"

namespace nvdfs {

// 8x8 state in the eigenbasis {psi_1..psi_8}.
struct DensityMatrix {
  Mat8c rho = Mat8c::Zero();

  static DensityMatrix pure(int level);  // |psi_level><psi_level|, 1-based
  static DensityMatrix maximally_mixed();

  double trace() const;
  double purity() const;
  double min_eigenvalue() const;
  double hermiticity_error() const;
  Vec8d populations() const;

  // Hermitian to 1e-10, unit trace to 1e-9, eigenvalues >= -1e-8.
  void validate() const;
};

// Point samples on the uniform grid t_i = i T / (n - 1), endpoints included.
struct SampledField {
  std::vector<double> times;
  std::vector<double> omega_p;
  std::vector<double> omega_s;

  std::size_t size() const { return times.size(); }
  double duration() const { return times.empty() ? 0.0 : times.back(); }
  void validate() const;
};

// Piecewise-constant amplitudes on equal-width slices; what the propagator consumes.
struct ControlSlices {
  double duration_us = 0.0;
  std::vector<double> omega_p;
  std::vector<double> omega_s;

  std::size_t size() const { return omega_p.size(); }
  double width() const { return duration_us / static_cast<double>(omega_p.size()); }
  void validate() const;
};

// Slice k carries the mean of the samples at its two edges.
ControlSlices to_slices(const SampledField& field);

enum class Integrator {
  taylor,           // exact per slice to round-off (default)
  liouvillian_exp,  // dense 64x64 superoperator exponential (reference)
  rk4,              // fixed-step Runge-Kutta
};

struct PropagationOptions {
  Integrator integrator = Integrator::taylor;
  int rk4_substeps = 20;
  // Record a checkpoint every this many slices (0 = final state only).
  std::size_t checkpoint_stride = 1;
};

// Real generator split by control: M = fixed + Omega_p pump + Omega_s stokes,
// with the (1 + kappa) amplitude factor already folded into pump and stokes.
struct RealGenerator {
  RealOp fixed;
  RealOp pump;
  RealOp stokes;
  double fixed_norm = 0.0;
  double pump_norm = 0.0;
  double stokes_norm = 0.0;

  // Returns a bound on |M|_1.
  double assemble(double omega_p, double omega_s, RealOp& out) const;
};

class LindbladModel {
 public:
  explicit LindbladModel(const SystemParams& params, const LevelScheme& scheme = {});

  const SystemParams& params() const { return params_; }
  const EigenSystem& eigensystem() const { return eig_; }
  const LevelScheme& scheme() const { return scheme_; }

  // Product-basis pieces: H = H_static(delta) + (1 + kappa)(Omega_p G_p + Omega_s G_s).
  Mat8c static_hamiltonian(const Disturbance& dist) const;
  const Mat8c& pump_generator() const { return pump_; }
  const Mat8c& stokes_generator() const { return stokes_; }
  const Mat8d& dephasing_rates() const { return gamma_; }

  RealGenerator real_generator(const Disturbance& dist) const;

  Mat8c to_product(const Mat8c& eigenbasis) const;
  Mat8c to_eigen(const Mat8c& product) const;

 private:
  SystemParams params_;
  LevelScheme scheme_;
  EigenSystem eig_;
  Mat8c pump_;
  Mat8c stokes_;
  Mat8d gamma_;
};

// Right-hand side of the master equation, all operators in the product basis;
// S_z = diag(0,0,0,0,1,1,1,1) and I_z^(i) = +-1/2 on each nuclear factor.
// Written with explicit jump operators, independent of the elementwise kernels.
Mat8c lindblad_rhs(const Mat8c& rho, const Mat8c& hamiltonian, const SystemParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<Vec8d> populations;
  double symmetrization_adjustment = 0.0;  // max |rho - rho^dagger| / 2 removed at the end

  const DensityMatrix& final_state() const { return states.back(); }
};

// Throws Error(step_unstable) if the trace drifts by more than 1e-6 or the
// final state has an eigenvalue below -1e-8.
Trajectory propagate(const LindbladModel& model, const ControlSlices& slices,
                     const Disturbance& dist, const DensityMatrix& initial,
                     const PropagationOptions& options = {});
Trajectory propagate(const LindbladModel& model, const SampledField& field,
                     const Disturbance& dist, const DensityMatrix& initial,
                     const PropagationOptions& options = {});

// Final state only, no checkpoints.
DensityMatrix final_state(const LindbladModel& model, const ControlSlices& slices,
                          const Disturbance& dist, const DensityMatrix& initial,
                          Integrator integrator = Integrator::taylor);

// <psi_target| rho |psi_target>, target 1-based.
double fidelity(const DensityMatrix& rho, int target_level);

}  // namespace nvdfs

#endif  // NVDFS_DYNAMICS_HPP
