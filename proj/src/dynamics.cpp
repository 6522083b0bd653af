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

#include "nvdfs/dynamics.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nvdfs/error.hpp"
#include "nvdfs/liouvillian.hpp"

namespace nvdfs {

namespace {

constexpr double kTraceDriftLimit = 1e-6;
constexpr double kPositivityLimit = -1e-8;

double rate(double t2) { return std::isinf(t2) ? 0.0 : 1.0 / t2; }

double nuclear_z(int product, int which) {
  const int bit = which == 1 ? (product >> 1) & 1 : product & 1;
  return bit == 0 ? 0.5 : -0.5;
}

Mat8c drive_generator(const EigenSystem& eig, int lower) {
  Mat8c g = Mat8c::Zero();
  for (int j = 4; j < kDim; ++j) {
    g(j, lower) = 0.5 * eig.chi(j, lower);
    g(lower, j) = std::conj(g(j, lower));
  }
  return g;
}

void check_slices(const ControlSlices& s) { s.validate(); }

}  // namespace

DensityMatrix DensityMatrix::pure(int level) {
  require(level >= 1 && level <= kDim, "level must be in 1..8");
  DensityMatrix d;
  d.rho(level - 1, level - 1) = 1.0;
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed() {
  DensityMatrix d;
  d.rho = Mat8c::Identity() / static_cast<double>(kDim);
  return d;
}

double DensityMatrix::trace() const { return rho.trace().real(); }

double DensityMatrix::purity() const { return (rho * rho).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Mat8c herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat8c> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

Vec8d DensityMatrix::populations() const { return rho.diagonal().real(); }

void DensityMatrix::validate() const {
  require(rho.allFinite(), "density matrix has non-finite entries");
  require(hermiticity_error() <= 1e-10, "density matrix is not Hermitian");
  require(std::abs(trace() - 1.0) <= 1e-9, "density matrix trace differs from 1");
  require(min_eigenvalue() >= kPositivityLimit, "density matrix is not positive semidefinite");
}

void SampledField::validate() const {
  require(times.size() >= 2, "sampled field needs at least two points");
  require(omega_p.size() == times.size() && omega_s.size() == times.size(),
          "sampled field channels must match the time grid");
  require(times.front() == 0.0, "sampled field must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], "sample times must be strictly increasing");
}

void ControlSlices::validate() const {
  require(duration_us > 0.0 && std::isfinite(duration_us), "control duration must be positive");
  require(!omega_p.empty() && omega_p.size() == omega_s.size(),
          "control channels must have the same nonzero slice count");
  for (std::size_t i = 0; i < omega_p.size(); ++i)
    require(std::isfinite(omega_p[i]) && std::isfinite(omega_s[i]), "control amplitudes must be finite");
}

ControlSlices to_slices(const SampledField& field) {
  field.validate();
  ControlSlices out;
  out.duration_us = field.duration();
  const std::size_t n = field.size() - 1;
  out.omega_p.resize(n);
  out.omega_s.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.omega_p[k] = 0.5 * (field.omega_p[k] + field.omega_p[k + 1]);
    out.omega_s[k] = 0.5 * (field.omega_s[k] + field.omega_s[k + 1]);
  }
  return out;
}

LindbladModel::LindbladModel(const SystemParams& params, const LevelScheme& scheme)
    : params_(params), scheme_(scheme), eig_(diagonalize(params)) {
  scheme_.validate();
  pump_ = to_product(drive_generator(eig_, scheme_.pump_level - 1));
  stokes_ = to_product(drive_generator(eig_, scheme_.stokes_level - 1));

  const double ge = rate(params_.t2_electron_us);
  const double g1 = rate(params_.t2_nuclear1_us);
  const double g2 = rate(params_.t2_nuclear2_us);
  for (int a = 0; a < kDim; ++a) {
    for (int b = 0; b < kDim; ++b) {
      const double de = (a / 4) - (b / 4);
      const double d1 = nuclear_z(a, 1) - nuclear_z(b, 1);
      const double d2 = nuclear_z(a, 2) - nuclear_z(b, 2);
      gamma_(a, b) = ge * de * de + g1 * d1 * d1 + g2 * d2 * d2;
    }
  }
}

Mat8c LindbladModel::static_hamiltonian(const Disturbance& dist) const {
  return to_product(build_rwa_generator(eig_, 0.0, 0.0, dist, scheme_));
}

double RealGenerator::assemble(double omega_p, double omega_s, RealOp& out) const {
  out = fixed + omega_p * pump + omega_s * stokes;
  return fixed_norm + std::abs(omega_p) * pump_norm + std::abs(omega_s) * stokes_norm;
}

RealGenerator LindbladModel::real_generator(const Disturbance& dist) const {
  const double amp = 1.0 + dist.kappa;
  const Mat8d no_loss = Mat8d::Zero();
  RealGenerator g;
  g.fixed = real_liouvillian(static_hamiltonian(dist), gamma_);
  g.pump = real_liouvillian(amp * pump_, no_loss);
  g.stokes = real_liouvillian(amp * stokes_, no_loss);
  g.fixed_norm = one_norm(g.fixed);
  g.pump_norm = one_norm(g.pump);
  g.stokes_norm = one_norm(g.stokes);
  return g;
}

Mat8c LindbladModel::to_product(const Mat8c& eigenbasis) const {
  return eig_.states * eigenbasis * eig_.states.adjoint();
}

Mat8c LindbladModel::to_eigen(const Mat8c& product) const {
  return eig_.states.adjoint() * product * eig_.states;
}

Mat8c lindblad_rhs(const Mat8c& rho, const Mat8c& hamiltonian, const SystemParams& params) {
  Mat8c sz = Mat8c::Zero(), iz1 = Mat8c::Zero(), iz2 = Mat8c::Zero();
  for (int a = 0; a < kDim; ++a) {
    sz(a, a) = a >= 4 ? 1.0 : 0.0;
    iz1(a, a) = nuclear_z(a, 1);
    iz2(a, a) = nuclear_z(a, 2);
  }
  auto dephase = [&](const Mat8c& op, double g) -> Mat8c {
    const Mat8c sq = op * op;
    return g * (2.0 * op * rho * op - sq * rho - rho * sq);
  };
  const cplx minus_i(0.0, -1.0);
  return minus_i * (hamiltonian * rho - rho * hamiltonian) +
         dephase(sz, rate(params.t2_electron_us)) + dephase(iz1, rate(params.t2_nuclear1_us)) +
         dephase(iz2, rate(params.t2_nuclear2_us));
}

namespace {

// Checks trace drift, removes the anti-Hermitian residue and renormalizes.
double restore_invariants(Mat8c& x) {
  const double tr = x.trace().real();
  if (!std::isfinite(tr) || std::abs(tr - 1.0) > kTraceDriftLimit) {
    std::ostringstream msg;
    msg << "trace drifted to " << tr << " during propagation; refine the time stepping";
    fail(ErrorCode::step_unstable, msg.str());
  }
  const double adjustment = 0.5 * (x - x.adjoint()).cwiseAbs().maxCoeff();
  x = 0.5 * (x + x.adjoint());
  x /= x.trace().real();
  return adjustment;
}

}  // namespace

Trajectory propagate(const LindbladModel& model, const ControlSlices& slices,
                     const Disturbance& dist, const DensityMatrix& initial,
                     const PropagationOptions& options) {
  check_slices(slices);
  dist.validate();
  initial.validate();

  const double dt = slices.width();
  const double amp = 1.0 + dist.kappa;
  const auto gen = std::make_unique<RealGenerator>(model.real_generator(dist));
  const Mat8c h_static = model.static_hamiltonian(dist);
  const Mat8d& gamma = model.dephasing_rates();

  Trajectory traj;
  auto record = [&](double t, const Mat8c& x) {
    DensityMatrix d;
    d.rho = model.to_eigen(x);
    traj.times.push_back(t);
    traj.populations.push_back(d.populations());
    traj.states.push_back(std::move(d));
  };

  RealVec x = to_real(model.to_product(initial.rho));
  const std::size_t stride = options.checkpoint_stride;
  if (stride > 0) record(0.0, from_real(x));
  auto m = std::make_unique<RealOp>();
  const std::size_t n = slices.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double op = slices.omega_p[k], os = slices.omega_s[k];
    switch (options.integrator) {
      case Integrator::taylor: {
        const double bound = gen->assemble(op, os, *m);
        taylor_step(*m, bound, dt, x);
        break;
      }
      case Integrator::rk4: {
        const double bound = gen->assemble(op, os, *m);
        rk4_step(*m, bound, dt, options.rk4_substeps, x);
        break;
      }
      case Integrator::liouvillian_exp: {
        const Mat8c h = h_static + amp * (op * model.pump_generator() + os * model.stokes_generator());
        const SuperOp prop = (liouvillian_superoperator(h, gamma) * dt).exp();
        Mat8c rho = from_real(x);
        const Eigen::VectorXcd out = prop * Eigen::Map<const Eigen::VectorXcd>(rho.data(), kDim * kDim);
        x = to_real(Eigen::Map<const Mat8c>(out.data()));
        break;
      }
    }
    if (stride > 0 && (k + 1) % stride == 0 && k + 1 < n)
      record(static_cast<double>(k + 1) * dt, from_real(x));
  }

  Mat8c rho = from_real(x);
  traj.symmetrization_adjustment = restore_invariants(rho);
  record(slices.duration_us, rho);
  if (traj.states.back().min_eigenvalue() < kPositivityLimit)
    fail(ErrorCode::step_unstable, "propagated state lost positivity; refine the time stepping");
  return traj;
}

Trajectory propagate(const LindbladModel& model, const SampledField& field,
                     const Disturbance& dist, const DensityMatrix& initial,
                     const PropagationOptions& options) {
  return propagate(model, to_slices(field), dist, initial, options);
}

DensityMatrix final_state(const LindbladModel& model, const ControlSlices& slices,
                          const Disturbance& dist, const DensityMatrix& initial,
                          Integrator integrator) {
  PropagationOptions opt;
  opt.integrator = integrator;
  opt.checkpoint_stride = 0;
  return propagate(model, slices, dist, initial, opt).final_state();
}

double fidelity(const DensityMatrix& rho, int target_level) {
  require(target_level >= 1 && target_level <= kDim, "target level must be in 1..8");
  const cplx v = rho.rho(target_level - 1, target_level - 1);
  require(std::abs(v.imag()) < 1e-10, "fidelity has a non-negligible imaginary part");
  return v.real();
}

}  // namespace nvdfs
