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

#ifndef NVDFS_LIOUVILLIAN_HPP
#define NVDFS_LIOUVILLIAN_HPP

// Kernels for the generator L(X) = -i[H, X] - Gamma o X. The dissipator is
// written in the product basis, where every dephasing operator is diagonal,
// so it acts elementwise with Gamma_ab = sum_k g_k (z_k(a) - z_k(b))^2.
//
// Hermitian matrices are also carried as 64 real coordinates (diagonal
// entries, then sqrt(2) Re and sqrt(2) Im of the upper triangle). The map is
// an isometry for the Hilbert-Schmidt product, so the adjoint of a real
// generator is its transpose.

#include "nvdfs/types.hpp"

namespace nvdfs {

inline constexpr int kRealDim = kDim * kDim;

using RealVec = Eigen::Matrix<double, kRealDim, 1>;
using RealOp = Eigen::Matrix<double, kRealDim, kRealDim>;
using SuperOp = Eigen::MatrixXcd;  // 64x64 on the column-major vec(X)

// Complex form; assumes H and X Hermitian (one product gives the commutator).
void apply_liouvillian(const Mat8c& h, const Mat8d& gamma, const Mat8c& x, Mat8c& out);

RealVec to_real(const Mat8c& hermitian);
Mat8c from_real(const RealVec& coords);

// Real matrix of X -> -i[H, X] - Gamma o X.
RealOp real_liouvillian(const Mat8c& h, const Mat8d& gamma);

double one_norm(const RealOp& m);

// x <- exp(dt M) x (or exp(dt M^T) x) by a truncated Taylor series on
// substeps of norm at most 1. norm_bound must bound |M|_1.
void taylor_step(const RealOp& m, double norm_bound, double dt, RealVec& x,
                 bool transpose = false);

// x <- exp(dt M) x and d[i] <- exp(dt M) d[i] + d/du exp(dt (M + u E_i)) x at
// u = 0, using the block generator [[M, E_i], [0, M]]. Pass zeroed d[i] for a
// single-step derivative. At most two directions.
void taylor_step_with_derivatives(const RealOp& m, double norm_bound, double dt,
                                  const RealOp* directions, const double* direction_norms,
                                  int n_directions, RealVec& x, RealVec* derivatives);

// Classical fourth-order Runge-Kutta with at least `substeps` steps.
void rk4_step(const RealOp& m, double norm_bound, double dt, int substeps, RealVec& x);

// Dense complex superoperator written entry by entry from H and Gamma;
// the reference path and an independent check of real_liouvillian.
SuperOp liouvillian_superoperator(const Mat8c& h, const Mat8d& gamma);

}  // namespace nvdfs

#endif  // NVDFS_LIOUVILLIAN_HPP
