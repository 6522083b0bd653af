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

#include "nvdfs/liouvillian.hpp"

#include <algorithm>
#include <cmath>

#include "nvdfs/error.hpp"

namespace nvdfs {

namespace {

constexpr int kMaxTaylorTerms = 60;
constexpr double kTaylorTolerance2 = 1e-34;  // squared relative size of the last term
constexpr double kMaxStepNorm = 1.0;
const double kSqrt2 = std::sqrt(2.0);

int substeps_for(double norm_times_dt) {
  return std::max(1, static_cast<int>(std::ceil(norm_times_dt / kMaxStepNorm)));
}

}  // namespace

void apply_liouvillian(const Mat8c& h, const Mat8d& gamma, const Mat8c& x, Mat8c& out) {
  Mat8c y;
  y.noalias() = h * x;
  for (int j = 0; j < kDim; ++j) {
    for (int i = 0; i < kDim; ++i) {
      const cplx c = y(i, j) - std::conj(y(j, i));
      out(i, j) = cplx(c.imag(), -c.real()) - gamma(i, j) * x(i, j);
    }
  }
}

RealVec to_real(const Mat8c& m) {
  RealVec r;
  int k = 0;
  for (int i = 0; i < kDim; ++i) r(k++) = m(i, i).real();
  for (int i = 0; i < kDim; ++i) {
    for (int j = i + 1; j < kDim; ++j) {
      r(k++) = kSqrt2 * m(i, j).real();
      r(k++) = kSqrt2 * m(i, j).imag();
    }
  }
  return r;
}

Mat8c from_real(const RealVec& r) {
  Mat8c m;
  int k = 0;
  for (int i = 0; i < kDim; ++i) m(i, i) = r(k++);
  for (int i = 0; i < kDim; ++i) {
    for (int j = i + 1; j < kDim; ++j) {
      const double re = r(k++) / kSqrt2;
      const double im = r(k++) / kSqrt2;
      m(i, j) = cplx(re, im);
      m(j, i) = cplx(re, -im);
    }
  }
  return m;
}

RealOp real_liouvillian(const Mat8c& h, const Mat8d& gamma) {
  RealOp op;
  RealVec e = RealVec::Zero();
  Mat8c out;
  for (int c = 0; c < kRealDim; ++c) {
    e(c) = 1.0;
    apply_liouvillian(h, gamma, from_real(e), out);
    op.col(c) = to_real(out);
    e(c) = 0.0;
  }
  return op;
}

double one_norm(const RealOp& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

void taylor_step(const RealOp& m, double norm_bound, double dt, RealVec& x, bool transpose) {
  const int substeps = substeps_for(norm_bound * dt);
  const double step = dt / substeps;
  RealVec term, next;
  for (int s = 0; s < substeps; ++s) {
    term = x;
    for (int k = 1; k <= kMaxTaylorTerms; ++k) {
      if (transpose)
        next.noalias() = m.transpose() * term;
      else
        next.noalias() = m * term;
      term = next * (step / k);
      x += term;
      if (term.squaredNorm() <= kTaylorTolerance2 * x.squaredNorm()) break;
    }
  }
}

void taylor_step_with_derivatives(const RealOp& m, double norm_bound, double dt,
                                  const RealOp* directions, const double* direction_norms,
                                  int n_directions, RealVec& x, RealVec* derivatives) {
  require(n_directions >= 0 && n_directions <= 2, "at most two derivative directions");
  double bound = norm_bound;
  for (int i = 0; i < n_directions; ++i) bound += direction_norms[i];
  const int substeps = substeps_for(bound * dt);
  const double step = dt / substeps;

  RealVec term, next;
  RealVec top[2], top_next[2];
  for (int s = 0; s < substeps; ++s) {
    term = x;
    for (int i = 0; i < n_directions; ++i) top[i] = derivatives[i];
    for (int k = 1; k <= kMaxTaylorTerms; ++k) {
      const double c = step / k;
      double largest = 0.0;
      for (int i = 0; i < n_directions; ++i) {
        top_next[i].noalias() = m * top[i];
        top_next[i].noalias() += directions[i] * term;
        top[i] = top_next[i] * c;
        derivatives[i] += top[i];
        largest = std::max(largest, top[i].squaredNorm());
      }
      next.noalias() = m * term;
      term = next * c;
      x += term;
      largest = std::max(largest, term.squaredNorm());
      if (largest <= kTaylorTolerance2 * x.squaredNorm()) break;
    }
  }
}

void rk4_step(const RealOp& m, double norm_bound, double dt, int substeps, RealVec& x) {
  const int n = std::max({1, substeps, static_cast<int>(std::ceil(norm_bound * dt / 2.0))});
  const double h = dt / n;
  RealVec k1, k2, k3, k4;
  for (int s = 0; s < n; ++s) {
    k1.noalias() = m * x;
    k2.noalias() = m * (x + 0.5 * h * k1);
    k3.noalias() = m * (x + 0.5 * h * k2);
    k4.noalias() = m * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

SuperOp liouvillian_superoperator(const Mat8c& h, const Mat8d& gamma) {
  constexpr int n = kDim;
  SuperOp s = SuperOp::Zero(n * n, n * n);
  const cplx minus_i(0.0, -1.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int row = i + n * j;
      for (int k = 0; k < n; ++k) s(row, k + n * j) += minus_i * h(i, k);
      for (int l = 0; l < n; ++l) s(row, i + n * l) -= minus_i * h(l, j);
      s(row, row) -= gamma(i, j);
    }
  }
  return s;
}

}  // namespace nvdfs
