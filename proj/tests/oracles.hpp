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

// Helpers shared by the unit tests. Nothing here calls into the library's
// numerics, so the oracles stay independent of the code under test.

#ifndef NVDFS_TESTS_ORACLES_HPP
#define NVDFS_TESTS_ORACLES_HPP

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;

// m_s = 0 nuclear block written out element by element in {uu, ud, du, dd}.
inline Eigen::Matrix4d ms0_block(double d12, double gc, double bx, double bz) {
  const double z = gc * bz, x = 0.5 * gc * bx;
  Eigen::Matrix4d h;
  h << z - 0.5 * d12, x, x, 0.0,
       x, 0.5 * d12, 0.5 * d12, x,
       x, 0.5 * d12, 0.5 * d12, x,
       0.0, x, x, -z - 0.5 * d12;
  return h;
}

// det(H - E) for a 4x4 matrix; the singlet factor contributes a root at E = 0.
inline double char_poly(const Eigen::Matrix4d& h, double e) {
  return (h - e * Eigen::Matrix4d::Identity()).determinant();
}

template <int N>
Eigen::Matrix<C, N, N> random_hermitian(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::Matrix<C, N, N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = C(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

template <int N>
Eigen::Matrix<C, N, N> random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix<C, N, N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = C(n(rng), n(rng));
  Eigen::Matrix<C, N, N> rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace oracle

#endif  // NVDFS_TESTS_ORACLES_HPP
