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

#ifndef NVDFS_TYPES_HPP
#define NVDFS_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace nvdfs {

using cplx = std::complex<double>;

// Full register: electron {m_s=0, m_s=1} x two spin-1/2 nuclei.
inline constexpr int kDim = 8;
inline constexpr int kBlockDim = 4;

using Mat8c = Eigen::Matrix<cplx, kDim, kDim>;
using Mat8d = Eigen::Matrix<double, kDim, kDim>;
using Vec8c = Eigen::Matrix<cplx, kDim, 1>;
using Vec8d = Eigen::Matrix<double, kDim, 1>;
using Mat4d = Eigen::Matrix<double, kBlockDim, kBlockDim>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Product-basis index of |m_s, n1, n2> with n = 0 for spin up, 1 for spin down.
constexpr int product_index(int ms, int n1, int n2) { return ms * 4 + n1 * 2 + n2; }

}  // namespace nvdfs

#endif  // NVDFS_TYPES_HPP
