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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nvdfs/error.hpp"
#include "nvdfs/hamiltonian.hpp"
#include "oracles.hpp"

using namespace nvdfs;

namespace {

SystemParams with_fields(double bx, double bz) {
  SystemParams p = SystemParams::defaults();
  p.bx_gauss = bx;
  p.bz_gauss = bz;
  return p;
}

double cubic_scale(const EigenSystem& e) {
  const double m = e.energies.head<4>().cwiseAbs().maxCoeff();
  return 8.0 * m * m * m;
}

}  // namespace

TEST(Hamiltonian, StaticBlockMatchesHandBuiltOracle) {
  for (auto [bx, bz] : {std::pair{100.0, 5.0}, {0.0, 0.0}, {3.0, 70.0}}) {
    const SystemParams p = with_fields(bx, bz);
    const StaticBlocks b = build_static_blocks(p);
    const Eigen::Matrix4d ref = oracle::ms0_block(p.dipolar_coupling, p.gamma_c, bx, bz);
    EXPECT_LT((b.ms0 - ref).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Hamiltonian, ZeroFieldSinglet) {
  const SystemParams p = with_fields(0.0, 0.0);
  const StaticBlocks b = build_static_blocks(p);
  const Eigen::Vector4d singlet(0.0, M_SQRT1_2, -M_SQRT1_2, 0.0);
  EXPECT_LT((b.ms0 * singlet).norm(), 1e-15);
  // The symmetric partner sits at +d12; the aligned pair at -d12/2.
  const Eigen::Vector4d t0(0.0, M_SQRT1_2, M_SQRT1_2, 0.0);
  EXPECT_NEAR(t0.dot(b.ms0 * t0), p.dipolar_coupling, 1e-15);
  EXPECT_NEAR(b.ms0(0, 0), -0.5 * p.dipolar_coupling, 1e-15);
}

TEST(Hamiltonian, Ms1BlockIsDiagonal) {
  const SystemParams p = SystemParams::defaults();
  const StaticBlocks b = build_static_blocks(p);
  const double c = p.zero_field_splitting + p.gamma_e * p.bz_gauss;
  const double a1 = p.hyperfine_1, a2 = p.hyperfine_2;
  const Eigen::Vector4d expect(c + 0.5 * (a1 + a2), c + 0.5 * (a1 - a2), c - 0.5 * (a1 - a2),
                               c - 0.5 * (a1 + a2));
  EXPECT_LT((b.ms1.diagonal() - expect).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ((b.ms1 - Mat4d(b.ms1.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, CubicEqualsCharacteristicPolynomialOverE) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0), f(0.0, 100.0);
  for (int k = 0; k < 50; ++k) {
    SystemParams p = with_fields(f(rng), f(rng));
    p.dipolar_coupling = 0.01 * u(rng);
    const Eigen::Matrix4d h = oracle::ms0_block(p.dipolar_coupling, p.gamma_c, p.bx_gauss, p.bz_gauss);
    const double e = u(rng);
    const double expect = 8.0 * oracle::char_poly(h, e) / e;
    EXPECT_NEAR(cubic_residual(e, p), expect, 1e-9 * (1.0 + std::abs(expect)));
  }
}

TEST(Hamiltonian, CubicSpecialValues) {
  const SystemParams z = with_fields(0.0, 0.0);
  const double d = z.dipolar_coupling;
  EXPECT_NEAR(cubic_residual(d, z), 0.0, 1e-20);
  EXPECT_NEAR(cubic_residual(-0.5 * d, z), 0.0, 1e-20);

  const SystemParams p = SystemParams::defaults();
  const double g2 = p.gamma_c * p.gamma_c;
  const double expect = -2.0 * d * d * d - 4.0 * p.bx_gauss * p.bx_gauss * d * g2 +
                        8.0 * p.bz_gauss * p.bz_gauss * d * g2;
  EXPECT_DOUBLE_EQ(cubic_residual(0.0, p), expect);
}

TEST(Hamiltonian, EigenvaluesAreCubicRoots) {
  const EigenSystem e = diagonalize(SystemParams::defaults());
  const SystemParams p = SystemParams::defaults();
  EXPECT_LE(std::abs(e.energies(1)), 1e-10 * e.energies.head<4>().cwiseAbs().maxCoeff());
  for (int j : {0, 2, 3}) EXPECT_LT(std::abs(cubic_residual(e.energies(j), p)), 1e-8 * cubic_scale(e));
}

TEST(Hamiltonian, SingletIsExact) {
  const EigenSystem e = diagonalize(SystemParams::defaults());
  const double r = M_SQRT1_2;
  for (int a = 0; a < kDim; ++a) {
    const double expect = a == 1 ? r : a == 2 ? -r : 0.0;
    EXPECT_NEAR(std::abs(e.states(a, 1)), std::abs(expect), 1e-12);
  }
}

TEST(Hamiltonian, LabelingStableOverFieldGrid) {
  for (double bx = 1.0; bx <= 100.0; bx += 9.9) {
    for (double bz = 1.0; bz <= 100.0; bz += 9.9) {
      const SystemParams p = with_fields(bx, bz);
      const EigenSystem e = diagonalize(p);
      const double scale = e.energies.head<4>().cwiseAbs().maxCoeff();
      EXPECT_LE(std::abs(e.energies(1)), 1e-10 * scale) << bx << " " << bz;
      EXPECT_LT(std::abs(e.energies(2)), std::abs(e.energies(0))) << bx << " " << bz;
      EXPECT_LT(std::abs(e.energies(2)), std::abs(e.energies(3))) << bx << " " << bz;
      for (int j : {0, 2, 3})
        EXPECT_LT(std::abs(cubic_residual(e.energies(j), p)), 1e-8 * cubic_scale(e)) << bx << " " << bz;
      for (int j = 5; j < kDim; ++j) EXPECT_GT(e.energies(j), e.energies(j - 1));
    }
  }
}

TEST(Hamiltonian, AnalyticVectorsParallelToNumeric) {
  const SystemParams p = SystemParams::defaults();
  const EigenSystem e = diagonalize(p);
  for (int j : {1, 3, 4}) {
    const Eigen::Vector4d v = analytic_state(j, p).normalized();
    const Eigen::Vector4cd n = e.states.block<4, 1>(0, j - 1);
    EXPECT_GT(std::abs(n.dot(v.cast<cplx>())), 1.0 - 1e-10) << j;
  }
}

TEST(Hamiltonian, AnalyticNeedsTransverseField) {
  try {
    analytic_coefficients(1, with_fields(0.0, 5.0));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::degenerate_field);
  }
}

TEST(Hamiltonian, ChiPattern) {
  const EigenSystem e = diagonalize(SystemParams::defaults());
  EXPECT_EQ(e.chi(1, 4), cplx(0.0));
  EXPECT_EQ(e.chi(4, 1), cplx(0.0));
  EXPECT_EQ(e.chi(1, 7), cplx(0.0));
  EXPECT_EQ(e.chi(7, 1), cplx(0.0));
  EXPECT_GT(std::abs(e.chi(5, 1)), 0.1);
  EXPECT_GT(std::abs(e.chi(6, 1)), 0.1);
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      EXPECT_EQ(e.chi(i, j), std::conj(e.chi(j, i)));
      if ((i < 4) == (j < 4)) {
        EXPECT_EQ(e.chi(i, j), cplx(0.0));
      }
    }
  }
}

TEST(Hamiltonian, ChiMatchesSxSandwich) {
  const EigenSystem e = diagonalize(SystemParams::defaults());
  Mat8c v = Mat8c::Zero();
  for (int a = 0; a < 4; ++a) v(a, a + 4) = v(a + 4, a) = 1.0;
  EXPECT_LT((e.states.adjoint() * v * e.states - transition_elements(e.states)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hamiltonian, GeneratorDriveOff) {
  const EigenSystem e = diagonalize(SystemParams::defaults());
  const double delta = 0.37;
  const Mat8c h = build_rwa_generator(e, 0.0, 0.0, {delta, 0.2});
  const double expect[kDim] = {0.0, 0.0, e.energies(2), e.energies(3), e.energies(4) - e.energies(5) - delta,
                               -delta, e.energies(6) - e.energies(5) - delta, e.energies(7) - e.energies(5) - delta};
  for (int i = 0; i < kDim; ++i) {
    EXPECT_NEAR(h(i, i).real(), expect[i], 1e-9);
    for (int j = 0; j < kDim; ++j)
      if (i != j) {
        EXPECT_EQ(h(i, j), cplx(0.0));
      }
  }
}

TEST(Hamiltonian, GeneratorNominalAndKappaScaling) {
  const EigenSystem e = diagonalize(SystemParams::defaults());
  const double op = 1.3, os = -0.7;
  const Mat8c h0 = build_rwa_generator(e, op, os, {});
  for (int j = 4; j < kDim; ++j) {
    EXPECT_EQ(h0(j, 0), 0.5 * op * e.chi(j, 0));
    EXPECT_EQ(h0(j, 1), 0.5 * os * e.chi(j, 1));
  }
  EXPECT_LT((h0 - h0.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * h0.norm());
  const Mat8c h1 = build_rwa_generator(e, op, os, {0.0, 1.0});
  Mat8c off0 = h0, off1 = h1;
  off0.diagonal().setZero();
  off1.diagonal().setZero();
  EXPECT_LT((off1 - 2.0 * off0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, IdentityShiftInsensitive) {
  SystemParams p = SystemParams::defaults();
  const EigenSystem a = diagonalize(p);
  p.zero_field_splitting += 5.0;
  const EigenSystem b = diagonalize(p);
  for (int j = 4; j < kDim; ++j) EXPECT_NEAR(b.energies(j) - a.energies(j), 5.0, 1e-8);
  const Mat8c ha = build_rwa_generator(a, 1.0, 2.0, {0.1, 0.1});
  const Mat8c hb = build_rwa_generator(b, 1.0, 2.0, {0.1, 0.1});
  EXPECT_LT((ha - hb).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Hamiltonian, ConventionScalesCouplings) {
  const SystemParams lit = SystemParams::defaults(CouplingConvention::literal);
  const SystemParams ang = SystemParams::defaults(CouplingConvention::angular);
  EXPECT_DOUBLE_EQ(ang.dipolar_coupling, kTwoPi * lit.dipolar_coupling);
  EXPECT_DOUBLE_EQ(ang.hyperfine_1, kTwoPi * lit.hyperfine_1);
  EXPECT_EQ(parse_convention(convention_name(CouplingConvention::angular)), CouplingConvention::angular);
}

TEST(Hamiltonian, RejectsBadParams) {
  SystemParams p = SystemParams::defaults();
  p.t2_electron_us = -1.0;
  EXPECT_THROW(p.validate(), Error);
  p = SystemParams::defaults();
  p.dipolar_coupling = NAN;
  EXPECT_THROW(diagonalize(p), Error);
}
