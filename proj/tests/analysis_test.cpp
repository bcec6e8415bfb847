// Copyright 2026 qnetsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qnetsim/analysis.hpp"
#include "qnetsim/distribution.hpp"
#include "qnetsim/protocols.hpp"

namespace qnetsim {
namespace {

std::vector<SettingDist> full_commnet_grid(int n) {
  std::vector<SettingDist> data;
  const std::uint32_t grid = 1u << n;
  for (std::uint32_t x = 0; x < grid; ++x) {
    for (std::uint32_t y = 0; y < grid; ++y) {
      data.push_back({commnet_setting_index(n, x, y),
                      ideal_distribution(build_commnet_circuit({n, x, y}))});
    }
  }
  return data;
}

std::vector<OutcomeDistribution> star_grid(int n) {
  std::vector<OutcomeDistribution> dists;
  for (std::uint32_t xb = 0; xb < (1u << n); ++xb) {
    dists.push_back(ideal_distribution(build_star_circuit({n, xb})));
  }
  return dists;
}

std::vector<OutcomeDistribution> bilocal_grid() {
  std::vector<OutcomeDistribution> dists;
  for (int x = 1; x <= 3; ++x) {
    for (int z = 1; z <= 3; ++z) {
      dists.push_back(ideal_distribution(build_bilocal_circuit({x, z})));
    }
  }
  return dists;
}

TEST(Parity, CountsSetBitsModTwo) {
  EXPECT_EQ(parity(0), 0);
  EXPECT_EQ(parity(0b1011), 1);
  EXPECT_EQ(parity(0b1111), 0);
}

TEST(CommNet, WinningOutcomeFollowsTheParityRules) {
  // First output bit is the XOR of all x bits; bit k is y_k XOR y_1.
  EXPECT_EQ(commnet_winning_outcome(2, 0b00, 0b00), 0b00u);
  EXPECT_EQ(commnet_winning_outcome(2, 0b10, 0b01), 0b11u);
  EXPECT_EQ(commnet_winning_outcome(2, 0b11, 0b11), 0b00u);
  EXPECT_EQ(commnet_winning_outcome(3, 0b101, 0b110), 0b001u);
  // Complementing every y bit leaves the target unchanged.
  for (std::uint32_t y = 0; y < 8; ++y) {
    EXPECT_EQ(commnet_winning_outcome(3, 5, y),
              commnet_winning_outcome(3, 5, y ^ 0b111));
  }
}

TEST(CommNet, SettingIndexPacksInputs) {
  EXPECT_EQ(commnet_setting_index(2, 0b10, 0b01), 0b1001u);
  EXPECT_EQ(commnet_setting_index(3, 0b101, 0b011), 0b101011u);
}

TEST(CommNet, QuantumProtocolWinsEverySetting) {
  for (int n = 2; n <= 3; ++n) {
    const double p = winning_probability(n, full_commnet_grid(n));
    EXPECT_NEAR(p, 1.0, 1e-9) << "n=" << n;
  }
}

TEST(CommNet, WinningProbabilityGuardsTheGrid) {
  std::vector<SettingDist> data = full_commnet_grid(2);
  data.pop_back();
  EXPECT_THROW(winning_probability(2, data), std::invalid_argument);
  EXPECT_NO_THROW(winning_probability(2, data, /*allow_subset=*/true));
  EXPECT_THROW(winning_probability(2, {}, true), std::invalid_argument);

  std::vector<SettingDist> bad = full_commnet_grid(2);
  bad[0].setting = 16;
  EXPECT_THROW(winning_probability(2, bad), std::invalid_argument);
}

TEST(CommNet, CertifiedCountMatchesTheCeilingFormula) {
  EXPECT_EQ(certified_entangled_count(0.939, 2), 4);
  EXPECT_EQ(certified_entangled_count(0.804, 5), 20);
  EXPECT_EQ(certified_entangled_count(0.580, 9), 82);
  EXPECT_EQ(certified_entangled_count(1.0, 2), 4);
  EXPECT_EQ(certified_entangled_count(0.75, 2), 2);
  EXPECT_EQ(certified_entangled_count(0.5, 4), 0);
  EXPECT_EQ(certified_entangled_count(0.2, 4), 0);
  EXPECT_THROW(certified_entangled_count(1.2, 2), std::invalid_argument);
}

TEST(Star, GeneratorsEnumerateEvenSubsets) {
  const GeneratorSet g2 = star_generators(2);
  ASSERT_EQ(g2.entries.size(), 2u);
  EXPECT_EQ(g2.entries[0].g_mask, 0b00u);
  EXPECT_EQ(g2.entries[0].f_mask, 0b10u);
  EXPECT_EQ(g2.entries[0].f_const, 0);
  EXPECT_EQ(g2.entries[1].g_mask, 0b11u);
  EXPECT_EQ(g2.entries[1].f_mask, 0b11u);
  EXPECT_EQ(g2.entries[1].f_const, 1);

  const GeneratorSet g3 = star_generators(3);
  ASSERT_EQ(g3.entries.size(), 4u);
  EXPECT_EQ(g3.entries[1].g_mask, 0b011u);
  EXPECT_EQ(g3.entries[2].g_mask, 0b101u);
  EXPECT_EQ(g3.entries[3].g_mask, 0b110u);
  EXPECT_EQ(g3.entries[3].f_mask, 0b110u);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_EQ(g3.entries[j].f_const, 1);

  const GeneratorSet g4 = star_generators(4);
  ASSERT_EQ(g4.entries.size(), 8u);
  EXPECT_EQ(g4.entries[7].g_mask, 0b1111u);
  EXPECT_EQ(g4.entries[7].f_const, 0);
  EXPECT_THROW(star_generators(1), std::invalid_argument);
}

TEST(Star, FrozenTwoBranchCorrelator) {
  // <A1 A2 B1> at xbar = 00 for the n = 2 protocol evaluates to 1/2.
  const OutcomeDistribution d = ideal_distribution(build_star_circuit({2, 0}));
  double corr = 0.0;
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    const int sign = parity(idx >> 2) ^ static_cast<int>((idx >> 1) & 1);
    corr += sign ? -d.probs[idx] : d.probs[idx];
  }
  EXPECT_NEAR(corr, 0.5, 1e-12);
}

TEST(Star, QuantumValueIsSqrtTwo) {
  for (int n = 2; n <= 4; ++n) {
    const StarStatistics st = star_statistics(n, star_grid(n));
    EXPECT_NEAR(st.S, std::sqrt(2.0), 1e-9) << "n=" << n;
    const double want = std::pow(2.0, -n / 2.0);
    for (double ij : st.I) {
      EXPECT_NEAR(std::abs(ij), want, 1e-9) << "n=" << n;
    }
  }
}

TEST(Star, StatisticsRequireTheFullGrid) {
  std::vector<OutcomeDistribution> dists = star_grid(2);
  dists.pop_back();
  EXPECT_THROW(star_statistics(2, dists), std::invalid_argument);
  dists = star_grid(2);
  dists[0] = zero_distribution(3);
  EXPECT_THROW(star_statistics(2, dists), std::invalid_argument);
}

TEST(Bilocal, VertexTableIsATetrahedron) {
  for (const auto& row : bilocal_vertices) {
    int prod = 1;
    for (int v : row) {
      EXPECT_TRUE(v == 1 || v == -1);
      prod *= v;
    }
    EXPECT_EQ(prod, 1);
  }
  // All rows distinct.
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      EXPECT_NE(bilocal_vertices[i], bilocal_vertices[j]);
    }
  }
}

TEST(Bilocal, ClassicalBoundConstant) {
  EXPECT_NEAR(bilocal_classical_bound(), 28.530576383241362, 1e-12);
}

TEST(Bilocal, QuantumStatisticsHitTheTetrahedralValues) {
  const BilocalStatistics st = bilocal_statistics(bilocal_grid());
  EXPECT_NEAR(st.B, 12.0 * std::sqrt(6.0), 1e-6);
  EXPECT_GT(st.B, st.classical_bound);
  EXPECT_FALSE(st.degenerate_pb);

  for (int b = 0; b < 4; ++b) {
    EXPECT_NEAR(st.p_b[b], 0.25, 1e-12);
    for (int x = 0; x < 3; ++x) {
      const double m = bilocal_vertices[b][x];
      EXPECT_NEAR(st.E_A[b][x], -m / 2.0, 1e-12) << "b=" << b << " x=" << x;
      EXPECT_NEAR(st.E_C[b][x], m / 2.0, 1e-12) << "b=" << b << " z=" << x;
      for (int z = 0; z < 3; ++z) {
        if (x == z) continue;
        const double mm = m * bilocal_vertices[b][z];
        EXPECT_NEAR(st.E_AC[b][x][z], -mm / 2.0, 1e-12);
      }
    }
  }
}

TEST(Bilocal, UniformProductDataScoresTwentyFour) {
  OutcomeDistribution uniform = zero_distribution(4);
  for (double& p : uniform.probs) p = 1.0 / 16.0;
  const std::vector<OutcomeDistribution> dists(9, uniform);
  const BilocalStatistics st = bilocal_statistics(dists);
  EXPECT_NEAR(st.B, 24.0, 1e-12);
  EXPECT_LT(st.B, st.classical_bound);
}

TEST(Bilocal, RequiresNineFourBitSettings) {
  std::vector<OutcomeDistribution> dists(8, zero_distribution(4));
  EXPECT_THROW(bilocal_statistics(dists), std::invalid_argument);
  dists.assign(9, zero_distribution(3));
  EXPECT_THROW(bilocal_statistics(dists), std::invalid_argument);
}

TEST(Bilocal, FlagsDegenerateCentralOutcomes) {
  OutcomeDistribution delta = zero_distribution(4);
  delta.probs[0] = 1.0;
  const std::vector<OutcomeDistribution> dists(9, delta);
  const BilocalStatistics st = bilocal_statistics(dists);
  EXPECT_TRUE(st.degenerate_pb);
  EXPECT_TRUE(std::isfinite(st.B));
}

TEST(Triangle, TheoryDistributionIsNormalizedPerCase) {
  const OutcomeDistribution d = triangle_theory();
  EXPECT_NEAR(d.sum(), 1.0, 1e-12);
  EXPECT_NEAR(d.probs[outcome_from_string("000000")], 25.0 / 256.0, 1e-15);
  EXPECT_NEAR(d.probs[outcome_from_string("111111")], 25.0 / 256.0, 1e-15);
  EXPECT_NEAR(d.probs[outcome_from_string("000001")], 1.0 / 256.0, 1e-15);
  EXPECT_NEAR(d.probs[outcome_from_string("010001")], 1.0 / 256.0, 1e-15);
  EXPECT_NEAR(d.probs[outcome_from_string("000110")], 5.0 / 256.0, 1e-15);
  EXPECT_NEAR(d.probs[outcome_from_string("011011")], 5.0 / 256.0, 1e-15);
}

TEST(KlDivergence, ZeroOnIdenticalDistributions) {
  const OutcomeDistribution d = triangle_theory();
  EXPECT_NEAR(kl_divergence(d, d), 0.0, 1e-15);
}

TEST(KlDivergence, PerfectCorrelationAgainstItsMarginalsIsLnTwo) {
  OutcomeDistribution p = zero_distribution(2);
  p.probs[0b00] = 0.5;
  p.probs[0b11] = 0.5;
  EXPECT_NEAR(kl_divergence(p, product_of_marginals(p)), std::log(2.0), 1e-12);
}

TEST(KlDivergence, RejectsSupportViolations) {
  OutcomeDistribution p = zero_distribution(1);
  p.probs = {0.5, 0.5};
  OutcomeDistribution q = zero_distribution(1);
  q.probs = {1.0, 0.0};
  EXPECT_THROW(kl_divergence(p, q), std::domain_error);
  OutcomeDistribution w = zero_distribution(2);
  EXPECT_THROW(kl_divergence(p, w), std::invalid_argument);
}

TEST(ProductOfMarginals, FixesProductDistributions) {
  OutcomeDistribution p = zero_distribution(2);
  p.probs = {0.06, 0.14, 0.24, 0.56};  // (0.2, 0.8) x (0.3, 0.7)
  const OutcomeDistribution q = product_of_marginals(p);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(q.probs[i], p.probs[i], 1e-12);
  }
}

TEST(BranchMarginal, SumsOutTheCentralBits) {
  OutcomeDistribution joint = zero_distribution(4);
  joint.probs[0b0000] = 0.25;
  joint.probs[0b0011] = 0.25;
  joint.probs[0b1101] = 0.5;
  const OutcomeDistribution m = branch_marginal(joint, 2);
  EXPECT_NEAR(m.probs[0b00], 0.5, 1e-15);
  EXPECT_NEAR(m.probs[0b11], 0.5, 1e-15);
  EXPECT_THROW(branch_marginal(joint, 3), std::invalid_argument);
}

TEST(SourceIndependence, ZeroForIndependentBranchesWorstCaseOtherwise) {
  OutcomeDistribution indep = zero_distribution(2);
  indep.probs = {0.25, 0.25, 0.25, 0.25};
  OutcomeDistribution corr = zero_distribution(2);
  corr.probs = {0.5, 0.0, 0.0, 0.5};
  EXPECT_NEAR(source_independence_kl({indep, indep}), 0.0, 1e-12);
  EXPECT_NEAR(source_independence_kl({indep, corr}), std::log(2.0), 1e-12);
  EXPECT_THROW(source_independence_kl({}), std::invalid_argument);
}

}  // namespace
}  // namespace qnetsim
