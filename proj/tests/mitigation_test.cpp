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

#include "qnetsim/distribution.hpp"
#include "qnetsim/mitigation.hpp"
#include "qnetsim/noise.hpp"
#include "qnetsim/protocols.hpp"

namespace qnetsim {
namespace {

NoiseModel uniform_readout(double p01, double p10) {
  NoiseModel m;
  m.uniform_readout = ReadoutError{p01, p10};
  return m;
}

TEST(BuildCalibration, SingleQubitExactMatrix) {
  const CalibrationMatrix cal =
      build_calibration(1, uniform_readout(0.1, 0.05), CalibrationMode::exact());
  EXPECT_EQ(cal.n, 1);
  EXPECT_EQ(cal.mode, "exact");
  EXPECT_NEAR(cal.A[0][0], 0.90, 1e-15);
  EXPECT_NEAR(cal.A[1][0], 0.10, 1e-15);
  EXPECT_NEAR(cal.A[0][1], 0.05, 1e-15);
  EXPECT_NEAR(cal.A[1][1], 0.95, 1e-15);
}

TEST(BuildCalibration, ExactMatrixIsAPerQubitTensorProduct) {
  NoiseModel noise;
  noise.per_qubit_readout = {ReadoutError{0.1, 0.05}, ReadoutError{0.02, 0.03}};
  const CalibrationMatrix cal =
      build_calibration(2, noise, CalibrationMode::exact());
  // P(read 00 | prep 01) = (1 - p01_a) * p10_b.
  EXPECT_NEAR(cal.A[0b00][0b01], 0.9 * 0.03, 1e-15);
  EXPECT_NEAR(cal.A[0b11][0b10], 0.95 * 0.02, 1e-15);
  EXPECT_NEAR(cal.A[0b10][0b10], 0.95 * 0.98, 1e-15);
  for (std::uint64_t j = 0; j < 4; ++j) {
    double col = 0.0;
    for (std::uint64_t i = 0; i < 4; ++i) col += cal.A[i][j];
    EXPECT_NEAR(col, 1.0, 1e-12);
  }
}

TEST(BuildCalibration, SampledModeConvergesAndIsSeedStable) {
  const NoiseModel noise = uniform_readout(0.08, 0.04);
  const CalibrationMatrix exact =
      build_calibration(1, noise, CalibrationMode::exact());
  const CalibrationMatrix a =
      build_calibration(1, noise, CalibrationMode::sampled_mode(200000, 11));
  const CalibrationMatrix b =
      build_calibration(1, noise, CalibrationMode::sampled_mode(200000, 11));
  EXPECT_EQ(a.mode, "sampled");
  for (std::uint64_t i = 0; i < 2; ++i) {
    for (std::uint64_t j = 0; j < 2; ++j) {
      EXPECT_EQ(a.A[i][j], b.A[i][j]);
      EXPECT_NEAR(a.A[i][j], exact.A[i][j], 0.01);
    }
    double col = 0.0;
    for (std::uint64_t r = 0; r < 2; ++r) col += a.A[r][i];
    EXPECT_NEAR(col, 1.0, 1e-12);
  }
  EXPECT_THROW(build_calibration(1, noise, CalibrationMode::sampled_mode(0, 1)),
               std::invalid_argument);
  EXPECT_THROW(build_calibration(0, noise, CalibrationMode::exact()),
               std::invalid_argument);
}

TEST(MitigatePinv, InvertsExactReadoutConfusion) {
  Circuit bell(2);
  bell.add(Gate::h(0)).add(Gate::cnot(0, 1));
  bell.measure_all();
  const OutcomeDistribution clean = ideal_distribution(bell);

  const NoiseModel noise = uniform_readout(0.03, 0.02);
  const OutcomeDistribution raw = apply_readout_confusion(
      clean, {noise.readout_for(0), noise.readout_for(1)});
  const CalibrationMatrix cal =
      build_calibration(2, noise, CalibrationMode::exact());

  const QuasiDistribution fixed = mitigate_pinv(raw, cal);
  ASSERT_EQ(fixed.values.size(), 4u);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(fixed.values[i], clean.probs[i], 1e-10);
  }
  EXPECT_NEAR(fixed.sum, 1.0, 1e-10);
  EXPECT_GT(fixed.condition_number, 1.0);
}

TEST(MitigatePinv, ReportsQuasiProbabilitiesAndConditioning) {
  // Symmetric flip channel: A = [[0.7, 0.3], [0.3, 0.7]], singular values
  // 1 and 0.4. Raw (0.9, 0.1) sits outside its image of the simplex, so the
  // inverse goes negative: (1.5, -0.5).
  const CalibrationMatrix cal =
      build_calibration(1, uniform_readout(0.3, 0.3), CalibrationMode::exact());
  OutcomeDistribution raw = zero_distribution(1);
  raw.probs = {0.9, 0.1};
  const QuasiDistribution q = mitigate_pinv(raw, cal);
  EXPECT_NEAR(q.values[0], 1.5, 1e-12);
  EXPECT_NEAR(q.values[1], -0.5, 1e-12);
  EXPECT_NEAR(q.sum, 1.0, 1e-12);
  EXPECT_NEAR(q.condition_number, 2.5, 1e-12);
}

TEST(MitigateLsq, ProjectsOntoTheSimplexBoundary) {
  const CalibrationMatrix cal =
      build_calibration(1, uniform_readout(0.3, 0.3), CalibrationMode::exact());
  OutcomeDistribution raw = zero_distribution(1);
  raw.probs = {0.9, 0.1};
  const OutcomeDistribution x = mitigate_lsq(raw, cal);
  EXPECT_NEAR(x.probs[0], 1.0, 1e-6);
  EXPECT_NEAR(x.probs[1], 0.0, 1e-6);
  EXPECT_NEAR(x.sum(), 1.0, 1e-9);
}

TEST(MitigateLsq, AgreesWithPinvInTheInterior) {
  const NoiseModel noise = uniform_readout(0.05, 0.04);
  const CalibrationMatrix cal =
      build_calibration(2, noise, CalibrationMode::exact());
  OutcomeDistribution clean = zero_distribution(2);
  clean.probs = {0.4, 0.3, 0.2, 0.1};
  const OutcomeDistribution raw = apply_readout_confusion(
      clean, std::vector<ReadoutError>(2, *noise.uniform_readout));

  const QuasiDistribution p = mitigate_pinv(raw, cal);
  const OutcomeDistribution l = mitigate_lsq(raw, cal);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(l.probs[i], p.values[i], 1e-6);
    EXPECT_NEAR(l.probs[i], clean.probs[i], 1e-6);
  }
}

TEST(MitigateLsq, IdentityCalibrationIsANoOp) {
  const CalibrationMatrix cal =
      build_calibration(2, NoiseModel{}, CalibrationMode::exact());
  OutcomeDistribution raw = zero_distribution(2);
  raw.probs = {0.1, 0.2, 0.3, 0.4};
  const OutcomeDistribution x = mitigate_lsq(raw, cal);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(x.probs[i], raw.probs[i], 1e-10);
  }
}

TEST(Mitigation, RejectsDimensionMismatches) {
  const CalibrationMatrix cal =
      build_calibration(2, uniform_readout(0.1, 0.1), CalibrationMode::exact());
  const OutcomeDistribution raw = zero_distribution(1);
  EXPECT_THROW(mitigate_pinv(raw, cal), std::invalid_argument);
  EXPECT_THROW(mitigate_lsq(raw, cal), std::invalid_argument);
  EXPECT_THROW(mitigate_lsq(zero_distribution(2), cal, 0.0),
               std::invalid_argument);
}

TEST(CalibrationJson, RoundTripsExactly) {
  const CalibrationMatrix cal = build_calibration(
      2, uniform_readout(0.07, 0.01), CalibrationMode::sampled_mode(5000, 3));
  const CalibrationMatrix back = calibration_from_json(calibration_to_json(cal));
  EXPECT_EQ(back.n, cal.n);
  EXPECT_EQ(back.mode, cal.mode);
  EXPECT_EQ(back.A, cal.A);

  nlohmann::json j = calibration_to_json(cal);
  j["A"].erase(0);
  EXPECT_THROW(calibration_from_json(j), std::invalid_argument);
}

}  // namespace
}  // namespace qnetsim
