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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qnetsim/distribution.hpp"
#include "qnetsim/noise.hpp"
#include "qnetsim/rng.hpp"
#include "qnetsim/simulator.hpp"

namespace qnetsim {

// Column-stochastic readout transition matrix: A[i][j] is the probability of
// reading outcome i after preparing basis state j.
struct CalibrationMatrix {
  int n = 0;
  std::string mode;  // "exact" or "sampled"
  std::vector<std::vector<double>> A;

  std::uint64_t dim() const { return std::uint64_t{1} << n; }
};

struct CalibrationMode {
  bool sampled = false;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  static CalibrationMode exact() { return {}; }
  static CalibrationMode sampled_mode(std::uint64_t shots, std::uint64_t seed) {
    return {true, shots, seed};
  }
};

// Exact mode multiplies out the per-qubit confusion factors; sampled mode
// prepares each basis state, pushes it through the readout confusion, and
// records empirical column frequencies.
inline CalibrationMatrix build_calibration(int n, const NoiseModel& noise,
                                           const CalibrationMode& mode) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("build_calibration: n outside [1," +
                                std::to_string(kMaxQubits) + "]");
  }
  if (mode.sampled && mode.shots == 0) {
    throw std::invalid_argument("build_calibration: sampled mode needs shots");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<ReadoutError> errors;
  errors.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) errors.push_back(noise.readout_for(q));

  CalibrationMatrix cal;
  cal.n = n;
  cal.mode = mode.sampled ? "sampled" : "exact";
  cal.A.assign(dim, std::vector<double>(dim, 0.0));

  for (std::uint64_t j = 0; j < dim; ++j) {
    if (!mode.sampled) {
      for (std::uint64_t i = 0; i < dim; ++i) {
        double p = 1.0;
        for (int q = 0; q < n; ++q) {
          const bool prepared = (j >> (n - 1 - q)) & 1;
          const bool read = (i >> (n - 1 - q)) & 1;
          const ReadoutError& e = errors[static_cast<std::size_t>(q)];
          if (prepared) {
            p *= read ? 1.0 - e.p10 : e.p10;
          } else {
            p *= read ? e.p01 : 1.0 - e.p01;
          }
        }
        cal.A[i][j] = p;
      }
    } else {
      OutcomeDistribution prep = zero_distribution(n);
      prep.probs[j] = 1.0;
      prep = apply_readout_confusion(prep, errors);
      const Counts c = sample_counts(prep, mode.shots, derive_seed(mode.seed, j));
      for (std::uint64_t i = 0; i < dim; ++i) {
        cal.A[i][j] = static_cast<double>(c.counts[i]) /
                      static_cast<double>(mode.shots);
      }
    }
  }
  return cal;
}

// Mitigated values may be negative; the type keeps that explicit instead of
// clamping. condition_number is sigma_max / sigma_min of the calibration.
struct QuasiDistribution {
  int num_bits = 0;
  std::vector<double> values;
  double sum = 0.0;
  double condition_number = 0.0;
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const CalibrationMatrix& cal) {
  const auto dim = static_cast<Eigen::Index>(cal.dim());
  Eigen::MatrixXd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(i, j) = cal.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return a;
}

inline void check_dims(const OutcomeDistribution& raw,
                       const CalibrationMatrix& cal, const char* who) {
  if (raw.num_bits != cal.n) {
    throw std::invalid_argument(std::string(who) + ": distribution is " +
                                std::to_string(raw.num_bits) +
                                " bits, calibration is " +
                                std::to_string(cal.n));
  }
}

// Euclidean projection onto the probability simplex (sort and threshold).
inline std::vector<double> project_to_simplex(const std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    x[i] = std::max(v[i] - tau, 0.0);
  }
  return x;
}

}  // namespace detail

// Applies the Moore-Penrose inverse of the calibration to the raw
// frequencies. Rank deficiency is absorbed by the pseudo-inverse; the
// caller can judge trustworthiness from the reported condition number.
inline QuasiDistribution mitigate_pinv(const OutcomeDistribution& raw,
                                       const CalibrationMatrix& cal) {
  detail::check_dims(raw, cal, "mitigate_pinv");
  const Eigen::MatrixXd a = detail::to_eigen(cal);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd b =
      Eigen::Map<const Eigen::VectorXd>(raw.probs.data(),
                                        static_cast<Eigen::Index>(raw.size()));
  const Eigen::VectorXd x = svd.solve(b);

  QuasiDistribution out;
  out.num_bits = raw.num_bits;
  out.values.assign(x.data(), x.data() + x.size());
  for (double v : out.values) out.sum += v;
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition_number = smin > 0.0
                             ? sv(0) / smin
                             : std::numeric_limits<double>::infinity();
  return out;
}

// Minimizes ||A x - raw||_2 over the probability simplex with accelerated
// projected gradient descent, restarting momentum when it overshoots. Stops
// once the projected-gradient step norm falls below tol.
inline OutcomeDistribution mitigate_lsq(const OutcomeDistribution& raw,
                                        const CalibrationMatrix& cal,
                                        double tol = 1e-10) {
  detail::check_dims(raw, cal, "mitigate_lsq");
  if (!(tol > 0.0)) throw std::invalid_argument("mitigate_lsq: tol <= 0");

  const Eigen::MatrixXd a = detail::to_eigen(cal);
  const Eigen::Index dim = a.rows();
  const Eigen::VectorXd b =
      Eigen::Map<const Eigen::VectorXd>(raw.probs.data(), dim);

  const double smax = a.jacobiSvd().singularValues()(0);
  const double step = 1.0 / (2.0 * smax * smax + 1e-300);

  auto project = [&](const Eigen::VectorXd& v) {
    std::vector<double> tmp(v.data(), v.data() + v.size());
    tmp = detail::project_to_simplex(tmp);
    return Eigen::Map<const Eigen::VectorXd>(tmp.data(), dim).eval();
  };

  Eigen::VectorXd x = project(b);
  Eigen::VectorXd y = x;
  double momentum = 1.0;
  const int max_iters = 100000;
  double shift = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd grad = 2.0 * (a.transpose() * (a * y - b));
    const Eigen::VectorXd xn = project(y - step * grad);
    shift = (xn - x).norm();
    if (shift <= tol * step) {
      return OutcomeDistribution{raw.num_bits,
                                 {xn.data(), xn.data() + xn.size()}};
    }
    const double mn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    Eigen::VectorXd yn = xn + ((momentum - 1.0) / mn) * (xn - x);
    if ((a * xn - b).squaredNorm() > (a * x - b).squaredNorm()) {
      yn = xn;  // overshoot: drop accumulated momentum
      momentum = 1.0;
    } else {
      momentum = mn;
    }
    x = xn;
    y = yn;
  }
  throw std::runtime_error(
      "mitigate_lsq: no convergence after " + std::to_string(max_iters) +
      " iterations; last step norm " + std::to_string(shift) +
      ", residual " + std::to_string((a * x - b).norm()));
}

inline nlohmann::json calibration_to_json(const CalibrationMatrix& cal) {
  nlohmann::json rows = nlohmann::json::array();
  for (const std::vector<double>& row : cal.A) rows.push_back(row);
  return nlohmann::json{{"n", cal.n}, {"mode", cal.mode}, {"A", rows}};
}

inline CalibrationMatrix calibration_from_json(const nlohmann::json& j) {
  CalibrationMatrix cal;
  cal.n = j.at("n").get<int>();
  cal.mode = j.at("mode").get<std::string>();
  const std::uint64_t dim = cal.dim();
  cal.A = j.at("A").get<std::vector<std::vector<double>>>();
  if (cal.A.size() != dim) {
    throw std::invalid_argument("calibration_from_json: row count mismatch");
  }
  for (const std::vector<double>& row : cal.A) {
    if (row.size() != dim) {
      throw std::invalid_argument("calibration_from_json: column count mismatch");
    }
  }
  return cal;
}

}  // namespace qnetsim
