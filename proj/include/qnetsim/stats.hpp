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

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnetsim/analysis.hpp"
#include "qnetsim/distribution.hpp"
#include "qnetsim/rng.hpp"

namespace qnetsim {

// Standard deviation of a probability estimated from m multinomial trials.
inline double multinomial_sigma(double p, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("multinomial_sigma: m = 0");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("multinomial_sigma: p outside [0,1]");
  }
  return std::sqrt(p * (1.0 - p) / static_cast<double>(m));
}

// Error on the average winning probability: each setting contributes an
// independent multinomial error on its single winning outcome, so
// sigma^2 = (1/K^2) sum_s p_s(1-p_s)/m over the K settings averaged.
// K = 4^n unless the data is a flagged subset.
inline double sigma_pwin(const std::vector<double>& winning_probs,
                         std::uint64_t m, int n, bool allow_subset = false) {
  if (m == 0) throw std::invalid_argument("sigma_pwin: m = 0");
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  if (!allow_subset && winning_probs.size() != total) {
    throw std::invalid_argument(
        "sigma_pwin: expected all " + std::to_string(total) +
        " settings, got " + std::to_string(winning_probs.size()));
  }
  if (winning_probs.empty()) {
    throw std::invalid_argument("sigma_pwin: no settings");
  }
  double acc = 0.0;
  for (double p : winning_probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("sigma_pwin: p outside [0,1]");
    }
    acc += p * (1.0 - p);
  }
  const double k = static_cast<double>(winning_probs.size());
  return std::sqrt(acc / (k * k * static_cast<double>(m)));
}

struct CovarianceMatrixI {
  int n = 0;
  std::vector<std::vector<double>> sigma;  // symmetric, 2^{n-1} square
};

// Covariance of the I_j estimators under independent multinomial errors per
// setting. The branch-parity factor is common to every recipe and cancels
// from the sign, leaving (-1)^{f_i(b)+f_j(b)+g_i(x)+g_j(x)} weights on
// p(1-p)/ (4^n m).
inline CovarianceMatrixI covariance_I(const std::vector<OutcomeDistribution>& dists,
                                      const GeneratorSet& generators,
                                      std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("covariance_I: m = 0");
  const int n = generators.n;
  const std::uint64_t nsettings = std::uint64_t{1} << n;
  if (dists.size() != nsettings) {
    throw std::invalid_argument("covariance_I: need all " +
                                std::to_string(nsettings) + " settings");
  }
  const std::uint64_t outcomes = std::uint64_t{1} << (2 * n);
  const std::uint64_t bmask = nsettings - 1;
  for (const OutcomeDistribution& d : dists) {
    if (static_cast<std::uint64_t>(d.size()) != outcomes) {
      throw std::invalid_argument("covariance_I: distribution width mismatch");
    }
  }

  const std::size_t g = generators.entries.size();
  CovarianceMatrixI cov;
  cov.n = n;
  cov.sigma.assign(g, std::vector<double>(g, 0.0));

  const double norm =
      1.0 / (std::ldexp(1.0, 2 * n) * static_cast<double>(m));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i; j < g; ++j) {
      const GeneratorSet::Entry& ei = generators.entries[i];
      const GeneratorSet::Entry& ej = generators.entries[j];
      const std::uint32_t fmask = ei.f_mask ^ ej.f_mask;
      const int fconst = ei.f_const ^ ej.f_const;
      const std::uint32_t gmask = ei.g_mask ^ ej.g_mask;
      double acc = 0.0;
      for (std::uint64_t xb = 0; xb < nsettings; ++xb) {
        const OutcomeDistribution& d = dists[xb];
        const int gsign = parity(xb & gmask);
        double inner = 0.0;
        for (std::uint64_t idx = 0; idx < outcomes; ++idx) {
          const double p = d.probs[idx];
          const double w = p * (1.0 - p);
          inner += (parity((idx & bmask) & fmask) ^ fconst) ? -w : w;
        }
        acc += gsign ? -inner : inner;
      }
      cov.sigma[i][j] = cov.sigma[j][i] = acc * norm;
    }
  }
  return cov;
}

// First-order propagation of the I covariance to the star figure of merit.
// The derivative of |I|^{1/n} diverges as I -> 0, so near-zero I_j values
// are refused; bootstrap_sigma is the estimator to use there.
inline double sigma_SN(const StarStatistics& stats, const CovarianceMatrixI& cov,
                       int n, double epsilon_I = 1e-9) {
  const std::size_t g = stats.I.size();
  if (cov.sigma.size() != g) {
    throw std::invalid_argument("sigma_SN: generator count mismatch");
  }
  for (std::size_t j = 0; j < g; ++j) {
    if (std::abs(stats.I[j]) < epsilon_I) {
      throw std::domain_error(
          "sigma_SN: |I_" + std::to_string(j + 1) +
          "| below " + std::to_string(epsilon_I) +
          ", derivative of |I|^{1/n} degenerates; use bootstrap_sigma");
    }
  }
  std::vector<double> w(g);
  for (std::size_t j = 0; j < g; ++j) {
    w[j] = std::pow(std::abs(stats.I[j]), 1.0 / n - 1.0);
  }
  double var = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      var += w[i] * w[j] * cov.sigma[i][j];
    }
  }
  var /= static_cast<double>(n) * static_cast<double>(n) *
         std::ldexp(1.0, 2 * (n - 2));
  return std::sqrt(var > 0.0 ? var : 0.0);
}

// Standard deviation of an arbitrary statistic under multinomial resampling
// of the observed counts. Each resample r redraws every setting s with a
// seed derived from (seed, r, s), so results do not depend on evaluation
// order.
inline double bootstrap_sigma(
    const std::vector<Counts>& counts,
    const std::function<double(const std::vector<Counts>&)>& statistic,
    int resamples, std::uint64_t seed) {
  if (resamples < 100) {
    throw std::invalid_argument("bootstrap_sigma: resamples < 100");
  }
  std::vector<OutcomeDistribution> hats;
  hats.reserve(counts.size());
  for (const Counts& c : counts) hats.push_back(to_distribution(c));

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(resamples));
  std::vector<Counts> redrawn(counts.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t s = 0; s < counts.size(); ++s) {
      redrawn[s] = sample_counts(
          hats[s], counts[s].shots,
          derive_seed(seed, static_cast<std::uint64_t>(r),
                      static_cast<std::uint64_t>(s)));
    }
    values.push_back(statistic(redrawn));
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace qnetsim
