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
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnetsim/rng.hpp"
#include "qnetsim/simulator.hpp"

namespace qnetsim {

// Probabilities over all 2^num_bits outcome strings, indexed by the string
// read as a binary number (first/leftmost bit most significant).
struct OutcomeDistribution {
  int num_bits = 0;
  std::vector<double> probs;

  std::uint64_t size() const { return std::uint64_t{1} << num_bits; }

  double sum() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }
};

inline OutcomeDistribution zero_distribution(int num_bits) {
  OutcomeDistribution d;
  d.num_bits = num_bits;
  d.probs.assign(std::uint64_t{1} << num_bits, 0.0);
  return d;
}

// Sampled counts over the same index space.
struct Counts {
  int num_bits = 0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t size() const { return std::uint64_t{1} << num_bits; }
};

inline OutcomeDistribution to_distribution(const Counts& c) {
  if (c.shots == 0) throw std::invalid_argument("to_distribution: zero shots");
  OutcomeDistribution d = zero_distribution(c.num_bits);
  for (std::uint64_t i = 0; i < c.size(); ++i) {
    d.probs[i] = static_cast<double>(c.counts[i]) / static_cast<double>(c.shots);
  }
  return d;
}

// Outcome index <-> bitstring helpers ("0110", first character = first
// measured qubit).
inline std::string outcome_to_string(std::uint64_t idx, int num_bits) {
  std::string s(num_bits, '0');
  for (int b = 0; b < num_bits; ++b) {
    if (idx >> (num_bits - 1 - b) & 1) s[b] = '1';
  }
  return s;
}

inline std::uint64_t outcome_from_string(const std::string& s) {
  std::uint64_t idx = 0;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("outcome_from_string: bad bitstring '" + s +
                                  "'");
    }
    idx = (idx << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return idx;
}

// Noiseless readout distribution of a circuit over its measured qubits.
inline OutcomeDistribution ideal_distribution(const Circuit& c) {
  const StateVector st = run_circuit(c);
  const int nbits = static_cast<int>(c.measured_qubits.size());
  if (nbits == 0) {
    throw std::invalid_argument("ideal_distribution: no measured qubits");
  }
  OutcomeDistribution out = zero_distribution(nbits);

  // Precompute per-measured-bit source masks, then scatter |amp|^2.
  std::vector<std::uint64_t> src(nbits);
  for (int b = 0; b < nbits; ++b) {
    src[b] = std::uint64_t{1} << (c.num_qubits - 1 - c.measured_qubits[b]);
  }
  const std::uint64_t dim = st.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    const double p = std::norm(st.amps[i]);
    if (p == 0.0) continue;
    std::uint64_t o = 0;
    for (int b = 0; b < nbits; ++b) {
      o = (o << 1) | ((i & src[b]) != 0 ? 1u : 0u);
    }
    out.probs[o] += p;
  }
  return out;
}

// Multinomial sampling via sequential conditional binomials. Deterministic
// for a fixed (dist, shots, seed) triple.
inline Counts sample_counts(const OutcomeDistribution& dist,
                            std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("sample_counts: zero shots");
  Counts c;
  c.num_bits = dist.num_bits;
  c.shots = shots;
  c.counts.assign(dist.size(), 0);

  Rng rng = make_rng(seed);
  std::uint64_t remaining = shots;
  double mass_left = 1.0;
  const std::uint64_t last = dist.size() - 1;
  for (std::uint64_t i = 0; i <= last && remaining > 0; ++i) {
    if (i == last) {
      c.counts[i] = remaining;
      break;
    }
    const double p = std::clamp(
        mass_left > 0.0 ? dist.probs[i] / mass_left : 1.0, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> bin(remaining, p);
    const std::uint64_t k = bin(rng);
    c.counts[i] = k;
    remaining -= k;
    mass_left -= dist.probs[i];
  }
  return c;
}

}  // namespace qnetsim
