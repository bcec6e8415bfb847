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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnetsim/distribution.hpp"
#include "qnetsim/rng.hpp"
#include "qnetsim/simulator.hpp"

namespace qnetsim {

// ---------------------------------------------------------------------------
// Noise model
// ---------------------------------------------------------------------------

// Readout confusion for one qubit: p01 = P(read 1 | true 0),
// p10 = P(read 0 | true 1).
struct ReadoutError {
  double p01 = 0.0;
  double p10 = 0.0;

  bool active() const { return p01 != 0.0 || p10 != 0.0; }
};

// Stochastic Pauli insertion: probability p1 of a uniformly random
// non-identity Pauli after each one-qubit gate, p2 of a uniformly random
// non-identity two-qubit Pauli (15 options) after each two-qubit gate.
struct PauliNoise {
  double p1 = 0.0;
  double p2 = 0.0;
  int trajectories = 1;

  bool active() const { return p1 > 0.0 || p2 > 0.0; }
};

struct NoiseModel {
  // Either one pair for every qubit, or an explicit per-qubit table.
  std::optional<ReadoutError> uniform_readout;
  std::vector<ReadoutError> per_qubit_readout;
  PauliNoise pauli;

  bool has_readout() const {
    if (uniform_readout) return uniform_readout->active();
    for (const ReadoutError& r : per_qubit_readout) {
      if (r.active()) return true;
    }
    return false;
  }

  // A model with no readout section at all reads out perfectly; a per-qubit
  // table, once given, must cover every qubit asked about.
  ReadoutError readout_for(int qubit) const {
    if (uniform_readout) return *uniform_readout;
    if (per_qubit_readout.empty()) return {};
    if (qubit < 0 || qubit >= static_cast<int>(per_qubit_readout.size())) {
      throw std::invalid_argument(
          "NoiseModel: no readout entry for qubit " + std::to_string(qubit));
    }
    return per_qubit_readout[static_cast<std::size_t>(qubit)];
  }

  void validate() const {
    auto check_prob = [](double p, const char* what) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string("NoiseModel: ") + what +
                                    " outside [0,1]");
      }
    };
    if (uniform_readout) {
      check_prob(uniform_readout->p01, "readout p01");
      check_prob(uniform_readout->p10, "readout p10");
    }
    for (const ReadoutError& r : per_qubit_readout) {
      check_prob(r.p01, "readout p01");
      check_prob(r.p10, "readout p10");
    }
    check_prob(pauli.p1, "pauli p1");
    check_prob(pauli.p2, "pauli p2");
    if (pauli.trajectories < 1) {
      throw std::invalid_argument("NoiseModel: trajectories < 1");
    }
  }
};

// Schema:
//   { "readout": [[p01,p10], ...] | {"uniform": [p01,p10]},
//     "pauli":   {"p1": r, "p2": r, "trajectories": int} }
// Both sections optional.
inline NoiseModel noise_from_json(const nlohmann::json& j) {
  NoiseModel m;
  if (j.contains("readout")) {
    const auto& r = j.at("readout");
    if (r.is_object()) {
      const auto& u = r.at("uniform");
      m.uniform_readout = ReadoutError{u.at(0).get<double>(),
                                       u.at(1).get<double>()};
    } else if (r.is_array()) {
      for (const auto& e : r) {
        m.per_qubit_readout.push_back(
            ReadoutError{e.at(0).get<double>(), e.at(1).get<double>()});
      }
    } else {
      throw std::invalid_argument("noise json: 'readout' must be an array or "
                                  "an object with key 'uniform'");
    }
  }
  if (j.contains("pauli")) {
    const auto& p = j.at("pauli");
    m.pauli.p1 = p.value("p1", 0.0);
    m.pauli.p2 = p.value("p2", 0.0);
    m.pauli.trajectories = p.value("trajectories", 1);
  }
  m.validate();
  return m;
}

inline nlohmann::json noise_to_json(const NoiseModel& m) {
  nlohmann::json j = nlohmann::json::object();
  if (m.uniform_readout) {
    j["readout"] = {{"uniform", {m.uniform_readout->p01,
                                 m.uniform_readout->p10}}};
  } else if (!m.per_qubit_readout.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ReadoutError& r : m.per_qubit_readout) {
      arr.push_back({r.p01, r.p10});
    }
    j["readout"] = arr;
  }
  if (m.pauli.active() || m.pauli.trajectories != 1) {
    j["pauli"] = {{"p1", m.pauli.p1},
                  {"p2", m.pauli.p2},
                  {"trajectories", m.pauli.trajectories}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Stochastic Pauli trajectories
// ---------------------------------------------------------------------------

// One random noise realization of a circuit: after each gate, Pauli errors
// are inserted per the model probabilities. Seed-deterministic.
inline Circuit sample_pauli_trajectory(const Circuit& c,
                                       const NoiseModel& noise,
                                       std::uint64_t seed) {
  noise.validate();
  Circuit out(c.num_qubits);
  out.measured_qubits = c.measured_qubits;
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto push_pauli = [&out](int axis, int q) {
    // axis: 0 = X, 1 = Y, 2 = Z
    switch (axis) {
      case 0: out.add(Gate::x(q)); break;
      case 1: out.add(Gate::y(q)); break;
      default: out.add(Gate::z(q)); break;
    }
  };

  for (const Gate& g : c.gates) {
    out.add(g);
    if (gate_arity(g.kind) == 1) {
      if (noise.pauli.p1 > 0.0 && coin(rng) < noise.pauli.p1) {
        std::uniform_int_distribution<int> pick(0, 2);
        push_pauli(pick(rng), g.q0);
      }
    } else {
      if (noise.pauli.p2 > 0.0 && coin(rng) < noise.pauli.p2) {
        // k indexes the 15 non-identity two-qubit Paulis; each factor is
        // 0 = I, 1 = X, 2 = Y, 3 = Z and (0,0) is excluded.
        std::uniform_int_distribution<int> pick(1, 15);
        const int k = pick(rng);
        const int a = k >> 2;
        const int b = k & 3;
        if (a != 0) push_pauli(a - 1, g.q0);
        if (b != 0) push_pauli(b - 1, g.q1);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Readout confusion
// ---------------------------------------------------------------------------

// Applies the tensor product of per-bit 2x2 confusion matrices
// [[1-p01, p10], [p01, 1-p10]] to a distribution. errors[i] belongs to
// measured bit position i.
inline OutcomeDistribution apply_readout_confusion(
    const OutcomeDistribution& dist, const std::vector<ReadoutError>& errors) {
  if (static_cast<int>(errors.size()) != dist.num_bits) {
    throw std::invalid_argument(
        "apply_readout_confusion: one error pair per measured bit required");
  }
  OutcomeDistribution out = dist;
  for (int b = 0; b < dist.num_bits; ++b) {
    const ReadoutError& e = errors[static_cast<std::size_t>(b)];
    if (!e.active()) continue;
    const std::uint64_t mask = std::uint64_t{1} << (dist.num_bits - 1 - b);
    for (std::uint64_t block = 0; block < out.size(); block += mask << 1) {
      for (std::uint64_t i = block; i < block + mask; ++i) {
        const double p0 = out.probs[i];
        const double p1 = out.probs[i | mask];
        out.probs[i] = (1.0 - e.p01) * p0 + e.p10 * p1;
        out.probs[i | mask] = e.p01 * p0 + (1.0 - e.p10) * p1;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact outcome distribution with optional noise
// ---------------------------------------------------------------------------

// Readout noise enters analytically; Pauli noise by averaging seeded
// trajectory realizations (hence the seed requirement when it is active).
inline OutcomeDistribution exact_distribution(
    const Circuit& c, const std::optional<NoiseModel>& noise = std::nullopt,
    std::optional<std::uint64_t> seed = std::nullopt) {
  if (!noise) return ideal_distribution(c);
  noise->validate();

  OutcomeDistribution dist;
  if (noise->pauli.active()) {
    if (!seed) {
      throw std::invalid_argument(
          "exact_distribution: Pauli noise is stochastic; a seed is required");
    }
    const int traj = noise->pauli.trajectories;
    dist = zero_distribution(static_cast<int>(c.measured_qubits.size()));
    for (int t = 0; t < traj; ++t) {
      const Circuit real =
          sample_pauli_trajectory(c, *noise, derive_seed(*seed, t));
      const OutcomeDistribution d = ideal_distribution(real);
      for (std::uint64_t i = 0; i < dist.size(); ++i) dist.probs[i] += d.probs[i];
    }
    const double inv = 1.0 / static_cast<double>(traj);
    for (double& p : dist.probs) p *= inv;
  } else {
    dist = ideal_distribution(c);
  }

  if (noise->has_readout()) {
    std::vector<ReadoutError> errors;
    errors.reserve(c.measured_qubits.size());
    for (int q : c.measured_qubits) errors.push_back(noise->readout_for(q));
    dist = apply_readout_confusion(dist, errors);
  }
  return dist;
}

}  // namespace qnetsim
