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

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnetsim/simulator.hpp"

namespace qnetsim {

// ---------------------------------------------------------------------------
// Experiment settings
// ---------------------------------------------------------------------------

// Input bits are packed into masks read the same way as outcome strings:
// bit of node k sits at position (n - 1 - k), i.e. node 1 is the most
// significant bit.
struct CommNetSettings {
  int n = 2;
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  void validate() const {
    if (n < 2) throw std::invalid_argument("CommNetSettings: n < 2");
    const std::uint32_t lim = std::uint32_t{1} << n;
    if (x >= lim || y >= lim) {
      throw std::invalid_argument("CommNetSettings: input mask wider than n");
    }
  }
};

struct StarSettings {
  int n = 2;
  std::uint32_t xbar = 0;

  void validate() const {
    if (n < 2) throw std::invalid_argument("StarSettings: n < 2");
    if (xbar >= (std::uint32_t{1} << n)) {
      throw std::invalid_argument("StarSettings: input mask wider than n");
    }
  }
};

struct BilocalSettings {
  int x = 1;  // branch A basis, 1..3
  int z = 1;  // branch C basis, 1..3

  void validate() const {
    if (x < 1 || x > 3 || z < 1 || z > 3) {
      throw std::invalid_argument("BilocalSettings: basis index outside 1..3");
    }
  }
};

inline bool setting_bit(std::uint32_t mask, int k, int n) {
  return (mask >> (n - 1 - k)) & 1u;
}

// ---------------------------------------------------------------------------
// Shared subcircuits
// ---------------------------------------------------------------------------

namespace detail {

inline void append_ghz_prep(Circuit& c, int first, int count) {
  c.add(Gate::h(first));
  for (int k = 1; k < count; ++k) c.add(Gate::cnot(first, first + k));
}

// Decoder for the GHZ-like basis: CNOT cascade then H on the lead qubit,
// the inverse of the preparation above.
inline void append_bsm(Circuit& c, int first, int count) {
  for (int k = 1; k < count; ++k) c.add(Gate::cnot(first, first + k));
  c.add(Gate::h(first));
}

// Singlet (|01> - |10>)/sqrt(2) on (a, b): X, H, CNOT, then X on the
// second qubit.
inline void append_singlet(Circuit& c, int a, int b) {
  c.add(Gate::x(a));
  c.add(Gate::h(a));
  c.add(Gate::cnot(a, b));
  c.add(Gate::x(b));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Communication network
// ---------------------------------------------------------------------------

// GHZ preparation, per-node encoding Z^{x_k} X^{y_k}, then the collective
// basis decoder. Output bits are (b_1, ..., b_n) in node order.
inline Circuit build_commnet_circuit(const CommNetSettings& s) {
  s.validate();
  Circuit c(s.n);
  detail::append_ghz_prep(c, 0, s.n);
  for (int k = 0; k < s.n; ++k) {
    if (setting_bit(s.y, k, s.n)) c.add(Gate::x(k));
    if (setting_bit(s.x, k, s.n)) c.add(Gate::z(k));
  }
  detail::append_bsm(c, 0, s.n);
  c.measure_all();
  return c;
}

// ---------------------------------------------------------------------------
// Star network
// ---------------------------------------------------------------------------

// Branch qubits 0..n-1, central qubits n..2n-1; Bell pair per branch. The
// branch rotation is T then H for x_i = 0 and Tdg then H for x_i = 1 (the
// two conjugate equatorial bases), followed by the collective decoder on
// the central node. Output bits are (a_1..a_n, b_1..b_n).
inline Circuit build_star_circuit(const StarSettings& s) {
  s.validate();
  Circuit c(2 * s.n);
  for (int i = 0; i < s.n; ++i) {
    c.add(Gate::h(i));
    c.add(Gate::cnot(i, s.n + i));
  }
  for (int i = 0; i < s.n; ++i) {
    c.add(setting_bit(s.xbar, i, s.n) ? Gate::tdg(i) : Gate::t(i));
    c.add(Gate::h(i));
  }
  detail::append_bsm(c, s.n, s.n);
  c.measure_all();
  return c;
}

// ---------------------------------------------------------------------------
// Elegant joint measurement
// ---------------------------------------------------------------------------

// Rotation taking the four-element entangled basis to the computational
// basis, so that reading (k_1, k_2) off (pair.first, pair.second) gives the
// outcome index b = 2 k_1 + k_2 + 1. Inverse of
// CNOT (H x I) CRz(pi/2) (S x S) (H x H), applied in time order.
inline std::vector<Gate> build_ejm_measurement(int q0, int q1) {
  if (q0 == q1) {
    throw std::invalid_argument("build_ejm_measurement: identical qubits");
  }
  constexpr double half_pi = std::numbers::pi / 2.0;
  return {
      Gate::cnot(q0, q1),
      Gate::h(q0),
      Gate::crz(q0, q1, -half_pi),
      Gate::sdg(q0),
      Gate::sdg(q1),
      Gate::h(q0),
      Gate::h(q1),
  };
}

// ---------------------------------------------------------------------------
// Bilocal line network
// ---------------------------------------------------------------------------

// Qubit layout: 0 = branch A, (1, 2) = central node, 3 = branch C, with
// singlets on (0,1) and (2,3). Branch bases: 1 -> H, 2 -> Sdg then H,
// 3 -> nothing. The joint measurement runs with qubit 2 as its first input;
// this orientation fixes which tetrahedron vertex each outcome reports
// (see analysis::bilocal_vertices). Output bits are (a, k_1, k_2, c).
inline Circuit build_bilocal_circuit(const BilocalSettings& s) {
  s.validate();
  Circuit c(4);
  detail::append_singlet(c, 0, 1);
  detail::append_singlet(c, 2, 3);

  auto rotate_basis = [&c](int q, int basis) {
    if (basis == 1) {
      c.add(Gate::h(q));
    } else if (basis == 2) {
      c.add(Gate::sdg(q));
      c.add(Gate::h(q));
    }
  };
  rotate_basis(0, s.x);
  rotate_basis(3, s.z);

  for (const Gate& g : build_ejm_measurement(2, 1)) c.add(g);
  c.measured_qubits = {0, 2, 1, 3};
  return c;
}

// ---------------------------------------------------------------------------
// Triangle network
// ---------------------------------------------------------------------------

// Six qubits on a ring. Singlets on (1,2), (3,4), (5,0); nodes measure the
// pairs (0,1), (2,3), (4,5). Output bits are (k_1 k_2) per node, giving
// the three outcome indices in {1..4}.
inline Circuit build_triangle_circuit() {
  Circuit c(6);
  detail::append_singlet(c, 1, 2);
  detail::append_singlet(c, 3, 4);
  detail::append_singlet(c, 5, 0);
  for (int node = 0; node < 3; ++node) {
    for (const Gate& g : build_ejm_measurement(2 * node, 2 * node + 1)) {
      c.add(g);
    }
  }
  c.measure_all();
  return c;
}

}  // namespace qnetsim
