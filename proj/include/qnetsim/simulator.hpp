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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnetsim {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24;

// ---------------------------------------------------------------------------
// State vector
// ---------------------------------------------------------------------------

// Pure n-qubit state as 2^n complex amplitudes. Qubit 0 owns the most
// significant bit of the amplitude index, so the basis label read left to
// right is qubit 0, qubit 1, ...
struct StateVector {
  int num_qubits = 0;
  std::vector<cplx> amps;

  std::uint64_t dim() const { return std::uint64_t{1} << num_qubits; }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return s;
  }
};

inline StateVector new_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("new_state: qubit count " +
                                std::to_string(num_qubits) +
                                " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
  StateVector s;
  s.num_qubits = num_qubits;
  s.amps.assign(std::uint64_t{1} << num_qubits, cplx{0.0, 0.0});
  s.amps[0] = cplx{1.0, 0.0};
  return s;
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

enum class GateKind {
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  Rz,
  CNOT,
  CRz,
};

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "Tdg";
    case GateKind::Rz: return "Rz";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRz: return "CRz";
  }
  return "?";
}

inline int gate_arity(GateKind k) {
  return (k == GateKind::CNOT || k == GateKind::CRz) ? 2 : 1;
}

struct Gate {
  GateKind kind;
  int q0 = 0;        // single target, or control for two-qubit kinds
  int q1 = -1;       // target for two-qubit kinds
  double theta = 0;  // Rz / CRz angle, radians

  static Gate h(int q) { return {GateKind::H, q}; }
  static Gate x(int q) { return {GateKind::X, q}; }
  static Gate y(int q) { return {GateKind::Y, q}; }
  static Gate z(int q) { return {GateKind::Z, q}; }
  static Gate s(int q) { return {GateKind::S, q}; }
  static Gate sdg(int q) { return {GateKind::Sdg, q}; }
  static Gate t(int q) { return {GateKind::T, q}; }
  static Gate tdg(int q) { return {GateKind::Tdg, q}; }
  static Gate rz(int q, double th) { return {GateKind::Rz, q, -1, th}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, c, t}; }
  static Gate crz(int c, int t, double th) { return {GateKind::CRz, c, t, th}; }
};

namespace detail {

inline void check_target(int q, int num_qubits, const char* what) {
  if (q < 0 || q >= num_qubits) {
    throw std::out_of_range(std::string(what) + ": qubit index " +
                            std::to_string(q) + " out of range for " +
                            std::to_string(num_qubits) + " qubits");
  }
}

// Applies diag(1, e^{i*theta}) on one qubit: multiply the bit=1 half.
inline void phase_kernel(StateVector& st, std::uint64_t mask, cplx phase) {
  const std::uint64_t dim = st.dim();
  for (std::uint64_t block = 0; block < dim; block += mask << 1) {
    for (std::uint64_t i = block; i < block + mask; ++i) {
      st.amps[i | mask] *= phase;
    }
  }
}

}  // namespace detail

// In-place gate application. One- and two-qubit kinds are specialized
// bit-mask kernels; there is no generic matrix product on this path.
inline void apply_gate(StateVector& st, const Gate& g) {
  const int n = st.num_qubits;
  detail::check_target(g.q0, n, gate_name(g.kind));
  if (gate_arity(g.kind) == 2) {
    detail::check_target(g.q1, n, gate_name(g.kind));
    if (g.q0 == g.q1) {
      throw std::invalid_argument(std::string(gate_name(g.kind)) +
                                  ": control equals target");
    }
  }

  const std::uint64_t dim = st.dim();
  const std::uint64_t m0 = std::uint64_t{1} << (n - 1 - g.q0);
  constexpr double inv_sqrt2 = 0.7071067811865475244;

  switch (g.kind) {
    case GateKind::H: {
      for (std::uint64_t block = 0; block < dim; block += m0 << 1) {
        for (std::uint64_t i = block; i < block + m0; ++i) {
          const cplx a = st.amps[i];
          const cplx b = st.amps[i | m0];
          st.amps[i] = (a + b) * inv_sqrt2;
          st.amps[i | m0] = (a - b) * inv_sqrt2;
        }
      }
      break;
    }
    case GateKind::X: {
      for (std::uint64_t block = 0; block < dim; block += m0 << 1) {
        for (std::uint64_t i = block; i < block + m0; ++i) {
          std::swap(st.amps[i], st.amps[i | m0]);
        }
      }
      break;
    }
    case GateKind::Y: {
      for (std::uint64_t block = 0; block < dim; block += m0 << 1) {
        for (std::uint64_t i = block; i < block + m0; ++i) {
          const cplx a = st.amps[i];
          const cplx b = st.amps[i | m0];
          st.amps[i] = cplx{0, -1} * b;
          st.amps[i | m0] = cplx{0, 1} * a;
        }
      }
      break;
    }
    case GateKind::Z:
      detail::phase_kernel(st, m0, cplx{-1, 0});
      break;
    case GateKind::S:
      detail::phase_kernel(st, m0, cplx{0, 1});
      break;
    case GateKind::Sdg:
      detail::phase_kernel(st, m0, cplx{0, -1});
      break;
    case GateKind::T:
      detail::phase_kernel(st, m0, cplx{inv_sqrt2, inv_sqrt2});
      break;
    case GateKind::Tdg:
      detail::phase_kernel(st, m0, cplx{inv_sqrt2, -inv_sqrt2});
      break;
    case GateKind::Rz:
      detail::phase_kernel(st, m0, std::polar(1.0, g.theta));
      break;
    case GateKind::CNOT: {
      const std::uint64_t mt = std::uint64_t{1} << (n - 1 - g.q1);
      for (std::uint64_t i = 0; i < dim; ++i) {
        // visit each control=1 pair once via its target=0 member
        if ((i & m0) && !(i & mt)) {
          std::swap(st.amps[i], st.amps[i | mt]);
        }
      }
      break;
    }
    case GateKind::CRz: {
      const std::uint64_t mt = std::uint64_t{1} << (n - 1 - g.q1);
      const cplx phase = std::polar(1.0, g.theta);
      const std::uint64_t both = m0 | mt;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & both) == both) st.amps[i] *= phase;
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Circuits
// ---------------------------------------------------------------------------

// Ordered gate list plus the readout declaration. measured_qubits fixes the
// output bit order: the first listed qubit becomes the most significant bit
// of the outcome string.
struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  std::vector<int> measured_qubits;

  Circuit() = default;
  explicit Circuit(int n) : num_qubits(n) {
    if (n < 1 || n > kMaxQubits) {
      throw std::invalid_argument("Circuit: qubit count out of range");
    }
  }

  Circuit& add(const Gate& g) {
    gates.push_back(g);
    return *this;
  }

  // Measure all qubits in index order.
  void measure_all() {
    measured_qubits.resize(num_qubits);
    for (int q = 0; q < num_qubits; ++q) measured_qubits[q] = q;
  }

  void validate() const {
    if (num_qubits < 1) throw std::invalid_argument("Circuit: empty");
    std::vector<bool> seen(num_qubits, false);
    for (int q : measured_qubits) {
      detail::check_target(q, num_qubits, "measured_qubits");
      if (seen[q]) {
        throw std::invalid_argument("Circuit: duplicate measured qubit " +
                                    std::to_string(q));
      }
      seen[q] = true;
    }
  }
};

inline StateVector run_circuit(const Circuit& c) {
  c.validate();
  StateVector st = new_state(c.num_qubits);
  for (const Gate& g : c.gates) apply_gate(st, g);
  return st;
}

}  // namespace qnetsim
