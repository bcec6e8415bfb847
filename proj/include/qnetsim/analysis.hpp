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

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnetsim/distribution.hpp"
#include "qnetsim/protocols.hpp"

namespace qnetsim {

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

// ---------------------------------------------------------------------------
// Communication network figures of merit
// ---------------------------------------------------------------------------

// The unique decoder output that counts as a win for inputs (x, y):
// b_1 = XOR of all x_k, and b_k = y_k XOR y_1 for k >= 2.
inline std::uint32_t commnet_winning_outcome(int n, std::uint32_t x,
                                             std::uint32_t y) {
  std::uint32_t b = static_cast<std::uint32_t>(parity(x));
  const bool y1 = setting_bit(y, 0, n);
  for (int k = 1; k < n; ++k) {
    b = (b << 1) | (static_cast<std::uint32_t>(setting_bit(y, k, n) ^ y1));
  }
  return b;
}

// Canonical setting index used to key commnet runs: (x << n) | y.
inline std::uint64_t commnet_setting_index(int n, std::uint32_t x,
                                           std::uint32_t y) {
  return (static_cast<std::uint64_t>(x) << n) | y;
}

struct SettingDist {
  std::uint64_t setting = 0;
  OutcomeDistribution dist;
};

// Average probability of the winning outcome over the provided settings.
// Requires the full 4^n grid unless the caller explicitly flags the data as
// a uniform random subset.
inline double winning_probability(int n, const std::vector<SettingDist>& data,
                                  bool allow_subset = false) {
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  if (!allow_subset && data.size() != total) {
    throw std::invalid_argument(
        "winning_probability: expected all " + std::to_string(total) +
        " settings, got " + std::to_string(data.size()) +
        " (pass allow_subset for flagged subsets)");
  }
  if (data.empty()) {
    throw std::invalid_argument("winning_probability: no settings");
  }
  double acc = 0.0;
  for (const SettingDist& sd : data) {
    if (sd.setting >= total) {
      throw std::invalid_argument("winning_probability: setting out of range");
    }
    const std::uint32_t x = static_cast<std::uint32_t>(sd.setting >> n);
    const std::uint32_t y =
        static_cast<std::uint32_t>(sd.setting & ((1u << n) - 1));
    acc += sd.dist.probs[commnet_winning_outcome(n, x, y)];
  }
  return acc / static_cast<double>(data.size());
}

// Lower bound on the number of entangled elements of the decoding basis
// implied by a winning probability p: max(0, ceil((2p - 1) * 2^n)).
inline long certified_entangled_count(double p_win, int n) {
  if (!(p_win >= 0.0 && p_win <= 1.0)) {
    throw std::invalid_argument("certified_entangled_count: p outside [0,1]");
  }
  const double raw = (2.0 * p_win - 1.0) * std::ldexp(1.0, n);
  const double c = std::ceil(raw);
  return c < 0.0 ? 0 : static_cast<long>(c);
}

// ---------------------------------------------------------------------------
// Star network inequality
// ---------------------------------------------------------------------------

// One correlator recipe: f picks the central-outcome bit combination, g the
// input combination. f_j(b) = parity(b & f_mask) ^ f_const,
// g_j(x) = parity(x & g_mask). Masks are MSB-first like outcome strings.
struct GeneratorSet {
  struct Entry {
    std::uint32_t f_mask = 0;
    int f_const = 0;
    std::uint32_t g_mask = 0;
  };
  int n = 0;
  std::vector<Entry> entries;
};

// The 2^{n-1} correlator recipes: one per even-cardinality subset of the
// branch set {1..n}, ordered by cardinality then ascending mask value. The
// subset is the g-mask; the f-mask is bit 1 plus the subset's bits above 1.
// f_const is 1 for every nonempty subset except the full set for n >= 4,
// which carries no constant; at n = 2 the full set keeps its constant.
inline GeneratorSet star_generators(int n) {
  if (n < 2) throw std::invalid_argument("star_generators: n < 2");
  GeneratorSet gs;
  gs.n = n;

  // Enumerate even-cardinality subsets of {1..n} as MSB-first masks, in
  // (cardinality, mask value) order. Element e occupies bit (n - e).
  std::vector<std::uint32_t> subsets;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  for (int card = 0; card <= n; card += 2) {
    for (std::uint32_t m = 0; m <= full; ++m) {
      if (std::popcount(m) == card) subsets.push_back(m);
    }
  }

  const std::uint32_t bit1 = 1u << (n - 1);
  for (std::uint32_t sub : subsets) {
    GeneratorSet::Entry e;
    e.g_mask = sub;
    e.f_mask = bit1 | (sub & ~bit1);
    if (sub == 0) {
      e.f_const = 0;
    } else if (sub == full) {
      e.f_const = (n == 2) ? 1 : 0;
    } else {
      e.f_const = 1;
    }
    gs.entries.push_back(e);
  }
  return gs;
}

struct StarStatistics {
  std::vector<double> I;
  double S = 0.0;
};

// dists[xbar] is the joint outcome distribution over (a_1..a_n, b_1..b_n)
// for input mask xbar; all 2^n settings required.
inline StarStatistics star_statistics(int n,
                                      const std::vector<OutcomeDistribution>& dists) {
  const std::uint64_t nsettings = std::uint64_t{1} << n;
  if (dists.size() != nsettings) {
    throw std::invalid_argument("star_statistics: need all " +
                                std::to_string(nsettings) + " settings");
  }
  const GeneratorSet gs = star_generators(n);
  const std::uint64_t outcomes = std::uint64_t{1} << (2 * n);
  const std::uint64_t bmask = nsettings - 1;

  StarStatistics st;
  st.I.reserve(gs.entries.size());
  for (const GeneratorSet::Entry& e : gs.entries) {
    double ij = 0.0;
    for (std::uint64_t xb = 0; xb < nsettings; ++xb) {
      const OutcomeDistribution& d = dists[xb];
      if (static_cast<std::uint64_t>(d.size()) != outcomes) {
        throw std::invalid_argument(
            "star_statistics: distribution width mismatch");
      }
      double corr = 0.0;
      for (std::uint64_t idx = 0; idx < outcomes; ++idx) {
        const std::uint64_t a = idx >> n;
        const std::uint64_t b = idx & bmask;
        const int sign = parity(b & e.f_mask) ^ e.f_const ^ parity(a);
        corr += sign ? -d.probs[idx] : d.probs[idx];
      }
      ij += parity(xb & e.g_mask) ? -corr : corr;
    }
    st.I.push_back(ij / static_cast<double>(nsettings));
  }

  double s = 0.0;
  for (double ij : st.I) s += std::pow(std::abs(ij), 1.0 / n);
  st.S = s / std::ldexp(1.0, n - 2);
  return st;
}

// ---------------------------------------------------------------------------
// Bilocal inequality
// ---------------------------------------------------------------------------

// Tetrahedron vertex reported by each central outcome b = 1..4. The
// assignment matches the marginal directions realized by the measurement
// sequence of build_bilocal_circuit; permuting it away from the physical
// outcomes lowers the noiseless figure of merit below its quantum value.
inline constexpr std::array<std::array<int, 3>, 4> bilocal_vertices = {{
    {{-1, -1, +1}},
    {{+1, +1, +1}},
    {{-1, +1, -1}},
    {{+1, -1, -1}},
}};

inline double bilocal_classical_bound() {
  return 12.0 * std::sqrt(3.0) + 2.0 * std::sqrt(15.0);
}

struct BilocalStatistics {
  std::array<double, 4> p_b{};
  // [b][x-1] and [b][x-1][z-1]; b is the 0-based outcome index.
  std::array<std::array<double, 3>, 4> E_A{};
  std::array<std::array<double, 3>, 4> E_C{};
  std::array<std::array<std::array<double, 3>, 3>, 4> E_AC{};
  double B = 0.0;
  double classical_bound = 0.0;
  bool degenerate_pb = false;  // some conditional had zero support
};

// dists[(x-1)*3 + (z-1)] is the outcome distribution over the four bits
// (a, k1, k2, c); all 9 settings required.
inline BilocalStatistics bilocal_statistics(
    const std::vector<OutcomeDistribution>& dists) {
  if (dists.size() != 9) {
    throw std::invalid_argument("bilocal_statistics: need all 9 settings");
  }
  for (const OutcomeDistribution& d : dists) {
    if (d.num_bits != 4) {
      throw std::invalid_argument("bilocal_statistics: expected 4-bit outcomes");
    }
  }
  auto b_of = [](std::uint64_t idx) {
    return static_cast<int>(((idx >> 2) & 1) * 2 + ((idx >> 1) & 1));
  };
  auto sign_a = [](std::uint64_t idx) { return (idx >> 3) & 1 ? -1.0 : 1.0; };
  auto sign_c = [](std::uint64_t idx) { return idx & 1 ? -1.0 : 1.0; };

  BilocalStatistics out;
  out.classical_bound = bilocal_classical_bound();

  // Central-outcome marginal, averaged over settings.
  for (const OutcomeDistribution& d : dists) {
    for (std::uint64_t idx = 0; idx < 16; ++idx) {
      out.p_b[b_of(idx)] += d.probs[idx];
    }
  }
  for (double& p : out.p_b) p /= 9.0;

  // Conditional correlators per setting, then setting averages.
  auto conditional = [&](int s, int b, bool weight_a, bool weight_c) {
    const OutcomeDistribution& d = dists[static_cast<std::size_t>(s)];
    double mass = 0.0, acc = 0.0;
    for (std::uint64_t idx = 0; idx < 16; ++idx) {
      if (b_of(idx) != b) continue;
      mass += d.probs[idx];
      double w = d.probs[idx];
      if (weight_a) w *= sign_a(idx);
      if (weight_c) w *= sign_c(idx);
      acc += w;
    }
    if (mass <= 0.0) {
      out.degenerate_pb = true;
      return 0.0;
    }
    return acc / mass;
  };

  for (int b = 0; b < 4; ++b) {
    for (int x = 1; x <= 3; ++x) {
      double e = 0.0;
      for (int z = 1; z <= 3; ++z) e += conditional((x - 1) * 3 + (z - 1), b, true, false);
      out.E_A[b][x - 1] = e / 3.0;
    }
    for (int z = 1; z <= 3; ++z) {
      double e = 0.0;
      for (int x = 1; x <= 3; ++x) e += conditional((x - 1) * 3 + (z - 1), b, false, true);
      out.E_C[b][z - 1] = e / 3.0;
    }
    for (int x = 1; x <= 3; ++x) {
      for (int z = 1; z <= 3; ++z) {
        out.E_AC[b][x - 1][z - 1] = conditional((x - 1) * 3 + (z - 1), b, true, true);
      }
    }
  }

  // Assemble the inequality value; square roots of nonnegative quantities,
  // clamped against floating dust.
  auto term = [&](double v) { return std::sqrt(v > 0.0 ? v : 0.0); };
  double B = 0.0;
  for (int x = 1; x <= 3; ++x) {
    for (int b = 0; b < 4; ++b) {
      const double m = bilocal_vertices[b][x - 1];
      B += term(out.p_b[b] * (1.0 - m * out.E_A[b][x - 1]));
    }
  }
  for (int z = 1; z <= 3; ++z) {
    for (int b = 0; b < 4; ++b) {
      const double m = bilocal_vertices[b][z - 1];
      B += term(out.p_b[b] * (1.0 + m * out.E_C[b][z - 1]));
    }
  }
  for (int x = 1; x <= 3; ++x) {
    for (int z = 1; z <= 3; ++z) {
      if (x == z) continue;
      for (int b = 0; b < 4; ++b) {
        const double mm =
            bilocal_vertices[b][x - 1] * bilocal_vertices[b][z - 1];
        B += term(out.p_b[b] * (1.0 - mm * out.E_AC[b][x - 1][z - 1]));
      }
    }
  }
  out.B = B;
  return out;
}

// ---------------------------------------------------------------------------
// Triangle network
// ---------------------------------------------------------------------------

// Closed-form noiseless distribution over the three node outcomes, encoded
// as the 6-bit string (a-1, b-1, c-1). All-equal triples carry 25/256,
// exactly-two-equal 1/256, all-distinct 5/256.
inline OutcomeDistribution triangle_theory() {
  OutcomeDistribution d = zero_distribution(6);
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const std::uint64_t a = idx >> 4;
    const std::uint64_t b = (idx >> 2) & 3;
    const std::uint64_t c = idx & 3;
    double p;
    if (a == b && b == c) {
      p = 25.0 / 256.0;
    } else if (a == b || b == c || a == c) {
      p = 1.0 / 256.0;
    } else {
      p = 5.0 / 256.0;
    }
    d.probs[idx] = p;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Relative entropy diagnostics
// ---------------------------------------------------------------------------

// KL divergence in nats: sum p ln(p/q) with 0 ln 0 = 0. The support of q
// must cover the support of p.
inline double kl_divergence(const OutcomeDistribution& p,
                            const OutcomeDistribution& q) {
  if (p.num_bits != q.num_bits) {
    throw std::invalid_argument("kl_divergence: dimension mismatch");
  }
  double sum = 0.0;
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    if (p.probs[i] <= 0.0) continue;
    if (q.probs[i] <= 0.0) {
      throw std::domain_error(
          "kl_divergence: q has zero mass on outcome " +
          outcome_to_string(i, p.num_bits) + " where p does not");
    }
    sum += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
  }
  return sum;
}

// Product of the single-bit marginals of a joint distribution.
inline OutcomeDistribution product_of_marginals(const OutcomeDistribution& p) {
  std::vector<double> marg1(static_cast<std::size_t>(p.num_bits), 0.0);
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    for (int b = 0; b < p.num_bits; ++b) {
      if (i >> (p.num_bits - 1 - b) & 1) marg1[b] += p.probs[i];
    }
  }
  OutcomeDistribution q = zero_distribution(p.num_bits);
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    double v = 1.0;
    for (int b = 0; b < p.num_bits; ++b) {
      const bool one = i >> (p.num_bits - 1 - b) & 1;
      v *= one ? marg1[b] : 1.0 - marg1[b];
    }
    q.probs[i] = v;
  }
  return q;
}

// Branch-outcome marginal p(a | xbar) of a star distribution over
// (a_1..a_n, b_1..b_n).
inline OutcomeDistribution branch_marginal(const OutcomeDistribution& joint,
                                           int n) {
  if (joint.num_bits != 2 * n) {
    throw std::invalid_argument("branch_marginal: width mismatch");
  }
  OutcomeDistribution out = zero_distribution(n);
  const std::uint64_t central = std::uint64_t{1} << n;
  for (std::uint64_t a = 0; a < out.size(); ++a) {
    double s = 0.0;
    for (std::uint64_t b = 0; b < central; ++b) {
      s += joint.probs[(a << n) | b];
    }
    out.probs[a] = s;
  }
  return out;
}

// Worst case over settings of KL(p(a|xbar) || prod_i p(a_i|xbar)): zero
// exactly when branch outcomes are independent for every input.
inline double source_independence_kl(
    const std::vector<OutcomeDistribution>& branch_dists) {
  if (branch_dists.empty()) {
    throw std::invalid_argument("source_independence_kl: no settings");
  }
  double worst = 0.0;
  for (const OutcomeDistribution& p : branch_dists) {
    const double kl = kl_divergence(p, product_of_marginals(p));
    if (kl > worst) worst = kl;
  }
  return worst;
}

}  // namespace qnetsim
