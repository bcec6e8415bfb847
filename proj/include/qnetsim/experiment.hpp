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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnetsim/analysis.hpp"
#include "qnetsim/distribution.hpp"
#include "qnetsim/mitigation.hpp"
#include "qnetsim/noise.hpp"
#include "qnetsim/protocols.hpp"
#include "qnetsim/rng.hpp"
#include "qnetsim/simulator.hpp"
#include "qnetsim/stats.hpp"

namespace qnetsim {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { commnet, star, bilocal, triangle };
enum class MitigationMethod { none, pinv, lsq };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::commnet: return "commnet";
    case ExperimentKind::star: return "star";
    case ExperimentKind::bilocal: return "bilocal";
    case ExperimentKind::triangle: return "triangle";
  }
  throw std::logic_error("to_string: bad ExperimentKind");
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "commnet") return ExperimentKind::commnet;
  if (s == "star") return ExperimentKind::star;
  if (s == "bilocal") return ExperimentKind::bilocal;
  if (s == "triangle") return ExperimentKind::triangle;
  throw std::invalid_argument("unknown experiment: " + s);
}

inline std::string to_string(MitigationMethod m) {
  switch (m) {
    case MitigationMethod::none: return "none";
    case MitigationMethod::pinv: return "pinv";
    case MitigationMethod::lsq: return "lsq";
  }
  throw std::logic_error("to_string: bad MitigationMethod");
}

inline MitigationMethod mitigation_from_string(const std::string& s) {
  if (s == "none") return MitigationMethod::none;
  if (s == "pinv") return MitigationMethod::pinv;
  if (s == "lsq") return MitigationMethod::lsq;
  throw std::invalid_argument("unknown mitigation method: " + s);
}

// Shot counts used by the reference runs of each experiment size.
inline std::uint64_t paper_default_shots(ExperimentKind kind, int n) {
  switch (kind) {
    case ExperimentKind::commnet:
      switch (n) {
        case 2: return 24576;
        case 3: return 8192;
        case 4: return 8192;
        case 5: return 1024;
        case 6: return 128;
        case 7: return 32;
        case 8: return 32;
        case 9: return 16;
        case 10: return 8;
        default:
          throw std::invalid_argument(
              "paper_default_shots: commnet defaults cover n = 2..10");
      }
    case ExperimentKind::star:
      switch (n) {
        case 2:
        case 3: return 120000;
        case 4:
        case 5: return 200000;
        case 6: return 4900000;
        default:
          throw std::invalid_argument(
              "paper_default_shots: star defaults cover n = 2..6");
      }
    case ExperimentKind::bilocal:
      return 330000;
    case ExperimentKind::triangle:
      throw std::invalid_argument(
          "paper_default_shots: no published default for triangle; pass an "
          "explicit shot count");
  }
  throw std::logic_error("paper_default_shots: bad kind");
}

inline int measured_bits(ExperimentKind kind, int n) {
  switch (kind) {
    case ExperimentKind::commnet: return n;
    case ExperimentKind::star: return 2 * n;
    case ExperimentKind::bilocal: return 4;
    case ExperimentKind::triangle: return 6;
  }
  throw std::logic_error("measured_bits: bad kind");
}

inline std::uint64_t total_settings(ExperimentKind kind, int n) {
  switch (kind) {
    case ExperimentKind::commnet: return std::uint64_t{1} << (2 * n);
    case ExperimentKind::star: return std::uint64_t{1} << n;
    case ExperimentKind::bilocal: return 9;
    case ExperimentKind::triangle: return 1;
  }
  throw std::logic_error("total_settings: bad kind");
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::commnet;
  int n = 2;
  std::optional<std::uint64_t> shots;  // empty = paper default
  std::uint64_t seed = 0;
  std::optional<NoiseModel> noise;
  MitigationMethod mitigation = MitigationMethod::none;
  std::string calibration_source = "exact";  // "exact" or a JSON file path
  std::optional<std::uint64_t> settings_subset;
  bool exact_probs = false;

  void validate() const {
    const int bits = measured_bits(experiment, n);
    if (bits < 1 || bits > kMaxQubits) {
      throw std::invalid_argument("ExperimentConfig: " + std::to_string(bits) +
                                  " measured qubits outside the simulator cap");
    }
    if (experiment == ExperimentKind::commnet && n < 2) {
      throw std::invalid_argument("ExperimentConfig: commnet needs n >= 2");
    }
    if (experiment == ExperimentKind::star && n < 2) {
      throw std::invalid_argument("ExperimentConfig: star needs n >= 2");
    }
    if (noise) noise->validate();
    if (exact_probs && noise && noise->pauli.active()) {
      throw std::invalid_argument(
          "ExperimentConfig: exact-probability mode supports noiseless or "
          "readout-only noise models");
    }
    if (settings_subset) {
      if (experiment != ExperimentKind::commnet) {
        throw std::invalid_argument(
            "ExperimentConfig: settings subsetting applies to commnet only");
      }
      const std::uint64_t total = total_settings(experiment, n);
      if (*settings_subset == 0 || *settings_subset > total) {
        throw std::invalid_argument(
            "ExperimentConfig: subset size outside [1, " +
            std::to_string(total) + "]");
      }
    } else if (experiment == ExperimentKind::commnet && n > 8) {
      throw std::invalid_argument(
          "ExperimentConfig: full commnet grids beyond n = 8 are impractical "
          "(4^n circuits); pass settings_subset");
    }
    if (!exact_probs && !shots) {
      paper_default_shots(experiment, n);  // must resolve
    }
  }
};

struct SettingRecord {
  std::uint64_t setting = 0;
  Counts counts;             // sampled runs
  OutcomeDistribution probs; // exact runs
  bool exact = false;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::uint64_t shots_used = 0;  // 0 in exact mode
  std::vector<SettingRecord> settings;
  nlohmann::json derived;
  nlohmann::json meta;
};

// The circuit realizing one setting of the given experiment.
inline Circuit setting_circuit(ExperimentKind kind, int n,
                               std::uint64_t setting) {
  switch (kind) {
    case ExperimentKind::commnet: {
      CommNetSettings s;
      s.n = n;
      s.x = static_cast<std::uint32_t>(setting >> n);
      s.y = static_cast<std::uint32_t>(setting & ((std::uint64_t{1} << n) - 1));
      return build_commnet_circuit(s);
    }
    case ExperimentKind::star: {
      StarSettings s;
      s.n = n;
      s.xbar = static_cast<std::uint32_t>(setting);
      return build_star_circuit(s);
    }
    case ExperimentKind::bilocal: {
      BilocalSettings s;
      s.x = static_cast<int>(setting) / 3 + 1;
      s.z = static_cast<int>(setting) % 3 + 1;
      return build_bilocal_circuit(s);
    }
    case ExperimentKind::triangle:
      return build_triangle_circuit();
  }
  throw std::logic_error("setting_circuit: bad kind");
}

// The settings a run will execute: the full grid, or a seeded uniform
// subset without replacement, in ascending order.
inline std::vector<std::uint64_t> enumerate_settings(const ExperimentConfig& cfg) {
  const std::uint64_t total = total_settings(cfg.experiment, cfg.n);
  if (!cfg.settings_subset || *cfg.settings_subset == total) {
    std::vector<std::uint64_t> all(total);
    for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
    return all;
  }
  const std::uint64_t k = *cfg.settings_subset;
  Rng rng = make_rng(derive_seed(cfg.seed, 0x5e771465u));
  std::set<std::uint64_t> chosen;
  for (std::uint64_t i = total - k; i < total; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(0, i);
    const std::uint64_t j = pick(rng);
    if (!chosen.insert(j).second) chosen.insert(i);
  }
  return {chosen.begin(), chosen.end()};
}

namespace detail {

inline bool is_valid_distribution(const OutcomeDistribution& d) {
  for (double p : d.probs) {
    if (p < 0.0) return false;
  }
  return true;
}

inline std::optional<CalibrationMatrix> resolve_calibration(
    const ExperimentConfig& cfg) {
  if (cfg.mitigation == MitigationMethod::none) return std::nullopt;
  const int bits = measured_bits(cfg.experiment, cfg.n);
  if (cfg.calibration_source == "exact") {
    NoiseModel readout_part;
    if (cfg.noise) {
      readout_part.uniform_readout = cfg.noise->uniform_readout;
      readout_part.per_qubit_readout = cfg.noise->per_qubit_readout;
    }
    return build_calibration(bits, readout_part, CalibrationMode::exact());
  }
  std::ifstream in(cfg.calibration_source);
  if (!in) {
    throw std::runtime_error("cannot read calibration file: " +
                             cfg.calibration_source);
  }
  nlohmann::json j;
  in >> j;
  CalibrationMatrix cal = calibration_from_json(j);
  if (cal.n != bits) {
    throw std::invalid_argument(
        "calibration is for " + std::to_string(cal.n) + " qubits, experiment "
        "measures " + std::to_string(bits));
  }
  return cal;
}

// Per-setting distribution fed into the analysis: measured frequencies (or
// exact probabilities), mitigated when configured. pinv output is a
// quasi-distribution and may carry negative entries.
inline OutcomeDistribution analysis_distribution(
    const SettingRecord& rec, const ExperimentConfig& cfg,
    const std::optional<CalibrationMatrix>& cal) {
  OutcomeDistribution d = rec.exact ? rec.probs : to_distribution(rec.counts);
  switch (cfg.mitigation) {
    case MitigationMethod::none:
      return d;
    case MitigationMethod::pinv: {
      const QuasiDistribution q = mitigate_pinv(d, *cal);
      OutcomeDistribution out;
      out.num_bits = q.num_bits;
      out.probs = q.values;
      return out;
    }
    case MitigationMethod::lsq:
      return mitigate_lsq(d, *cal);
  }
  throw std::logic_error("analysis_distribution: bad method");
}

inline nlohmann::json derive_commnet(const ExperimentConfig& cfg,
                                     std::uint64_t shots_used,
                                     const std::vector<SettingRecord>& recs,
                                     const std::optional<CalibrationMatrix>& cal) {
  const bool subset = cfg.settings_subset.has_value() &&
                      *cfg.settings_subset != total_settings(cfg.experiment, cfg.n);
  std::vector<SettingDist> data;
  std::vector<double> raw_winning;
  data.reserve(recs.size());
  raw_winning.reserve(recs.size());
  const std::uint64_t ymask = (std::uint64_t{1} << cfg.n) - 1;
  for (const SettingRecord& r : recs) {
    data.push_back({r.setting, analysis_distribution(r, cfg, cal)});
    const OutcomeDistribution raw =
        r.exact ? r.probs : to_distribution(r.counts);
    const std::uint32_t x = static_cast<std::uint32_t>(r.setting >> cfg.n);
    const std::uint32_t y = static_cast<std::uint32_t>(r.setting & ymask);
    raw_winning.push_back(raw.probs[commnet_winning_outcome(cfg.n, x, y)]);
  }
  const double p_win = winning_probability(cfg.n, data, subset);
  const double p_clamped = std::min(1.0, std::max(0.0, p_win));

  nlohmann::json out;
  out["p_win"] = p_win;
  out["certified_entangled_count"] = certified_entangled_count(p_clamped, cfg.n);
  out["subset"] = subset;
  if (shots_used > 0) {
    out["sigma_pwin"] = sigma_pwin(raw_winning, shots_used, cfg.n, subset);
  } else {
    out["sigma_pwin"] = nullptr;
  }
  return out;
}

inline nlohmann::json derive_star(const ExperimentConfig& cfg,
                                  std::uint64_t shots_used,
                                  const std::vector<SettingRecord>& recs,
                                  const std::optional<CalibrationMatrix>& cal) {
  std::vector<OutcomeDistribution> dists;
  std::vector<OutcomeDistribution> raw;
  dists.reserve(recs.size());
  raw.reserve(recs.size());
  for (const SettingRecord& r : recs) {
    dists.push_back(analysis_distribution(r, cfg, cal));
    raw.push_back(r.exact ? r.probs : to_distribution(r.counts));
  }
  const StarStatistics st = star_statistics(cfg.n, dists);

  nlohmann::json out;
  out["S"] = st.S;
  out["I"] = st.I;

  bool kl_ok = true;
  std::vector<OutcomeDistribution> branch;
  branch.reserve(dists.size());
  for (const OutcomeDistribution& d : dists) {
    if (!is_valid_distribution(d)) {
      kl_ok = false;
      break;
    }
    branch.push_back(branch_marginal(d, cfg.n));
  }
  if (kl_ok) {
    out["kl_source_independence"] = source_independence_kl(branch);
  } else {
    out["kl_source_independence"] = nullptr;
  }

  if (shots_used > 0) {
    const StarStatistics raw_st = star_statistics(cfg.n, raw);
    const CovarianceMatrixI cov =
        covariance_I(raw, star_generators(cfg.n), shots_used);
    try {
      out["sigma_S"] = sigma_SN(raw_st, cov, cfg.n);
      out["sigma_method"] = "analytic";
    } catch (const std::domain_error&) {
      std::vector<Counts> counts;
      counts.reserve(recs.size());
      for (const SettingRecord& r : recs) counts.push_back(r.counts);
      const int n = cfg.n;
      out["sigma_S"] = bootstrap_sigma(
          counts,
          [n](const std::vector<Counts>& cs) {
            std::vector<OutcomeDistribution> ds;
            ds.reserve(cs.size());
            for (const Counts& c : cs) ds.push_back(to_distribution(c));
            return star_statistics(n, ds).S;
          },
          1000, derive_seed(cfg.seed, 0xb007u));
      out["sigma_method"] = "bootstrap";
    }
  } else {
    out["sigma_S"] = nullptr;
    out["sigma_method"] = nullptr;
  }
  return out;
}

inline nlohmann::json derive_bilocal(const ExperimentConfig& cfg,
                                     std::uint64_t shots_used,
                                     const std::vector<SettingRecord>& recs,
                                     const std::optional<CalibrationMatrix>& cal) {
  std::vector<OutcomeDistribution> dists;
  dists.reserve(recs.size());
  for (const SettingRecord& r : recs) {
    dists.push_back(analysis_distribution(r, cfg, cal));
  }
  const BilocalStatistics st = bilocal_statistics(dists);

  nlohmann::json out;
  out["B"] = st.B;
  out["classical_bound"] = st.classical_bound;
  out["p_b"] = st.p_b;
  out["degenerate_pb"] = st.degenerate_pb;
  if (shots_used > 0) {
    std::vector<Counts> counts;
    counts.reserve(recs.size());
    for (const SettingRecord& r : recs) counts.push_back(r.counts);
    const ExperimentConfig cfg_copy = cfg;
    const std::optional<CalibrationMatrix> cal_copy = cal;
    out["sigma_B"] = bootstrap_sigma(
        counts,
        [&cfg_copy, &cal_copy](const std::vector<Counts>& cs) {
          std::vector<OutcomeDistribution> ds;
          ds.reserve(cs.size());
          for (std::size_t i = 0; i < cs.size(); ++i) {
            SettingRecord r;
            r.setting = i;
            r.counts = cs[i];
            ds.push_back(analysis_distribution(r, cfg_copy, cal_copy));
          }
          return bilocal_statistics(ds).B;
        },
        1000, derive_seed(cfg.seed, 0xb007u));
  } else {
    out["sigma_B"] = nullptr;
  }
  return out;
}

inline nlohmann::json derive_triangle(const ExperimentConfig& cfg,
                                      const std::vector<SettingRecord>& recs,
                                      const std::optional<CalibrationMatrix>& cal) {
  const OutcomeDistribution d = analysis_distribution(recs.at(0), cfg, cal);
  nlohmann::json out;
  nlohmann::json hist = nlohmann::json::object();
  for (std::uint64_t i = 0; i < d.size(); ++i) {
    if (d.probs[i] != 0.0) hist[outcome_to_string(i, d.num_bits)] = d.probs[i];
  }
  out["distribution"] = hist;
  if (is_valid_distribution(d)) {
    out["kl_vs_theory"] = kl_divergence(d, triangle_theory());
  } else {
    out["kl_vs_theory"] = nullptr;
  }
  return out;
}

}  // namespace detail

// Derived statistics recomputed from a record's stored per-setting data;
// run_experiment stores exactly this object, so persisted derived values can
// be checked bit-for-bit.
inline nlohmann::json compute_derived(const ExperimentConfig& cfg,
                                      std::uint64_t shots_used,
                                      const std::vector<SettingRecord>& recs) {
  const std::optional<CalibrationMatrix> cal = detail::resolve_calibration(cfg);
  switch (cfg.experiment) {
    case ExperimentKind::commnet:
      return detail::derive_commnet(cfg, shots_used, recs, cal);
    case ExperimentKind::star:
      return detail::derive_star(cfg, shots_used, recs, cal);
    case ExperimentKind::bilocal:
      return detail::derive_bilocal(cfg, shots_used, recs, cal);
    case ExperimentKind::triangle:
      return detail::derive_triangle(cfg, recs, cal);
  }
  throw std::logic_error("compute_derived: bad kind");
}

inline ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentRecord rec;
  rec.config = cfg;
  rec.shots_used = cfg.exact_probs
                       ? 0
                       : (cfg.shots ? *cfg.shots
                                    : paper_default_shots(cfg.experiment, cfg.n));

  const std::vector<std::uint64_t> settings = enumerate_settings(cfg);
  rec.settings.reserve(settings.size());
  for (std::uint64_t s : settings) {
    const Circuit c = setting_circuit(cfg.experiment, cfg.n, s);
    std::optional<std::uint64_t> pauli_seed;
    if (cfg.noise && cfg.noise->pauli.active()) {
      pauli_seed = derive_seed(cfg.seed, s, 1);
    }
    const OutcomeDistribution dist = exact_distribution(c, cfg.noise, pauli_seed);

    SettingRecord sr;
    sr.setting = s;
    sr.exact = cfg.exact_probs;
    if (cfg.exact_probs) {
      sr.probs = dist;
    } else {
      sr.counts = sample_counts(dist, rec.shots_used, derive_seed(cfg.seed, s, 2));
    }
    rec.settings.push_back(std::move(sr));
  }

  rec.derived = compute_derived(cfg, rec.shots_used, rec.settings);

  const auto t1 = std::chrono::steady_clock::now();
  rec.meta = {{"version", kVersion},
              {"seed", cfg.seed},
              {"wall_time_s",
               std::chrono::duration<double>(t1 - t0).count()}};
  return rec;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = to_string(cfg.experiment);
  j["n"] = cfg.n;
  j["shots"] = cfg.shots ? nlohmann::json(*cfg.shots) : nlohmann::json(nullptr);
  j["seed"] = cfg.seed;
  j["noise"] = cfg.noise ? noise_to_json(*cfg.noise) : nlohmann::json(nullptr);
  j["mitigation"] = to_string(cfg.mitigation);
  j["calibration"] = cfg.calibration_source;
  j["settings_subset"] = cfg.settings_subset
                             ? nlohmann::json(*cfg.settings_subset)
                             : nlohmann::json(nullptr);
  j["exact_probs"] = cfg.exact_probs;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.experiment = experiment_kind_from_string(j.at("experiment").get<std::string>());
  cfg.n = j.at("n").get<int>();
  if (!j.at("shots").is_null()) cfg.shots = j.at("shots").get<std::uint64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("noise").is_null()) cfg.noise = noise_from_json(j.at("noise"));
  cfg.mitigation = mitigation_from_string(j.at("mitigation").get<std::string>());
  cfg.calibration_source = j.at("calibration").get<std::string>();
  if (!j.at("settings_subset").is_null()) {
    cfg.settings_subset = j.at("settings_subset").get<std::uint64_t>();
  }
  cfg.exact_probs = j.at("exact_probs").get<bool>();
  return cfg;
}

inline nlohmann::json record_to_json(const ExperimentRecord& rec) {
  nlohmann::json j;
  j["config"] = config_to_json(rec.config);
  j["config"]["shots_used"] = rec.shots_used;

  nlohmann::json settings = nlohmann::json::array();
  for (const SettingRecord& sr : rec.settings) {
    nlohmann::json e;
    e["setting"] = sr.setting;
    if (sr.exact) {
      nlohmann::json probs = nlohmann::json::object();
      for (std::uint64_t i = 0; i < sr.probs.size(); ++i) {
        if (sr.probs.probs[i] != 0.0) {
          probs[outcome_to_string(i, sr.probs.num_bits)] = sr.probs.probs[i];
        }
      }
      e["probs"] = probs;
      e["num_bits"] = sr.probs.num_bits;
    } else {
      nlohmann::json counts = nlohmann::json::object();
      for (std::uint64_t i = 0; i < sr.counts.size(); ++i) {
        if (sr.counts.counts[i] != 0) {
          counts[outcome_to_string(i, sr.counts.num_bits)] = sr.counts.counts[i];
        }
      }
      e["counts"] = counts;
      e["num_bits"] = sr.counts.num_bits;
    }
    settings.push_back(std::move(e));
  }
  j["settings"] = std::move(settings);
  j["derived"] = rec.derived;
  j["meta"] = rec.meta;
  return j;
}

inline ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord rec;
  rec.config = config_from_json(j.at("config"));
  rec.shots_used = j.at("config").at("shots_used").get<std::uint64_t>();
  for (const nlohmann::json& e : j.at("settings")) {
    SettingRecord sr;
    sr.setting = e.at("setting").get<std::uint64_t>();
    const int bits = e.at("num_bits").get<int>();
    if (e.contains("probs")) {
      sr.exact = true;
      sr.probs = zero_distribution(bits);
      for (const auto& [key, val] : e.at("probs").items()) {
        sr.probs.probs[outcome_from_string(key)] = val.get<double>();
      }
    } else {
      sr.exact = false;
      sr.counts.num_bits = bits;
      sr.counts.shots = rec.shots_used;
      sr.counts.counts.assign(std::uint64_t{1} << bits, 0);
      for (const auto& [key, val] : e.at("counts").items()) {
        sr.counts.counts[outcome_from_string(key)] = val.get<std::uint64_t>();
      }
    }
    rec.settings.push_back(std::move(sr));
  }
  rec.derived = j.at("derived");
  rec.meta = j.at("meta");
  return rec;
}

inline void save_record(const ExperimentRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write record: " + path);
  out << record_to_json(rec).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline ExperimentRecord load_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read record: " + path);
  nlohmann::json j;
  in >> j;
  return record_from_json(j);
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace detail

// One derived-statistics row per record (all records must share a kind).
inline std::string export_csv(const std::vector<ExperimentRecord>& records,
                              const std::string& out_path) {
  if (records.empty()) throw std::invalid_argument("export_csv: no records");
  const ExperimentKind kind = records.front().config.experiment;
  for (const ExperimentRecord& r : records) {
    if (r.config.experiment != kind) {
      throw std::invalid_argument("export_csv: mixed experiment kinds");
    }
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write: " + out_path);

  std::vector<std::string> cols;
  switch (kind) {
    case ExperimentKind::commnet:
      cols = {"p_win", "sigma_pwin", "certified_entangled_count", "subset"};
      break;
    case ExperimentKind::star:
      cols = {"S", "sigma_S", "sigma_method", "kl_source_independence"};
      break;
    case ExperimentKind::bilocal:
      cols = {"B", "sigma_B", "classical_bound", "degenerate_pb"};
      break;
    case ExperimentKind::triangle:
      cols = {"kl_vs_theory"};
      break;
  }
  out << "experiment,n,shots";
  for (const std::string& c : cols) out << "," << c;
  out << "\n";
  for (const ExperimentRecord& r : records) {
    out << to_string(r.config.experiment) << "," << r.config.n << ","
        << r.shots_used;
    for (const std::string& c : cols) {
      out << "," << detail::csv_cell(r.derived.value(c, nlohmann::json()));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + out_path);
  return out_path;
}

// Per-outcome histogram rows (setting, outcome, probability) for external
// plotting.
inline std::string export_plotdata(const ExperimentRecord& rec,
                                   const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write: " + out_path);
  out << "setting,outcome,probability\n";
  out.precision(17);
  for (const SettingRecord& sr : rec.settings) {
    const OutcomeDistribution d =
        sr.exact ? sr.probs : to_distribution(sr.counts);
    for (std::uint64_t i = 0; i < d.size(); ++i) {
      out << sr.setting << "," << outcome_to_string(i, d.num_bits) << ","
          << d.probs[i] << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + out_path);
  return out_path;
}

}  // namespace qnetsim
