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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnetsim/qnetsim.hpp"

namespace {

qnetsim::NoiseModel load_noise(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read noise file: " + path);
  nlohmann::json j;
  in >> j;
  return qnetsim::noise_from_json(j);
}

std::string headline(const qnetsim::ExperimentRecord& rec) {
  const nlohmann::json& d = rec.derived;
  switch (rec.config.experiment) {
    case qnetsim::ExperimentKind::commnet:
      return "p_win = " + d.at("p_win").dump() + ", certified entangled = " +
             d.at("certified_entangled_count").dump();
    case qnetsim::ExperimentKind::star:
      return "S = " + d.at("S").dump();
    case qnetsim::ExperimentKind::bilocal:
      return "B = " + d.at("B").dump() + " (classical bound " +
             d.at("classical_bound").dump() + ")";
    case qnetsim::ExperimentKind::triangle:
      return "KL vs theory = " + d.at("kl_vs_theory").dump();
  }
  return "";
}

int run_main(const std::string& experiment, int n, const std::string& shots,
             std::uint64_t seed, const std::string& noise,
             const std::string& mitigation, const std::string& calibration,
             std::optional<std::uint64_t> subset, bool exact_probs,
             const std::string& out) {
  qnetsim::ExperimentConfig cfg;
  cfg.experiment = qnetsim::experiment_kind_from_string(experiment);
  cfg.n = n;
  if (shots != "paper-default") cfg.shots = std::stoull(shots);
  cfg.seed = seed;
  if (noise != "none") cfg.noise = load_noise(noise);
  cfg.mitigation = qnetsim::mitigation_from_string(mitigation);
  cfg.calibration_source = calibration;
  if (subset) cfg.settings_subset = subset;
  cfg.exact_probs = exact_probs;

  const qnetsim::ExperimentRecord rec = qnetsim::run_experiment(cfg);
  qnetsim::save_record(rec, out);
  std::cout << "wrote " << out << " (" << rec.settings.size()
            << " settings): " << headline(rec) << "\n";
  return 0;
}

int calibrate_main(int n, const std::string& noise, const std::string& mode,
                   std::uint64_t shots, std::uint64_t seed,
                   const std::string& out) {
  qnetsim::CalibrationMode m = qnetsim::CalibrationMode::exact();
  if (mode == "sampled") {
    m = qnetsim::CalibrationMode::sampled_mode(shots, seed);
  } else if (mode != "exact") {
    throw std::invalid_argument("unknown calibration mode: " + mode);
  }
  const qnetsim::CalibrationMatrix cal =
      qnetsim::build_calibration(n, load_noise(noise), m);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write: " + out);
  os << qnetsim::calibration_to_json(cal).dump(2) << "\n";
  if (!os) throw std::runtime_error("write failed: " + out);
  std::cout << "wrote " << out << " (" << mode << ", " << n << " qubits)\n";
  return 0;
}

int export_main(const std::vector<std::string>& records,
                const std::string& format, std::string out) {
  if (records.empty()) throw std::invalid_argument("no --record given");
  if (format == "csv") {
    std::vector<qnetsim::ExperimentRecord> recs;
    recs.reserve(records.size());
    for (const std::string& p : records) recs.push_back(qnetsim::load_record(p));
    if (out.empty()) out = records.front() + ".csv";
    std::cout << "wrote " << qnetsim::export_csv(recs, out) << "\n";
    return 0;
  }
  if (format == "plotdata") {
    if (records.size() != 1) {
      throw std::invalid_argument("plotdata exports exactly one record");
    }
    if (out.empty()) out = records.front() + ".plot.csv";
    std::cout << "wrote "
              << qnetsim::export_plotdata(qnetsim::load_record(records.front()),
                                          out)
              << "\n";
    return 0;
  }
  throw std::invalid_argument("unknown format: " + format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum network correlation experiments on a state-vector "
               "simulator"};
  app.require_subcommand(1);

  // run
  std::string experiment, shots = "paper-default", noise = "none";
  std::string mitigation = "none", calibration = "exact", out;
  int n = 2;
  std::uint64_t seed = 0;
  std::uint64_t subset_val = 0;
  bool exact_probs = false;
  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--experiment", experiment, "commnet|star|bilocal|triangle")
      ->required();
  run->add_option("--n", n, "Nodes (commnet) or branches (star)");
  run->add_option("--shots", shots, "Shot count or 'paper-default'");
  run->add_option("--seed", seed, "Base RNG seed");
  run->add_option("--noise", noise, "Noise JSON path or 'none'");
  run->add_option("--mitigation", mitigation, "none|pinv|lsq");
  run->add_option("--calibration", calibration,
                  "'exact' or calibration JSON path (with --mitigation)");
  CLI::Option* subset_opt = run->add_option(
      "--settings-subset", subset_val, "Random subset size (commnet)");
  run->add_flag("--exact-probs", exact_probs,
                "Record exact probabilities instead of sampling");
  run->add_option("--out", out, "Record output path")->required();

  // calibrate
  std::string cal_noise, cal_mode = "exact", cal_out;
  int cal_n = 2;
  std::uint64_t cal_shots = 0, cal_seed = 0;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Build a calibration matrix");
  calibrate->add_option("--n", cal_n, "Qubit count")->required();
  calibrate->add_option("--noise", cal_noise, "Noise JSON path")->required();
  calibrate->add_option("--mode", cal_mode, "exact|sampled");
  calibrate->add_option("--shots", cal_shots, "Shots per basis state (sampled)");
  calibrate->add_option("--seed", cal_seed, "RNG seed (sampled)");
  calibrate->add_option("--out", cal_out, "Output path")->required();

  // export
  std::vector<std::string> exp_records;
  std::string exp_format, exp_out;
  CLI::App* exp = app.add_subcommand("export", "Export a record");
  exp->add_option("--record", exp_records, "Record path (repeatable for csv)")
      ->required();
  exp->add_option("--format", exp_format, "csv|plotdata")->required();
  exp->add_option("--out", exp_out, "Output path (default derives from record)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::optional<std::uint64_t> subset;
      if (subset_opt->count() > 0) subset = subset_val;
      return run_main(experiment, n, shots, seed, noise, mitigation,
                      calibration, subset, exact_probs, out);
    }
    if (calibrate->parsed()) {
      return calibrate_main(cal_n, cal_noise, cal_mode, cal_shots, cal_seed,
                            cal_out);
    }
    if (exp->parsed()) {
      return export_main(exp_records, exp_format, exp_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
