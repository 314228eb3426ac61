// Copyright 2026 The noisefp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "noisefp/acquisition.hpp"
#include "noisefp/error.hpp"
#include "noisefp/experiments.hpp"
#include "noisefp/verify.hpp"

namespace noisefp::cli {

namespace {

namespace fs = std::filesystem;
using acquisition::MachineProfile;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A profile JSON file, or a comma-separated list of built-in ids.
std::vector<MachineProfile> resolve_profiles(const std::vector<std::string>& machines) {
  if (machines.empty()) return acquisition::builtin_profiles();
  if (machines.size() == 1 && fs::is_regular_file(machines.front())) {
    return acquisition::profiles_from_json(read_text(machines.front()));
  }
  std::vector<MachineProfile> out;
  for (const auto& id : machines) out.push_back(acquisition::builtin_profile(id));
  return out;
}

// Config keys outside any section belong to the subcommand being run, so
// `run --config FILE` can use plain `key = value` lines.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {subs.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

struct GenerateArgs {
  std::string protocol = "fast";
  std::vector<std::string> machines;
  int runs = 0;
  std::uint64_t seed = 0;
  double epoch = 0.0;
  std::int64_t shots = acquisition::kDefaultShots;
  bool no_anomaly = false;
  std::string out;
};

struct RunArgs {
  std::string experiment;
  std::string dataset;
  std::string dataset2;
  std::string out;
  std::vector<std::string> kernels;
  std::optional<double> gamma;
  experiments::ExperimentConfig cfg;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  acquisition::GenerateOptions options;
  options.protocol = acquisition::parse_protocol(a.protocol);
  options.n_runs_per_machine = a.runs;
  options.seed = a.seed;
  options.epoch = a.epoch;
  options.shots = a.shots;
  if (a.no_anomaly) options.schedule.anomalies.clear();
  const auto profiles = resolve_profiles(a.machines);
  const auto ds = acquisition::generate_dataset(profiles, options);
  acquisition::save_dataset(ds, a.out);
  fmt::print(out, "wrote {} runs for {} machines ({} protocol) to {}\n", ds.runs.size(), ds.profiles.size(),
             acquisition::to_string(ds.protocol), a.out);
  return 0;
}

int do_run(RunArgs a, std::ostream& out) {
  auto& cfg = a.cfg;
  cfg.experiment = experiments::parse_experiment(a.experiment);
  cfg.dataset = a.dataset;
  cfg.dataset2 = a.dataset2;
  cfg.out_dir = a.out;
  if (!a.kernels.empty()) {
    cfg.svm.kernels.clear();
    for (const auto& k : a.kernels) cfg.svm.kernels.push_back(svm::parse_kernel_kind(k));
  }
  cfg.svm.gamma = a.gamma;
  const auto report = experiments::run_experiment(cfg);
  const auto files = experiments::emit_report(report, cfg.out_dir);
  for (const auto& w : report.warnings) fmt::print(out, "warning: {}\n", w);
  fmt::print(out, "{} report ({} tables, config {}):\n", experiments::to_string(report.experiment),
             report.tables.size(), report.config_hash);
  for (const auto& f : files) fmt::print(out, "  {}\n", f.string());
  return 0;
}

void describe(const MachineProfile& p, std::ostream& out) {
  double t1 = 0.0;
  double t2 = 0.0;
  for (std::size_t q = 0; q < p.t1.size(); ++q) {
    t1 += p.t1[q] / static_cast<double>(p.t1.size());
    t2 += p.t2[q] / static_cast<double>(p.t2.size());
  }
  fmt::print(out, "{:<10} err 1q/2q/3q {:.4f}/{:.4f}/{:.4f}  T1 {:.1f} us  T2 {:.1f} us  toffoli {}  "
                  "drift {:.2f} @ {:.1f} h\n",
             p.machine_id, p.err_1q, p.err_2q, p.err_3q, t1 * 1e6, t2 * 1e6, testbed::to_string(p.toffoli_style),
             p.drift.relative_amplitude, p.drift.period / 3600.0);
}

int do_profiles(const std::string& id, bool json, std::ostream& out) {
  if (!id.empty()) {
    const auto p = acquisition::builtin_profile(id);
    out << acquisition::profiles_to_json(std::span<const MachineProfile>(&p, 1));
    return 0;
  }
  const auto& all = acquisition::builtin_profiles();
  if (json) {
    out << acquisition::profiles_to_json(all);
    return 0;
  }
  for (const auto& p : all) describe(p, out);
  return 0;
}

int do_verify(std::uint64_t seed, int sequences, std::ostream& out) {
  bool ok = true;
  for (const auto& r : verify::run_all(seed, sequences)) {
    fmt::print(out, "[{}] {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    ok = ok && r.passed;
  }
  return ok ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-fingerprint lab: simulate noisy devices, build datasets, classify them"};
  app.name("noisefp");
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.set_config("--config", "", "Key-value file with option defaults (TOML or INI)");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Simulate devices and write a dataset");
  generate->add_option("--protocol", gen.protocol, "fast or slow")->capture_default_str();
  generate->add_option("--machines", gen.machines, "Built-in ids (comma separated) or a profile JSON file")
      ->delimiter(',');
  generate->add_option("--runs", gen.runs, "Runs per machine")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Dataset seed")->capture_default_str();
  generate->add_option("--epoch", gen.epoch, "Absolute time of t = 0, seconds")->capture_default_str();
  generate->add_option("--shots", gen.shots, "Shots per distribution")->capture_default_str();
  generate->add_flag("--no-anomaly", gen.no_anomaly, "Disable the default queue slowdown");
  generate->add_option("--out", gen.out, "Output directory")->required();

  RunArgs ra;
  auto& cfg = ra.cfg;
  auto* runc = app.add_subcommand("run", "Run one experiment on a dataset and write its report");
  runc->add_option("--experiment", ra.experiment,
                   "pairwise, multiclass, temporal24h, window-temporal, gap-sweep or robustness")
      ->required();
  runc->add_option("--dataset", ra.dataset, "Dataset directory")->required();
  runc->add_option("--dataset2", ra.dataset2, "Second-day dataset (temporal24h)");
  runc->add_option("--out", ra.out, "Report directory")->required();
  runc->add_option("--machines", cfg.machines, "Machine ids (default: all)")->delimiter(',');
  runc->add_option("--seed", cfg.seed, "Experiment seed")->capture_default_str();
  runc->add_option("--c-grid", cfg.svm.c_grid, "Candidate C values")->delimiter(',');
  runc->add_option("--tune-c", cfg.svm.tune_c, "Select C on validation (true/false)")->capture_default_str();
  runc->add_option("--fixed-c", cfg.svm.fixed_c, "C used when --tune-c is false")->capture_default_str();
  runc->add_option("--kernels", ra.kernels, "Subset of linear,poly2,poly3,poly4,rbf")->delimiter(',');
  runc->add_option("--gamma", ra.gamma, "Kernel gamma (default 1/(p var))");
  runc->add_option("--coef0", cfg.svm.coef0, "Polynomial offset")->capture_default_str();
  runc->add_option("--tol", cfg.svm.tol, "Solver KKT tolerance")->capture_default_str();
  runc->add_option("--max-iter", cfg.svm.max_iter, "Solver sweep limit")->capture_default_str();
  runc->add_option("--standardize", cfg.svm.standardize, "z-score features (true/false)")->capture_default_str();
  runc->add_option("--window-runs", cfg.window_runs, "Runs per time window")->capture_default_str();
  runc->add_option("--n-windows", cfg.n_windows, "Number of time windows")->capture_default_str();
  runc->add_option("--gap-step", cfg.gap_step_runs, "Gap-sweep spacing in runs")->capture_default_str();
  runc->add_option("--max-gap", cfg.max_gap_runs, "Gap-sweep limit in runs (-1: all)")->capture_default_str();

  std::string profile_id;
  bool profiles_json = false;
  auto* profiles = app.add_subcommand("profiles", "List or describe the built-in machine profiles");
  profiles->add_option("--describe", profile_id, "Print one profile as JSON");
  profiles->add_flag("--json", profiles_json, "Print every profile as JSON");

  std::uint64_t verify_seed = 0;
  int verify_sequences = 1000;
  auto* verifyc = app.add_subcommand("verify", "Run the reconstruction check and simulator property suite");
  verifyc->add_option("--seed", verify_seed, "Seed for random sequences")->capture_default_str();
  verifyc->add_option("--sequences", verify_sequences, "Random gate/channel sequences")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }

  try {
    if (*generate) return do_generate(gen, out);
    if (*runc) return do_run(std::move(ra), out);
    if (*profiles) return do_profiles(profile_id, profiles_json, out);
    if (*verifyc) return do_verify(verify_seed, verify_sequences, out);
  } catch (const ValidationError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return 2;
  }
  return 2;
}

}  // namespace noisefp::cli
