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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noisefp/acquisition.hpp"
#include "noisefp/svm.hpp"

// Experiment harness: accuracy tables over machine pairs, feature windows,
// time windows and time gaps, plus report emission.

namespace noisefp::experiments {

enum class ExperimentKind { Pairwise, Multiclass, Temporal24h, WindowTemporal, GapSweep, Robustness };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

struct SvmSettings {
  std::vector<double> c_grid{0.1, 1.0, 10.0, 100.0};
  bool tune_c = true;    // false: train every kernel at fixed_c only
  double fixed_c = 1.0;
  std::vector<svm::KernelKind> kernels{svm::kAllKernels.begin(), svm::kAllKernels.end()};
  std::optional<double> gamma;  // default: svm::default_gamma(train)
  double coef0 = 1.0;
  double tol = 1e-3;
  int max_iter = 10000;
  bool standardize = false;
  std::array<double, 3> fractions{0.6, 0.2, 0.2};

  std::vector<double> effective_c_grid() const;
  void validate() const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Pairwise;
  std::filesystem::path dataset;
  std::filesystem::path dataset2;    // temporal24h: optional second-day dataset
  std::vector<std::string> machines;  // empty: every machine in the dataset
  std::uint64_t seed = 0;
  SvmSettings svm;
  std::filesystem::path out_dir;

  int window_runs = 200;    // runs per machine in one time window
  int n_windows = 10;       // window-temporal and robustness
  int gap_step_runs = 10;   // gap-sweep spacing between successive gaps
  int max_gap_runs = -1;    // gap-sweep upper bound; -1 sweeps to the end of the data

  void validate() const;
};

/// Provenance of one accuracy cell.
struct CellInfo {
  std::string feature;  // e.g. "prefix(3)"
  svm::KernelKind kernel = svm::KernelKind::Linear;
  double c = 0.0;
  double val_accuracy = 0.0;
  bool converged = true;
  std::uint64_t split_seed = 0;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::size_t n_test = 0;
};

struct AccuracyTable {
  std::string name;
  std::string corner = "k";  // label of the row-label column
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> cells;     // [row][col], each in [0, 1]
  std::vector<std::vector<CellInfo>> info;    // same shape as cells
  std::vector<std::optional<double>> column_means;  // empty or one entry per column

  double at(std::size_t row, std::size_t col) const { return cells.at(row).at(col); }
  /// Throws ValidationError on shape mismatch or out-of-range cells.
  void validate() const;
};

struct CurvePoint {
  int gap_runs = 0;
  double gap_hours = 0.0;  // simulated schedule hours
  double accuracy = 0.0;
  CellInfo info;
};

struct Report {
  ExperimentKind experiment = ExperimentKind::Pairwise;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<AccuracyTable> tables;
  std::vector<CurvePoint> curve;                              // gap-sweep only
  std::vector<std::pair<std::string, std::string>> notes;    // ordered key/value metadata
  std::vector<std::string> warnings;

  const AccuracyTable& table(std::string_view name) const;
};

/// Split, standardize (optional), select on validation, score on test.
struct CellResult {
  double accuracy = 0.0;
  CellInfo info;
  svm::Classifier model;
  svm::Split split;  // standardized when settings.standardize is set
  std::optional<svm::Standardizer> scaler;
};
CellResult evaluate_cell(const svm::LabeledSet& data, std::uint64_t split_seed,
                         const SvmSettings& settings, std::string feature_label);

/// Seed for one cell, keyed by the data selection and the effective step set
/// so that equal inputs always share a split.
std::uint64_t cell_seed(std::uint64_t seed, std::string_view data_key, const svm::FeatureSpec& spec);

Report exp_pairwise(const acquisition::Dataset& ds, const ExperimentConfig& cfg);
Report exp_multiclass(const acquisition::Dataset& ds, const ExperimentConfig& cfg);
/// Day labels come from absolute time (epoch + timestamp); `day2` may be
/// null when `ds` already spans both days.
Report exp_temporal24h(const acquisition::Dataset& ds, const acquisition::Dataset* day2,
                       const ExperimentConfig& cfg);
Report exp_window_temporal(const acquisition::Dataset& ds, const ExperimentConfig& cfg);
Report exp_gap_sweep(const acquisition::Dataset& ds, const ExperimentConfig& cfg);
Report exp_robustness(const acquisition::Dataset& ds, const ExperimentConfig& cfg);

Report run_experiment(const ExperimentConfig& cfg, const acquisition::Dataset& ds,
                      const acquisition::Dataset* ds2 = nullptr);
/// Loads cfg.dataset (and cfg.dataset2 when set) and dispatches.
Report run_experiment(const ExperimentConfig& cfg);

/// FNV-1a of the canonical config text (paths excluded) and dataset manifests.
std::string config_hash(const ExperimentConfig& cfg, const acquisition::Dataset& ds,
                        const acquisition::Dataset* ds2 = nullptr);

std::string format_csv(const AccuracyTable& table);
std::string format_curve_csv(const Report& report);
std::string format_markdown(const Report& report);
std::string format_metadata(const Report& report);

/// Writes report.md, metadata.json, one CSV per table and curve.csv for
/// gap sweeps. Returns the written paths in order.
std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& out_dir);

}  // namespace noisefp::experiments
