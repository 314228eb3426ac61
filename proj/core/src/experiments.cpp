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


#include "noisefp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "noisefp/error.hpp"
#include "noisefp/parallel.hpp"
#include "noisefp/random.hpp"

namespace noisefp::experiments {

using acquisition::Dataset;
using acquisition::Run;
using svm::FeatureSpec;
using svm::LabeledSet;

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 6> kNames{{
    {ExperimentKind::Pairwise, "pairwise"},
    {ExperimentKind::Multiclass, "multiclass"},
    {ExperimentKind::Temporal24h, "temporal24h"},
    {ExperimentKind::WindowTemporal, "window-temporal"},
    {ExperimentKind::GapSweep, "gap-sweep"},
    {ExperimentKind::Robustness, "robustness"},
}};

constexpr double kDaySeconds = 86400.0;

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "pairwise";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ValidationError("unknown experiment: " + std::string(name));
}

std::vector<double> SvmSettings::effective_c_grid() const {
  if (tune_c) return c_grid;
  return {fixed_c};
}

void SvmSettings::validate() const {
  if (tune_c && c_grid.empty()) throw ValidationError("empty C grid");
  for (double c : effective_c_grid()) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("C values must be > 0");
  }
  if (kernels.empty()) throw ValidationError("empty kernel list");
  if (gamma && !(*gamma > 0.0)) throw ValidationError("kernel gamma must be > 0");
  if (!(tol > 0.0)) throw ValidationError("solver tolerance must be > 0");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw ValidationError("split fractions must be > 0");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("split fractions must sum to 1");
}

void ExperimentConfig::validate() const {
  svm.validate();
  if (window_runs < 5) throw ValidationError("window_runs must be >= 5");
  if (n_windows < 2) throw ValidationError("n_windows must be >= 2");
  if (gap_step_runs < 1) throw ValidationError("gap_step_runs must be >= 1");
  if (max_gap_runs < -1) throw ValidationError("max_gap_runs must be >= 0 or -1");
  std::set<std::string> seen;
  for (const auto& m : machines) {
    if (!seen.insert(m).second) throw ValidationError("duplicate machine: " + m);
  }
}

void AccuracyTable::validate() const {
  if (cells.size() != row_labels.size() || info.size() != row_labels.size()) {
    throw ValidationError("table '" + name + "': row count mismatch");
  }
  for (std::size_t r = 0; r < cells.size(); ++r) {
    if (cells[r].size() != col_labels.size() || info[r].size() != col_labels.size()) {
      throw ValidationError("table '" + name + "': column count mismatch");
    }
    for (double v : cells[r]) {
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("table '" + name + "': cell outside [0, 1]");
    }
  }
  if (!column_means.empty() && column_means.size() != col_labels.size()) {
    throw ValidationError("table '" + name + "': mean row length mismatch");
  }
}

const AccuracyTable& Report::table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw ValidationError("no table named '" + std::string(name) + "'");
}

// ---- cells ------------------------------------------------------------------

std::uint64_t cell_seed(std::uint64_t seed, std::string_view data_key, const FeatureSpec& spec) {
  const auto steps = spec.steps();
  return derive_seed(seed, "cell", data_key, steps.front(), steps.back());
}

CellResult evaluate_cell(const LabeledSet& data, std::uint64_t split_seed, const SvmSettings& settings,
                         std::string feature_label) {
  CellResult out;
  out.split = svm::split(data, settings.fractions, split_seed);
  auto& sp = out.split;

  std::vector<std::size_t> all;
  all.insert(all.end(), sp.train_indices.begin(), sp.train_indices.end());
  all.insert(all.end(), sp.val_indices.begin(), sp.val_indices.end());
  all.insert(all.end(), sp.test_indices.begin(), sp.test_indices.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] != i) throw std::logic_error("split partitions are not disjoint and exhaustive");
  }
  if (sp.train.classes().size() < 2) throw ValidationError("degenerate labels in training split");

  if (settings.standardize) {
    out.scaler.emplace(sp.train);
    out.scaler->apply(sp.train);
    out.scaler->apply(sp.val);
    out.scaler->apply(sp.test);
  }
  const auto kernels = svm::make_kernels(sp.train, settings.kernels, settings.gamma, settings.coef0);
  const auto grid = settings.effective_c_grid();
  svm::TrainOptions options{settings.tol, settings.max_iter};
  auto sel = svm::select_model(sp.train, sp.val, grid, kernels, options);

  out.accuracy = svm::accuracy(sel.model.predict_all(sp.test), sp.test.y);
  out.info.feature = std::move(feature_label);
  out.info.kernel = sel.kernel.kind;
  out.info.c = sel.c;
  out.info.val_accuracy = sel.val_accuracy;
  out.info.converged = std::all_of(sel.report.begin(), sel.report.end(),
                                   [](const svm::SelectionRow& r) { return r.converged; });
  out.info.split_seed = split_seed;
  out.info.n_train = sp.train.size();
  out.info.n_val = sp.val.size();
  out.info.n_test = sp.test.size();
  out.model = std::move(sel.model);
  return out;
}

namespace {

struct CellJob {
  std::string data_key;
  FeatureSpec spec;
  std::function<LabeledSet(const FeatureSpec&)> data;
};

struct CellOutcome {
  double accuracy = 0.0;
  CellInfo info;
};

// Identical (data, step set) jobs are evaluated once and share the result.
std::vector<CellOutcome> run_cells(const std::vector<CellJob>& jobs, const ExperimentConfig& cfg) {
  std::map<std::string, std::size_t> unique_index;
  std::vector<std::size_t> first_job;
  std::vector<std::size_t> slot(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto steps = jobs[j].spec.steps();
    const std::string key = fmt::format("{}|{}-{}", jobs[j].data_key, steps.front(), steps.back());
    auto [it, inserted] = unique_index.emplace(key, first_job.size());
    if (inserted) first_job.push_back(j);
    slot[j] = it->second;
  }
  std::vector<CellOutcome> unique(first_job.size());
  parallel_for(first_job.size(), [&](std::size_t u) {
    const auto& job = jobs[first_job[u]];
    const LabeledSet data = job.data(job.spec);
    auto r = evaluate_cell(data, cell_seed(cfg.seed, job.data_key, job.spec), cfg.svm, job.spec.label());
    unique[u] = {r.accuracy, std::move(r.info)};
  });
  std::vector<CellOutcome> out(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    out[j] = unique[slot[j]];
    out[j].info.feature = jobs[j].spec.label();
  }
  return out;
}

AccuracyTable make_table(std::string name, std::vector<std::string> rows, std::vector<std::string> cols) {
  AccuracyTable t;
  t.name = std::move(name);
  t.row_labels = std::move(rows);
  t.col_labels = std::move(cols);
  t.cells.assign(t.row_labels.size(), std::vector<double>(t.col_labels.size(), 0.0));
  t.info.assign(t.row_labels.size(), std::vector<CellInfo>(t.col_labels.size()));
  return t;
}

std::vector<std::string> step_rows() {
  std::vector<std::string> rows;
  for (int k = 1; k <= testbed::kNumSteps; ++k) rows.push_back(std::to_string(k));
  return rows;
}

std::vector<std::string> resolve_machines(const Dataset& ds, const ExperimentConfig& cfg) {
  std::vector<std::string> out = cfg.machines;
  if (out.empty()) {
    for (const auto& p : ds.profiles) out.push_back(p.machine_id);
  }
  for (const auto& m : out) {
    if (!ds.has_machine(m)) throw ValidationError("missing machine: " + m);
  }
  return out;
}

std::string single_machine(const Dataset& ds, const ExperimentConfig& cfg, std::string_view experiment) {
  const auto machines = resolve_machines(ds, cfg);
  if (cfg.machines.size() > 1) {
    throw ValidationError(fmt::format("{} takes one machine, got {}", experiment, cfg.machines.size()));
  }
  if (machines.empty()) throw ValidationError("dataset has no machines");
  return machines.front();
}

// Runs of one machine in time order.
std::vector<const Run*> timeline(const Dataset& ds, const std::string& machine) {
  auto runs = ds.runs_of(machine);
  std::stable_sort(runs.begin(), runs.end(),
                   [](const Run* a, const Run* b) { return a->timestamp < b->timestamp; });
  return runs;
}

LabeledSet features_of(std::span<const Run* const> runs, const FeatureSpec& spec, int label) {
  LabeledSet out;
  for (const auto* run : runs) svm::append_run(out, *run, spec, label);
  return out;
}

// Two groups of runs labeled 0 and 1.
LabeledSet two_groups(std::span<const Run* const> a, std::span<const Run* const> b, const FeatureSpec& spec) {
  LabeledSet out = features_of(a, spec, 0);
  out.append(features_of(b, spec, 1));
  return out;
}

std::string window_key(const std::string& machine, int a_lo, int a_hi, int b_lo, int b_hi) {
  return fmt::format("windows:{}:{}-{}:{}-{}", machine, a_lo, a_hi, b_lo, b_hi);
}

void require_slow(const Dataset& ds, ExperimentKind kind) {
  if (ds.protocol != acquisition::Protocol::Slow) {
    throw ValidationError(fmt::format("{} requires a slow-protocol dataset", to_string(kind)));
  }
}

void add_common_notes(Report& r) {
  r.notes.emplace_back("protocol", "60/20/20 split per cell; kernel and C chosen on validation; accuracy on test");
  r.notes.emplace_back("split", "resplit per cell; split_seed recorded per cell");
}

}  // namespace

// ---- experiments ------------------------------------------------------------

Report exp_pairwise(const Dataset& ds, const ExperimentConfig& cfg) {
  const auto machines = resolve_machines(ds, cfg);
  if (machines.size() < 2) throw ValidationError("pairwise needs at least 2 machines");

  std::vector<CellJob> jobs;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t a = 0; a < machines.size(); ++a) {
    for (std::size_t b = a + 1; b < machines.size(); ++b) {
      pairs.emplace_back(machines[a], machines[b]);
      const std::vector<std::string> sel{machines[a], machines[b]};
      const std::string key = "pair:" + machines[a] + ":" + machines[b];
      auto data = [&ds, sel](const FeatureSpec& spec) { return svm::build_features(ds, spec, sel); };
      for (int k = 1; k <= testbed::kNumSteps; ++k) {
        jobs.push_back({key, FeatureSpec::single(k), data});
        jobs.push_back({key, FeatureSpec::prefix(k), data});
      }
    }
  }
  const auto results = run_cells(jobs, cfg);

  Report report;
  report.experiment = ExperimentKind::Pairwise;
  std::size_t j = 0;
  for (const auto& [a, b] : pairs) {
    auto t = make_table(a + " vs " + b, step_rows(), {"single", "prefix"});
    for (std::size_t row = 0; row < t.row_labels.size(); ++row) {
      for (std::size_t col = 0; col < 2; ++col, ++j) {
        t.cells[row][col] = results[j].accuracy;
        t.info[row][col] = results[j].info;
      }
    }
    report.tables.push_back(std::move(t));
  }
  add_common_notes(report);
  return report;
}

Report exp_multiclass(const Dataset& ds, const ExperimentConfig& cfg) {
  const auto machines = resolve_machines(ds, cfg);
  if (machines.size() < 3) throw ValidationError("multiclass needs at least 3 machines");
  constexpr int kMaxWidth = 5;

  std::string key = "multiclass";
  for (const auto& m : machines) key += ":" + m;
  auto data = [&ds, machines](const FeatureSpec& spec) { return svm::build_features(ds, spec, machines); };

  std::vector<std::string> cols{"single"};
  for (int s = 1; s <= kMaxWidth; ++s) cols.push_back(fmt::format("window s={}", s));
  cols.emplace_back("prefix");

  std::vector<CellJob> jobs;
  for (int k = 1; k <= testbed::kNumSteps; ++k) {
    jobs.push_back({key, FeatureSpec::single(k), data});
    for (int s = 1; s <= kMaxWidth; ++s) jobs.push_back({key, FeatureSpec::window(k, s), data});
    jobs.push_back({key, FeatureSpec::prefix(k), data});
  }
  const auto results = run_cells(jobs, cfg);

  auto t = make_table("multiclass", step_rows(), cols);
  std::size_t j = 0;
  for (std::size_t row = 0; row < t.row_labels.size(); ++row) {
    for (std::size_t col = 0; col < cols.size(); ++col, ++j) {
      t.cells[row][col] = results[j].accuracy;
      t.info[row][col] = results[j].info;
    }
  }
  for (std::size_t col = 0; col < cols.size(); ++col) {
    if (col + 1 == cols.size()) {
      t.column_means.emplace_back(std::nullopt);
      continue;
    }
    double sum = 0.0;
    for (const auto& row : t.cells) sum += row[col];
    t.column_means.emplace_back(sum / static_cast<double>(t.cells.size()));
  }

  Report report;
  report.experiment = ExperimentKind::Multiclass;
  report.tables.push_back(std::move(t));
  add_common_notes(report);
  report.notes.emplace_back("classes", fmt::format("{}", fmt::join(machines, ",")));
  return report;
}

Report exp_temporal24h(const Dataset& ds, const Dataset* day2, const ExperimentConfig& cfg) {
  const std::string machine = single_machine(ds, cfg, "temporal24h");
  struct Stamped {
    const Run* run;
    double absolute;
  };
  std::vector<Stamped> all;
  for (const auto* r : ds.runs_of(machine)) all.push_back({r, ds.epoch + r->timestamp});
  if (day2 != nullptr) {
    if (!day2->has_machine(machine)) throw ValidationError("second dataset lacks machine: " + machine);
    for (const auto* r : day2->runs_of(machine)) all.push_back({r, day2->epoch + r->timestamp});
  }
  if (all.empty()) throw ValidationError("no runs for machine: " + machine);
  double t0 = all.front().absolute;
  for (const auto& s : all) t0 = std::min(t0, s.absolute);

  std::vector<const Run*> days[2];
  for (const auto& s : all) {
    const auto day = static_cast<long long>(std::floor((s.absolute - t0) / kDaySeconds));
    if (day > 1) throw ValidationError("temporal24h: runs span more than two days");
    days[day].push_back(s.run);
  }
  if (days[1].empty()) throw ValidationError("temporal24h: missing second epoch (no runs 24 h after the first)");

  const std::string key = "days:" + machine;
  auto data = [&days](const FeatureSpec& spec) { return two_groups(days[0], days[1], spec); };
  std::vector<CellJob> jobs;
  for (int k = 1; k <= testbed::kNumSteps; ++k) {
    jobs.push_back({key, FeatureSpec::single(k), data});
    jobs.push_back({key, FeatureSpec::prefix(k), data});
  }
  const auto results = run_cells(jobs, cfg);

  auto t = make_table("day 1 vs day 2", step_rows(), {"single", "prefix"});
  std::size_t j = 0;
  for (std::size_t row = 0; row < t.row_labels.size(); ++row) {
    for (std::size_t col = 0; col < 2; ++col, ++j) {
      t.cells[row][col] = results[j].accuracy;
      t.info[row][col] = results[j].info;
    }
  }
  Report report;
  report.experiment = ExperimentKind::Temporal24h;
  report.tables.push_back(std::move(t));
  add_common_notes(report);
  report.notes.emplace_back("machine", machine);
  report.notes.emplace_back("hours", "simulated schedule hours; day = floor((epoch + timestamp - first) / 24 h)");
  report.notes.emplace_back("runs", fmt::format("day 1: {}, day 2: {}", days[0].size(), days[1].size()));
  return report;
}

Report exp_window_temporal(const Dataset& ds, const ExperimentConfig& cfg) {
  require_slow(ds, ExperimentKind::WindowTemporal);
  const std::string machine = single_machine(ds, cfg, "window-temporal");
  const auto runs = timeline(ds, machine);
  const int w = cfg.window_runs;
  const int nw = cfg.n_windows;
  if (static_cast<long long>(runs.size()) < static_cast<long long>(w) * nw) {
    throw ValidationError(fmt::format("window-temporal needs {} runs for {}, found {}", w * nw, machine,
                                      runs.size()));
  }
  auto window = [&runs, w](int i) {
    return std::span<const Run* const>(runs).subspan(static_cast<std::size_t>(i * w), static_cast<std::size_t>(w));
  };

  std::vector<std::string> cols;
  for (int i = 1; i < nw; ++i) cols.push_back(fmt::format("W{}", i + 1));
  std::vector<CellJob> jobs;
  for (int sub = 0; sub < 2; ++sub) {
    for (int k = 1; k <= testbed::kNumSteps; ++k) {
      for (int i = 1; i < nw; ++i) {
        auto data = [window, i](const FeatureSpec& spec) { return two_groups(window(0), window(i), spec); };
        jobs.push_back({window_key(machine, 0, w, i * w, (i + 1) * w),
                        sub == 0 ? FeatureSpec::single(k) : FeatureSpec::prefix(k), data});
      }
    }
  }
  const auto results = run_cells(jobs, cfg);

  Report report;
  report.experiment = ExperimentKind::WindowTemporal;
  std::size_t j = 0;
  for (const char* name : {"single", "prefix"}) {
    auto t = make_table(name, step_rows(), cols);
    for (std::size_t row = 0; row < t.row_labels.size(); ++row) {
      for (std::size_t col = 0; col < cols.size(); ++col, ++j) {
        t.cells[row][col] = results[j].accuracy;
        t.info[row][col] = results[j].info;
      }
    }
    report.tables.push_back(std::move(t));
  }
  add_common_notes(report);
  report.notes.emplace_back("machine", machine);
  report.notes.emplace_back("windows", fmt::format("{} windows of {} consecutive runs; W1 vs Wj", nw, w));
  report.notes.emplace_back(
      "hours", fmt::format("simulated schedule hours; W1 starts at {:.3f} h, W{} ends at {:.3f} h",
                           window(0).front()->timestamp / 3600.0, nw, window(nw - 1).back()->timestamp / 3600.0));
  return report;
}

Report exp_gap_sweep(const Dataset& ds, const ExperimentConfig& cfg) {
  require_slow(ds, ExperimentKind::GapSweep);
  const std::string machine = single_machine(ds, cfg, "gap-sweep");
  const auto runs = timeline(ds, machine);
  const int w = cfg.window_runs;
  const int n = static_cast<int>(runs.size());
  if (n < 2 * w) throw ValidationError(fmt::format("gap-sweep needs at least {} runs, found {}", 2 * w, n));

  Report report;
  report.experiment = ExperimentKind::GapSweep;
  int max_gap = n - 2 * w;
  if (cfg.max_gap_runs >= 0) {
    if (cfg.max_gap_runs > max_gap) {
      report.warnings.push_back(fmt::format("requested max gap of {} runs exceeds the data; truncated to {}",
                                            cfg.max_gap_runs, max_gap));
    } else {
      max_gap = cfg.max_gap_runs;
    }
  }

  std::vector<int> gaps;
  for (int g = 0; g <= max_gap; g += cfg.gap_step_runs) gaps.push_back(g);
  const auto spec = FeatureSpec::prefix(testbed::kNumSteps);
  std::vector<CellJob> jobs;
  for (int g : gaps) {
    auto data = [&runs, w, g](const FeatureSpec& s) {
      std::span<const Run* const> all(runs);
      return two_groups(all.subspan(0, static_cast<std::size_t>(w)),
                        all.subspan(static_cast<std::size_t>(w + g), static_cast<std::size_t>(w)), s);
    };
    jobs.push_back({window_key(machine, 0, w, w + g, 2 * w + g), spec, data});
  }
  const auto results = run_cells(jobs, cfg);

  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double hours = (runs[static_cast<std::size_t>(w + gaps[i])]->timestamp -
                          runs[static_cast<std::size_t>(w)]->timestamp) /
                         3600.0;
    report.curve.push_back({gaps[i], hours, results[i].accuracy, results[i].info});
  }

  const double span_h = (runs.back()->timestamp - runs.front()->timestamp) / 3600.0;
  const double per_6h = span_h > 0.0 ? static_cast<double>(n - 1) / span_h * 6.0 : 0.0;
  add_common_notes(report);
  report.notes.emplace_back("machine", machine);
  report.notes.emplace_back("reference", fmt::format("runs 1-{} vs a {}-run window starting gap runs later", w, w));
  report.notes.emplace_back("features", spec.label());
  report.notes.emplace_back("hours", "simulated schedule hours between the starts of run w+1 and run w+1+gap");
  report.notes.emplace_back("runs_per_6h", fmt::format("{:.2f}", per_6h));
  return report;
}

Report exp_robustness(const Dataset& ds, const ExperimentConfig& cfg) {
  require_slow(ds, ExperimentKind::Robustness);
  const auto machines = resolve_machines(ds, cfg);
  if (machines.size() != 2) {
    throw ValidationError(fmt::format("robustness needs exactly 2 machines, got {}", machines.size()));
  }
  const int w = cfg.window_runs;
  const int nw = cfg.n_windows;
  const std::array<std::vector<const Run*>, 2> runs{timeline(ds, machines[0]), timeline(ds, machines[1])};
  for (std::size_t m = 0; m < 2; ++m) {
    if (static_cast<long long>(runs[m].size()) < static_cast<long long>(w) * nw) {
      throw ValidationError(fmt::format("robustness needs {} runs for {}, found {}", w * nw, machines[m],
                                        runs[m].size()));
    }
  }
  const auto spec = FeatureSpec::prefix(testbed::kNumSteps);
  auto window_data = [&](int i) {
    auto a = std::span<const Run* const>(runs[0]).subspan(static_cast<std::size_t>(i * w), static_cast<std::size_t>(w));
    auto b = std::span<const Run* const>(runs[1]).subspan(static_cast<std::size_t>(i * w), static_cast<std::size_t>(w));
    return two_groups(a, b, spec);
  };

  std::vector<std::string> labels;
  for (int i = 0; i < nw; ++i) labels.push_back(fmt::format("W{}", i + 1));
  auto t = make_table("robustness", labels, labels);
  t.corner = "train \\ test";

  parallel_for(static_cast<std::size_t>(nw), [&](std::size_t i) {
    const auto key = fmt::format("robust:{}:{}:{}-{}", machines[0], machines[1], i * w, (i + 1) * w);
    const LabeledSet train_window = window_data(static_cast<int>(i));
    auto cell = evaluate_cell(train_window, cell_seed(cfg.seed, key, spec), cfg.svm, spec.label());
    for (int j = 0; j < nw; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (uj == i) {
        t.cells[i][uj] = cell.accuracy;
      } else {
        LabeledSet target = window_data(j);
        if (cell.scaler) cell.scaler->apply(target);
        t.cells[i][uj] = svm::accuracy(cell.model.predict_all(target), target.y);
      }
      t.info[i][uj] = cell.info;
    }
  });

  Report report;
  report.experiment = ExperimentKind::Robustness;
  report.tables.push_back(std::move(t));
  add_common_notes(report);
  report.notes.emplace_back("machines", machines[0] + "," + machines[1]);
  report.notes.emplace_back("windows", fmt::format("{} windows of {} runs per machine", nw, w));
  report.notes.emplace_back("diagonal", "held-out test portion of the training window");
  report.notes.emplace_back("off_diagonal", "every run of the target window");
  report.notes.emplace_back("hours", "simulated schedule hours");
  return report;
}

// ---- dispatch ---------------------------------------------------------------

std::string config_hash(const ExperimentConfig& cfg, const Dataset& ds, const Dataset* ds2) {
  std::string kernels;
  for (auto k : cfg.svm.kernels) kernels += std::string(svm::to_string(k)) + ",";
  std::string text = fmt::format(
      "experiment={};machines={};seed={};c_grid={:.17g};tune_c={};fixed_c={:.17g};kernels={};gamma={};"
      "coef0={:.17g};tol={:.17g};max_iter={};standardize={};fractions={:.17g};window_runs={};n_windows={};"
      "gap_step_runs={};max_gap_runs={}\n",
      to_string(cfg.experiment), fmt::join(cfg.machines, ","), cfg.seed, fmt::join(cfg.svm.c_grid, ","),
      cfg.svm.tune_c, cfg.svm.fixed_c, kernels, cfg.svm.gamma ? fmt::format("{:.17g}", *cfg.svm.gamma) : "auto",
      cfg.svm.coef0, cfg.svm.tol, cfg.svm.max_iter, cfg.svm.standardize, fmt::join(cfg.svm.fractions, ","),
      cfg.window_runs, cfg.n_windows, cfg.gap_step_runs, cfg.max_gap_runs);
  text += acquisition::format_manifest(ds);
  if (ds2 != nullptr) text += acquisition::format_manifest(*ds2);
  return fmt::format("{:016x}", hash_string(text));
}

Report run_experiment(const ExperimentConfig& cfg, const Dataset& ds, const Dataset* ds2) {
  cfg.validate();
  Report report;
  switch (cfg.experiment) {
    case ExperimentKind::Pairwise:
      report = exp_pairwise(ds, cfg);
      break;
    case ExperimentKind::Multiclass:
      report = exp_multiclass(ds, cfg);
      break;
    case ExperimentKind::Temporal24h:
      report = exp_temporal24h(ds, ds2, cfg);
      break;
    case ExperimentKind::WindowTemporal:
      report = exp_window_temporal(ds, cfg);
      break;
    case ExperimentKind::GapSweep:
      report = exp_gap_sweep(ds, cfg);
      break;
    case ExperimentKind::Robustness:
      report = exp_robustness(ds, cfg);
      break;
  }
  report.seed = cfg.seed;
  report.config_hash = config_hash(cfg, ds, ds2);
  for (const auto& t : report.tables) t.validate();
  return report;
}

Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.dataset.empty()) throw ValidationError("no dataset given");
  const Dataset ds = acquisition::load_dataset(cfg.dataset);
  if (!cfg.dataset2.empty()) {
    const Dataset ds2 = acquisition::load_dataset(cfg.dataset2);
    return run_experiment(cfg, ds, &ds2);
  }
  return run_experiment(cfg, ds, nullptr);
}

}  // namespace noisefp::experiments
