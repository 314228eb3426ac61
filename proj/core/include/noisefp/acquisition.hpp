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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisefp/random.hpp"
#include "noisefp/simulator.hpp"
#include "noisefp/testbed.hpp"

// Synthetic devices, acquisition schedules and run datasets.

namespace noisefp::acquisition {

/// Time dependence of a device: slow sinusoid, piecewise-constant
/// calibration offsets and white per-run jitter, all relative to the base
/// noise level.
struct DriftSpec {
  double relative_amplitude = 0.0;  // [0, 0.5]
  double period = 86400.0;          // seconds
  double jitter_std = 0.0;
  double calibration_jump_std = 0.0;

  void validate() const;
  bool operator==(const DriftSpec&) const = default;
};

struct MachineProfile {
  std::string machine_id;
  std::array<double, sim::kNumQubits> t1{};  // seconds
  std::array<double, sim::kNumQubits> t2{};
  testbed::GateDurations gate_durations;
  double err_1q = 0.0;
  double err_2q = 0.0;
  double err_3q = 0.0;
  sim::ConfusionMatrix readout = sim::ConfusionMatrix::identity();
  DriftSpec drift;
  double calibration_period = 3600.0;  // seconds
  testbed::ToffoliStyle toffoli_style = testbed::ToffoliStyle::None;

  /// Throws ValidationError describing the first violated invariant.
  void validate() const;
  sim::NoiseParameters noise() const;
  bool operator==(const MachineProfile&) const = default;
};

/// A device with no gate, relaxation or readout error.
MachineProfile zero_noise_profile(std::string machine_id = "ideal");

/// Calibration offset in effect at time `t`: one Gaussian draw per
/// calibration interval, keyed by (seed, machine_id, interval index).
double calibration_offset(const MachineProfile& profile, double t, std::uint64_t calibration_seed);

/// 1 + A sin(2 pi t / period) + calibration offset + jitter, clamped at 0.
/// Draws from `rng` only when jitter is enabled.
double drift_factor(const MachineProfile& profile, double t, Rng& rng,
                    std::uint64_t calibration_seed = 0);

/// Scales every error rate, readout flip probability and 1/T by `factor`;
/// rates are clamped to [0, 1] and T2 to 2 T1.
MachineProfile scale_noise(const MachineProfile& profile, double factor);

/// Instantaneous device parameters at time `t` (seconds since dataset epoch 0).
MachineProfile params_at(const MachineProfile& profile, double t, Rng& rng,
                         std::uint64_t calibration_seed = 0);

using StepDistributions = std::array<sim::OutcomeDistribution, testbed::kNumSteps>;

/// Exact post-readout distribution at one step, before shot sampling.
sim::OutcomeDistribution noisy_distribution(const MachineProfile& at_t, testbed::MeasurementStep step);

/// All nine exact distributions from a single pass over the full circuit.
/// Identical to calling noisy_distribution() per step: each step circuit is
/// a prefix of the full one and the noise is deterministic.
StepDistributions noisy_distributions(const MachineProfile& at_t);

/// Simulates step_circuit(step) under the instantaneous parameters, applies
/// readout error and samples `shots` outcomes.
sim::OutcomeDistribution execute_step(const MachineProfile& at_t, testbed::MeasurementStep step,
                                      std::int64_t shots, Rng& rng);

enum class Protocol { Fast, Slow };
std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

/// Emulated fair-share queue slowdown: runs first_run..last_run (inclusive)
/// start `extra_gap_s` later than they otherwise would.
struct QueueAnomaly {
  int first_run = 0;
  int last_run = 0;
  double extra_gap_s = 0.0;
  bool operator==(const QueueAnomaly&) const = default;
};

struct ScheduleOptions {
  int parallel_slots = 20;
  double fast_wall_min_s = 30.0;
  double fast_wall_max_s = 90.0;
  double slow_wall_min_s = 60.0;
  double slow_wall_max_s = 180.0;
  double slow_min_gap_s = 120.0;
  std::vector<QueueAnomaly> anomalies{{1500, 1599, 900.0}};

  void validate() const;
  bool operator==(const ScheduleOptions&) const = default;
};

struct ScheduleEntry {
  std::string machine_id;
  int run_id = 0;
  double timestamp = 0.0;  // seconds, rounded to milliseconds
};

/// Each machine keeps `parallel_slots` tasks in flight; a finished slot
/// immediately starts the next task. Entries are grouped by machine.
std::vector<ScheduleEntry> schedule_fast(int n_runs_per_machine, std::span<const MachineProfile> machines,
                                         const ScheduleOptions& options = {}, std::uint64_t seed = 0);

/// One task at a time per machine, each starting at least slow_min_gap_s
/// after the previous one finished.
std::vector<ScheduleEntry> schedule_slow(int n_runs_per_machine, std::span<const MachineProfile> machines,
                                         const ScheduleOptions& options = {}, std::uint64_t seed = 0);

/// A time-stamped batch of executions: one (slow) or eight (fast) samples,
/// each holding the nine step distributions.
struct Run {
  int run_id = 0;
  std::string machine_id;
  double timestamp = 0.0;
  std::int64_t shots = 0;
  std::vector<StepDistributions> samples;

  bool operator==(const Run&) const = default;
};

inline constexpr int kFastSubSamples = 8;
inline constexpr std::int64_t kDefaultShots = 1000;

int sub_samples(Protocol p);

struct GenerateOptions {
  Protocol protocol = Protocol::Slow;
  int n_runs_per_machine = 1;
  std::uint64_t seed = 0;
  double epoch = 0.0;  // absolute simulated time of timestamp 0, seconds
  std::int64_t shots = kDefaultShots;
  ScheduleOptions schedule;
};

struct Dataset {
  Protocol protocol = Protocol::Slow;
  std::uint64_t seed = 0;
  double epoch = 0.0;
  std::int64_t shots = kDefaultShots;
  ScheduleOptions schedule;
  std::vector<MachineProfile> profiles;
  std::vector<Run> runs;  // grouped by machine (profile order), then run_id

  /// Throws ValidationError("corrupt dataset: ...") on any invariant violation.
  void validate() const;
  const MachineProfile& profile(std::string_view machine_id) const;
  bool has_machine(std::string_view machine_id) const;
  /// Runs of one machine in run_id order.
  std::vector<const Run*> runs_of(std::string_view machine_id) const;
  bool operator==(const Dataset&) const = default;
};

/// schedule -> params_at per timestamp -> nine step distributions per sample.
/// Every run draws from its own stream derived from (seed, machine_id, run_id).
Dataset generate_dataset(std::span<const MachineProfile> machines, const GenerateOptions& options);
Dataset generate_dataset(std::span<const MachineProfile> machines, Protocol protocol,
                         int n_runs_per_machine, std::uint64_t seed);

/// Writes `dir/manifest.json` and `dir/runs.csv`.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
/// Throws ValidationError("runs.csv line N: ...") on malformed rows and
/// ValidationError("corrupt dataset: ...") when invariants fail.
Dataset load_dataset(const std::filesystem::path& dir);

/// The run table exactly as save_dataset() writes it.
std::string format_runs_csv(const Dataset& ds);
std::string format_manifest(const Dataset& ds);

std::string profiles_to_json(std::span<const MachineProfile> profiles);
std::vector<MachineProfile> profiles_from_json(std::string_view text);

/// The shipped synthetic device library.
const std::vector<MachineProfile>& builtin_profiles();
/// Throws ValidationError for unknown ids.
MachineProfile builtin_profile(std::string_view machine_id);

}  // namespace noisefp::acquisition
