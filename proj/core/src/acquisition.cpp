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

#include "noisefp/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>

#include "noisefp/error.hpp"
#include "noisefp/parallel.hpp"

namespace noisefp::acquisition {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_rate(double v) { return v >= 0.0 && v <= 1.0; }

double round_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

void check_machines(std::span<const MachineProfile> machines, int n_runs) {
  if (machines.empty()) throw ValidationError("empty machine list");
  if (n_runs < 1) throw ValidationError("n_runs_per_machine must be at least 1");
}

/// Steps of the decomposed full circuit after which each measurement happens.
std::array<std::size_t, testbed::kNumSteps> decomposed_prefix_lengths(testbed::ToffoliStyle style) {
  std::array<std::size_t, testbed::kNumSteps> out{};
  for (int k = 1; k <= testbed::kNumSteps; ++k) {
    const testbed::MeasurementStep step(k);
    out[static_cast<std::size_t>(k - 1)] =
        testbed::decompose_toffoli(testbed::step_circuit(step), style).size();
  }
  return out;
}

}  // namespace

void DriftSpec::validate() const {
  if (!(relative_amplitude >= 0.0 && relative_amplitude <= 0.5)) {
    throw ValidationError("drift relative_amplitude must lie in [0, 0.5]");
  }
  if (!(period > 0.0)) throw ValidationError("drift period must be positive");
  if (!(jitter_std >= 0.0) || !(calibration_jump_std >= 0.0)) {
    throw ValidationError("drift standard deviations must be non-negative");
  }
}

void MachineProfile::validate() const {
  if (machine_id.empty()) throw ValidationError("machine_id must not be empty");
  if (machine_id.find_first_of(",\n\r\" ") != std::string::npos) {
    throw ValidationError("machine_id '" + machine_id + "' contains a reserved character");
  }
  for (double r : {err_1q, err_2q, err_3q}) {
    if (!is_rate(r)) throw ValidationError(machine_id + ": error rates must lie in [0, 1]");
  }
  for (std::size_t q = 0; q < t1.size(); ++q) {
    if (!(t1[q] > 0.0) || !(t2[q] > 0.0)) {
      throw ValidationError(machine_id + ": T1 and T2 must be positive");
    }
    if (t2[q] > 2.0 * t1[q]) throw ValidationError(machine_id + ": unphysical T2");
  }
  if (!readout.is_valid()) throw ValidationError(machine_id + ": readout matrix is not row-stochastic");
  if (!(calibration_period > 0.0)) {
    throw ValidationError(machine_id + ": calibration_period must be positive");
  }
  for (double d : {gate_durations.single_qubit, gate_durations.cnot, gate_durations.toffoli,
                   gate_durations.phase}) {
    if (!(d >= 0.0)) throw ValidationError(machine_id + ": gate durations must be non-negative");
  }
  drift.validate();
}

sim::NoiseParameters MachineProfile::noise() const {
  sim::NoiseParameters n;
  n.err_1q = err_1q;
  n.err_2q = err_2q;
  n.err_3q = err_3q;
  n.t1 = t1;
  n.t2 = t2;
  return n;
}

MachineProfile zero_noise_profile(std::string machine_id) {
  MachineProfile p;
  p.machine_id = std::move(machine_id);
  p.t1.fill(kInf);
  p.t2.fill(kInf);
  return p;
}

double calibration_offset(const MachineProfile& profile, double t, std::uint64_t calibration_seed) {
  const double std = profile.drift.calibration_jump_std;
  if (std == 0.0) return 0.0;
  const auto interval = static_cast<std::int64_t>(std::floor(t / profile.calibration_period));
  Rng rng(derive_seed(calibration_seed, "calibration", profile.machine_id,
                      static_cast<std::uint64_t>(interval)));
  return std::normal_distribution<double>(0.0, std)(rng);
}

double drift_factor(const MachineProfile& profile, double t, Rng& rng, std::uint64_t calibration_seed) {
  const DriftSpec& d = profile.drift;
  double f = 1.0;
  if (d.relative_amplitude != 0.0) {
    f += d.relative_amplitude * std::sin(2.0 * std::numbers::pi * t / d.period);
  }
  f += calibration_offset(profile, t, calibration_seed);
  if (d.jitter_std > 0.0) f += std::normal_distribution<double>(0.0, d.jitter_std)(rng);
  return std::max(f, 0.0);
}

MachineProfile scale_noise(const MachineProfile& profile, double factor) {
  if (factor == 1.0) return profile;
  MachineProfile out = profile;
  out.err_1q = std::clamp(profile.err_1q * factor, 0.0, 1.0);
  out.err_2q = std::clamp(profile.err_2q * factor, 0.0, 1.0);
  out.err_3q = std::clamp(profile.err_3q * factor, 0.0, 1.0);
  for (std::size_t q = 0; q < out.t1.size(); ++q) {
    out.t1[q] = factor > 0.0 ? profile.t1[q] / factor : kInf;
    out.t2[q] = factor > 0.0 ? profile.t2[q] / factor : kInf;
    out.t2[q] = std::min(out.t2[q], 2.0 * out.t1[q]);
  }
  for (auto& row : out.readout.m) {
    const auto i = static_cast<std::size_t>(&row - out.readout.m.data());
    double off = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j == i) continue;
      row[j] = std::clamp(row[j] * factor, 0.0, 1.0);
      off += row[j];
    }
    if (off > 1.0) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j != i) row[j] /= off;
      }
      off = 1.0;
    }
    row[i] = 1.0 - off;
  }
  return out;
}

MachineProfile params_at(const MachineProfile& profile, double t, Rng& rng,
                         std::uint64_t calibration_seed) {
  return scale_noise(profile, drift_factor(profile, t, rng, calibration_seed));
}

sim::OutcomeDistribution noisy_distribution(const MachineProfile& at_t, testbed::MeasurementStep step) {
  const testbed::Circuit c = testbed::decompose_toffoli(
      testbed::step_circuit(step, at_t.gate_durations), at_t.toffoli_style, at_t.gate_durations);
  const sim::DensityMatrix rho = sim::run_circuit(c.gates, at_t.noise());
  return sim::apply_readout(sim::measure_pair(rho), at_t.readout);
}

StepDistributions noisy_distributions(const MachineProfile& at_t) {
  const testbed::Circuit full = testbed::decompose_toffoli(
      testbed::step_circuit(testbed::MeasurementStep(testbed::kNumSteps), at_t.gate_durations),
      at_t.toffoli_style, at_t.gate_durations);
  const auto prefixes = decomposed_prefix_lengths(at_t.toffoli_style);
  const sim::NoiseParameters noise = at_t.noise();

  StepDistributions out{};
  sim::DensityMatrix rho = sim::initial_state();
  std::size_t applied = 0;
  for (std::size_t k = 0; k < prefixes.size(); ++k) {
    for (; applied < prefixes[k]; ++applied) rho = sim::apply_noisy_gate(rho, full.gates[applied], noise);
    out[k] = sim::apply_readout(sim::measure_pair(rho), at_t.readout);
  }
  return out;
}

sim::OutcomeDistribution execute_step(const MachineProfile& at_t, testbed::MeasurementStep step,
                                      std::int64_t shots, Rng& rng) {
  if (shots < 1) throw ValidationError("empty sample");
  return sim::sample_counts(noisy_distribution(at_t, step), shots, rng);
}

std::string_view to_string(Protocol p) { return p == Protocol::Fast ? "fast" : "slow"; }

Protocol parse_protocol(std::string_view name) {
  if (name == "fast") return Protocol::Fast;
  if (name == "slow") return Protocol::Slow;
  throw ValidationError("unknown protocol '" + std::string(name) + "' (expected fast or slow)");
}

int sub_samples(Protocol p) { return p == Protocol::Fast ? kFastSubSamples : 1; }

void ScheduleOptions::validate() const {
  if (parallel_slots < 1) throw ValidationError("parallel_slots must be at least 1");
  if (!(fast_wall_min_s >= 0.0 && fast_wall_max_s >= fast_wall_min_s) ||
      !(slow_wall_min_s >= 0.0 && slow_wall_max_s >= slow_wall_min_s)) {
    throw ValidationError("task wall-time range is invalid");
  }
  if (!(slow_min_gap_s >= 0.0)) throw ValidationError("slow_min_gap_s must be non-negative");
  for (const auto& a : anomalies) {
    if (a.last_run < a.first_run || !(a.extra_gap_s >= 0.0)) {
      throw ValidationError("queue anomaly segment is invalid");
    }
  }
}

std::vector<ScheduleEntry> schedule_fast(int n_runs_per_machine, std::span<const MachineProfile> machines,
                                         const ScheduleOptions& options, std::uint64_t seed) {
  check_machines(machines, n_runs_per_machine);
  options.validate();
  std::vector<ScheduleEntry> out;
  out.reserve(machines.size() * static_cast<std::size_t>(n_runs_per_machine));
  for (const auto& m : machines) {
    Rng rng(derive_seed(seed, "schedule-fast", m.machine_id));
    std::uniform_real_distribution<double> wall(options.fast_wall_min_s, options.fast_wall_max_s);
    // Min-heap of slot release times; the next task takes the earliest one.
    std::priority_queue<double, std::vector<double>, std::greater<>> slots;
    for (int s = 0; s < options.parallel_slots; ++s) slots.push(0.0);
    for (int r = 0; r < n_runs_per_machine; ++r) {
      const double start = round_ms(slots.top());
      slots.pop();
      slots.push(start + wall(rng));
      out.push_back({m.machine_id, r, start});
    }
  }
  return out;
}

std::vector<ScheduleEntry> schedule_slow(int n_runs_per_machine, std::span<const MachineProfile> machines,
                                         const ScheduleOptions& options, std::uint64_t seed) {
  check_machines(machines, n_runs_per_machine);
  options.validate();
  std::vector<ScheduleEntry> out;
  out.reserve(machines.size() * static_cast<std::size_t>(n_runs_per_machine));
  for (const auto& m : machines) {
    Rng rng(derive_seed(seed, "schedule-slow", m.machine_id));
    std::uniform_real_distribution<double> wall(options.slow_wall_min_s, options.slow_wall_max_s);
    double t = 0.0;
    for (int r = 0; r < n_runs_per_machine; ++r) {
      if (r > 0) {
        t += wall(rng) + options.slow_min_gap_s;
        for (const auto& a : options.anomalies) {
          if (r >= a.first_run && r <= a.last_run) t += a.extra_gap_s;
        }
      }
      out.push_back({m.machine_id, r, round_ms(t)});
    }
  }
  return out;
}

void Dataset::validate() const {
  auto corrupt = [](const std::string& why) { throw ValidationError("corrupt dataset: " + why); };
  if (shots < 1) corrupt("shots must be positive");
  for (const auto& p : profiles) {
    try {
      p.validate();
    } catch (const ValidationError& e) {
      corrupt(e.what());
    }
  }
  const auto expected_samples = static_cast<std::size_t>(sub_samples(protocol));
  std::string current;
  double last_t = 0.0;
  int last_id = -1;
  for (const Run& run : runs) {
    if (!has_machine(run.machine_id)) corrupt("undeclared machine '" + run.machine_id + "'");
    if (run.machine_id != current) {
      current = run.machine_id;
      last_t = 0.0;
      last_id = -1;
    }
    if (run.run_id <= last_id) corrupt("run ids not increasing for " + run.machine_id);
    if (!(run.timestamp >= last_t)) corrupt("timestamps decrease for " + run.machine_id);
    last_t = run.timestamp;
    last_id = run.run_id;
    if (run.shots != shots) corrupt("shots differ from manifest");
    if (run.samples.size() != expected_samples) corrupt("sample count does not match protocol");
    for (const auto& sample : run.samples) {
      for (const auto& d : sample) {
        if (!d.is_valid(1e-5)) corrupt("invalid outcome distribution");
      }
    }
  }
}

const MachineProfile& Dataset::profile(std::string_view machine_id) const {
  for (const auto& p : profiles) {
    if (p.machine_id == machine_id) return p;
  }
  throw ValidationError("machine '" + std::string(machine_id) + "' not in dataset");
}

bool Dataset::has_machine(std::string_view machine_id) const {
  return std::any_of(profiles.begin(), profiles.end(),
                     [&](const MachineProfile& p) { return p.machine_id == machine_id; });
}

std::vector<const Run*> Dataset::runs_of(std::string_view machine_id) const {
  std::vector<const Run*> out;
  for (const auto& r : runs) {
    if (r.machine_id == machine_id) out.push_back(&r);
  }
  return out;
}

Dataset generate_dataset(std::span<const MachineProfile> machines, const GenerateOptions& options) {
  check_machines(machines, options.n_runs_per_machine);
  if (options.shots < 1) throw ValidationError("empty sample");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    machines[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (machines[i].machine_id == machines[j].machine_id) {
        throw ValidationError("duplicate machine_id '" + machines[i].machine_id + "'");
      }
    }
  }

  Dataset ds;
  ds.protocol = options.protocol;
  ds.seed = options.seed;
  ds.epoch = options.epoch;
  ds.shots = options.shots;
  ds.schedule = options.schedule;
  ds.profiles.assign(machines.begin(), machines.end());

  const auto schedule = options.protocol == Protocol::Fast
                            ? schedule_fast(options.n_runs_per_machine, machines, options.schedule, options.seed)
                            : schedule_slow(options.n_runs_per_machine, machines, options.schedule, options.seed);
  const std::uint64_t calibration_seed = derive_seed(options.seed, "calibration");
  const int n_samples = sub_samples(options.protocol);

  ds.runs.resize(schedule.size());
  parallel_for(schedule.size(), [&](std::size_t i) {
    const ScheduleEntry& e = schedule[i];
    const MachineProfile& base = ds.profile(e.machine_id);
    Rng rng(derive_seed(options.seed, "run", e.machine_id, static_cast<std::uint64_t>(e.run_id)));
    const MachineProfile now = params_at(base, options.epoch + e.timestamp, rng, calibration_seed);
    const StepDistributions exact = noisy_distributions(now);

    Run& run = ds.runs[i];
    run.run_id = e.run_id;
    run.machine_id = e.machine_id;
    run.timestamp = e.timestamp;
    run.shots = options.shots;
    run.samples.resize(static_cast<std::size_t>(n_samples));
    for (auto& sample : run.samples) {
      for (std::size_t k = 0; k < sample.size(); ++k) {
        sample[k] = sim::sample_counts(exact[k], options.shots, rng);
      }
    }
  });
  return ds;
}

Dataset generate_dataset(std::span<const MachineProfile> machines, Protocol protocol,
                         int n_runs_per_machine, std::uint64_t seed) {
  GenerateOptions options;
  options.protocol = protocol;
  options.n_runs_per_machine = n_runs_per_machine;
  options.seed = seed;
  return generate_dataset(machines, options);
}

}  // namespace noisefp::acquisition
