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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "noisefp/acquisition.hpp"
#include "noisefp/error.hpp"
#include "noisefp/testbed.hpp"

namespace noisefp::acquisition {
namespace {

namespace fs = std::filesystem;
using testbed::MeasurementStep;

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("noisefp_acq_" + std::to_string(::getpid()) + "_" +
                                                  std::to_string(counter_++))) {
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

MachineProfile drifting(double amplitude, double period) {
  MachineProfile p = builtin_profile("birch");
  p.drift = DriftSpec{amplitude, period, 0.0, 0.0};
  return p;
}

TEST(Profiles, BuiltinLibraryIsValidAndVaried) {
  const auto& all = builtin_profiles();
  ASSERT_GE(all.size(), 7u);
  bool has_none = false;
  bool has_decomposed = false;
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& p : all) {
    EXPECT_NO_THROW(p.validate()) << p.machine_id;
    has_none = has_none || p.toffoli_style == testbed::ToffoliStyle::None;
    has_decomposed = has_decomposed || p.toffoli_style == testbed::ToffoliStyle::Standard6Cnot;
    lo = std::min(lo, p.err_2q);
    hi = std::max(hi, p.err_2q);
    for (const auto& q : all) {
      if (&p != &q) EXPECT_NE(p.readout, q.readout) << p.machine_id << " vs " << q.machine_id;
    }
  }
  EXPECT_TRUE(has_none && has_decomposed);
  EXPECT_GE(hi / lo, 3.0);
  EXPECT_EQ(builtin_profile("alder").machine_id, "alder");
  EXPECT_EQ(message_of([] { builtin_profile("oak"); }), "unknown machine profile 'oak'");
}

TEST(Profiles, ValidationMessages) {
  MachineProfile p = builtin_profile("alder");
  p.t2[1] = 2.5 * p.t1[1];
  EXPECT_EQ(message_of([&] { p.validate(); }), "alder: unphysical T2");
  p = builtin_profile("alder");
  p.err_2q = 1.5;
  EXPECT_EQ(message_of([&] { p.validate(); }), "alder: error rates must lie in [0, 1]");
  p = builtin_profile("alder");
  p.calibration_period = 0.0;
  EXPECT_EQ(message_of([&] { p.validate(); }), "alder: calibration_period must be positive");
  p = builtin_profile("alder");
  p.drift.relative_amplitude = 0.6;
  EXPECT_EQ(message_of([&] { p.validate(); }), "drift relative_amplitude must lie in [0, 0.5]");
  p = builtin_profile("alder");
  p.drift.period = 0.0;
  EXPECT_EQ(message_of([&] { p.validate(); }), "drift period must be positive");
  p = builtin_profile("alder");
  p.drift.jitter_std = -0.1;
  EXPECT_EQ(message_of([&] { p.validate(); }), "drift standard deviations must be non-negative");
}

TEST(Profiles, JsonRoundTrip) {
  const auto& all = builtin_profiles();
  const std::string text = profiles_to_json(all);
  const auto back = profiles_from_json(text);
  ASSERT_EQ(back.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(back[i], all[i]);
  EXPECT_THROW(profiles_from_json("{not json"), ValidationError);
  EXPECT_THROW(profiles_from_json("[{\"machine_id\": \"x\"}]"), ValidationError);
}

TEST(Drift, StaticDeviceIsUnchanged) {
  MachineProfile p = builtin_profile("cedar");
  p.drift = DriftSpec{};
  Rng rng(1);
  for (double t : {0.0, 1234.5, 86400.0, 1e7}) EXPECT_EQ(params_at(p, t, rng), p);
}

TEST(Drift, SinePeakAtQuarterPeriod) {
  const MachineProfile p = drifting(0.1, 1000.0);
  Rng rng(0);
  EXPECT_NEAR(drift_factor(p, 250.0, rng), 1.1, 1e-15);
  EXPECT_NEAR(drift_factor(p, 750.0, rng), 0.9, 1e-15);
  EXPECT_NEAR(drift_factor(p, 0.0, rng), 1.0, 1e-15);
}

TEST(Drift, SameSeedSameParameters) {
  MachineProfile p = drifting(0.3, 5000.0);
  p.drift.jitter_std = 0.05;
  p.drift.calibration_jump_std = 0.05;
  Rng a(42);
  Rng b(42);
  EXPECT_EQ(params_at(p, 777.0, a, 9), params_at(p, 777.0, b, 9));
}

TEST(Drift, CalibrationOffsetIsPiecewiseConstant) {
  MachineProfile p = builtin_profile("elm");
  p.drift.calibration_jump_std = 0.2;
  p.calibration_period = 3600.0;
  const double a = calibration_offset(p, 10.0, 5);
  EXPECT_EQ(calibration_offset(p, 3599.0, 5), a);
  EXPECT_NE(calibration_offset(p, 3600.0, 5), a);
  EXPECT_NE(calibration_offset(p, 10.0, 6), a);
  p.drift.calibration_jump_std = 0.0;
  EXPECT_EQ(calibration_offset(p, 10.0, 5), 0.0);
}

TEST(Drift, JitterDrawsOnlyWhenEnabled) {
  MachineProfile p = drifting(0.0, 1000.0);
  Rng rng(3);
  const Rng before = rng;
  drift_factor(p, 10.0, rng);
  EXPECT_EQ(rng, before);
  p.drift.jitter_std = 0.1;
  EXPECT_NE(drift_factor(p, 10.0, rng), 1.0);
}

TEST(ScaleNoise, ScalesRatesAndInverseTimes) {
  const MachineProfile p = builtin_profile("ginkgo");
  const MachineProfile s = scale_noise(p, 1.5);
  EXPECT_DOUBLE_EQ(s.err_1q, p.err_1q * 1.5);
  EXPECT_DOUBLE_EQ(s.err_2q, p.err_2q * 1.5);
  EXPECT_DOUBLE_EQ(s.err_3q, p.err_3q * 1.5);
  for (std::size_t q = 0; q < s.t1.size(); ++q) {
    EXPECT_DOUBLE_EQ(s.t1[q], p.t1[q] / 1.5);
    EXPECT_LE(s.t2[q], 2.0 * s.t1[q]);
  }
  EXPECT_DOUBLE_EQ(s.readout.m[0][1], p.readout.m[0][1] * 1.5);
  EXPECT_TRUE(s.readout.is_valid());
  EXPECT_EQ(scale_noise(p, 1.0), p);
}

TEST(ScaleNoise, ClampsLargeFactors) {
  const MachineProfile s = scale_noise(builtin_profile("elm"), 50.0);
  EXPECT_LE(s.err_3q, 1.0);
  EXPECT_TRUE(s.readout.is_valid());
  EXPECT_NO_THROW(s.validate());
  const MachineProfile z = scale_noise(builtin_profile("elm"), 0.0);
  EXPECT_EQ(z.err_2q, 0.0);
  EXPECT_TRUE(std::isinf(z.t1[0]));
}

TEST(NoisyDistributions, SinglePassMatchesPerStepCircuits) {
  for (const char* id : {"alder", "cedar"}) {
    const MachineProfile p = builtin_profile(id);
    const StepDistributions all = noisy_distributions(p);
    for (int k = 1; k <= testbed::kNumSteps; ++k) {
      const auto one = noisy_distribution(p, MeasurementStep(k));
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(all[static_cast<std::size_t>(k - 1)][i], one[i], 1e-13) << id << " step " << k;
      }
    }
  }
}

TEST(NoisyDistributions, ZeroNoiseGivesIdealTable) {
  const StepDistributions all = noisy_distributions(zero_noise_profile());
  for (int k = 1; k <= testbed::kNumSteps; ++k) {
    const auto& want = testbed::ideal_distribution(MeasurementStep(k));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(all[static_cast<std::size_t>(k - 1)][i], want[i], 1e-13);
  }
}

TEST(ExecuteStep, ZeroNoiseConvergesToIdeal) {
  const MachineProfile ideal = zero_noise_profile();
  Rng rng(17);
  const auto big = execute_step(ideal, MeasurementStep(3), 1000000, rng);
  EXPECT_NEAR(big[0], 0.0, 0.005);
  EXPECT_NEAR(big[1], 0.5, 0.005);
  EXPECT_NEAR(big[2], 0.25, 0.005);
  EXPECT_NEAR(big[3], 0.25, 0.005);
  const auto step1 = execute_step(ideal, MeasurementStep(1), 1000, rng);
  EXPECT_LT(step1[2] + step1[3], 0.001);
  Rng a(5);
  Rng b(5);
  EXPECT_EQ(execute_step(builtin_profile("fir"), MeasurementStep(7), 1000, a),
            execute_step(builtin_profile("fir"), MeasurementStep(7), 1000, b));
  EXPECT_EQ(message_of([&] { execute_step(ideal, MeasurementStep(1), 0, rng); }), "empty sample");
}

TEST(Protocol, Names) {
  EXPECT_EQ(parse_protocol("fast"), Protocol::Fast);
  EXPECT_EQ(parse_protocol(to_string(Protocol::Slow)), Protocol::Slow);
  EXPECT_EQ(message_of([] { parse_protocol("medium"); }), "unknown protocol 'medium' (expected fast or slow)");
}

TEST(Schedule, FastSlotsStartTogether) {
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  const auto twenty = schedule_fast(20, m);
  for (const auto& e : twenty) EXPECT_EQ(e.timestamp, 0.0);
  const auto forty = schedule_fast(40, m);
  ASSERT_EQ(forty.size(), 40u);
  EXPECT_GT(forty[20].timestamp, 0.0);
  ScheduleOptions o;
  EXPECT_GE(forty[20].timestamp, o.fast_wall_min_s - 1e-3);
  EXPECT_LE(forty[20].timestamp, o.fast_wall_max_s + 1e-3);
  for (std::size_t i = 1; i < forty.size(); ++i) EXPECT_GE(forty[i].timestamp, forty[i - 1].timestamp);
}

TEST(Schedule, FirstQueuedTaskTakesEarliestCompletion) {
  ScheduleOptions o;
  o.parallel_slots = 2;
  o.fast_wall_min_s = 10.0;
  o.fast_wall_max_s = 10.0;
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  const auto s = schedule_fast(5, m, o);
  const std::vector<double> want{0.0, 0.0, 10.0, 10.0, 20.0};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(s[i].timestamp, want[i]);
}

TEST(Schedule, SlowGapsAndSpan) {
  const std::vector<MachineProfile> m{builtin_profile("alder"), builtin_profile("birch")};
  const auto s = schedule_slow(2000, m, {}, 3);
  ASSERT_EQ(s.size(), 4000u);
  double span = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].machine_id != s[i - 1].machine_id) continue;
    EXPECT_GE(s[i].timestamp - s[i - 1].timestamp, 120.0 - 1e-3);
    span = std::max(span, s[i].timestamp);
  }
  EXPECT_GT(span / 3600.0, 60.0);
  EXPECT_EQ(schedule_slow(1, m).front().timestamp, 0.0);
}

TEST(Schedule, AboutNinetyRunsPerSixHours) {
  ScheduleOptions o;
  o.anomalies.clear();
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  const auto s = schedule_slow(1000, m, o, 1);
  const double hours = s.back().timestamp / 3600.0;
  EXPECT_NEAR(999.0 / hours * 6.0, 90.0, 5.0);
}

TEST(Schedule, QueueAnomalyInflatesGaps) {
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  ScheduleOptions plain;
  plain.anomalies.clear();
  const auto a = schedule_slow(30, m, plain, 1);
  ScheduleOptions slowed = plain;
  slowed.anomalies.push_back({10, 19, 500.0});
  const auto b = schedule_slow(30, m, slowed, 1);
  EXPECT_DOUBLE_EQ(b[9].timestamp, a[9].timestamp);
  EXPECT_NEAR(b[29].timestamp - a[29].timestamp, 5000.0, 1e-6);
}

TEST(Schedule, Errors) {
  const std::vector<MachineProfile> none;
  const std::vector<MachineProfile> one{builtin_profile("alder")};
  EXPECT_EQ(message_of([&] { schedule_fast(5, none); }), "empty machine list");
  EXPECT_EQ(message_of([&] { schedule_slow(5, none); }), "empty machine list");
  EXPECT_EQ(message_of([&] { schedule_slow(0, one); }), "n_runs_per_machine must be at least 1");
  ScheduleOptions o;
  o.parallel_slots = 0;
  EXPECT_EQ(message_of([&] { schedule_fast(5, one, o); }), "parallel_slots must be at least 1");
}

TEST(Generate, ShapesPerProtocol) {
  const std::vector<MachineProfile> two{builtin_profile("alder"), builtin_profile("birch")};
  const Dataset slow = generate_dataset(two, Protocol::Slow, 25, 1);
  ASSERT_EQ(slow.runs.size(), 50u);
  for (const auto& r : slow.runs) {
    EXPECT_EQ(r.samples.size(), 1u);
    EXPECT_EQ(r.shots, 1000);
  }
  EXPECT_EQ(slow.runs_of("birch").size(), 25u);
  const std::vector<MachineProfile> one{builtin_profile("cedar")};
  const Dataset fast = generate_dataset(one, Protocol::Fast, 10, 1);
  ASSERT_EQ(fast.runs.size(), 10u);
  for (const auto& r : fast.runs) EXPECT_EQ(r.samples.size(), 8u);
  EXPECT_NO_THROW(fast.validate());
}

TEST(Generate, DeterministicAndSeedSensitive) {
  const std::vector<MachineProfile> m{builtin_profile("dogwood"), builtin_profile("elm")};
  const Dataset a = generate_dataset(m, Protocol::Slow, 15, 8);
  const Dataset b = generate_dataset(m, Protocol::Slow, 15, 8);
  const Dataset c = generate_dataset(m, Protocol::Slow, 15, 9);
  EXPECT_EQ(format_runs_csv(a), format_runs_csv(b));
  EXPECT_EQ(format_manifest(a), format_manifest(b));
  EXPECT_NE(format_runs_csv(a), format_runs_csv(c));
}

TEST(Generate, Errors) {
  const std::vector<MachineProfile> dup{builtin_profile("alder"), builtin_profile("alder")};
  EXPECT_EQ(message_of([&] { generate_dataset(dup, Protocol::Slow, 2, 0); }), "duplicate machine_id 'alder'");
  const std::vector<MachineProfile> none;
  EXPECT_EQ(message_of([&] { generate_dataset(none, Protocol::Slow, 2, 0); }), "empty machine list");
  GenerateOptions o;
  o.shots = 0;
  const std::vector<MachineProfile> one{builtin_profile("alder")};
  EXPECT_EQ(message_of([&] { generate_dataset(one, o); }), "empty sample");
}

TEST(Generate, ErrorRateSeparationIsVisible) {
  MachineProfile lo = zero_noise_profile("lo");
  MachineProfile hi = zero_noise_profile("hi");
  hi.err_2q = 0.08;
  const std::vector<MachineProfile> m{lo, hi};
  const Dataset ds = generate_dataset(m, Protocol::Slow, 200, 4);
  auto mean_step3 = [&](const std::string& id) {
    std::array<double, 4> mean{};
    for (const acquisition::Run* r : ds.runs_of(id)) {
      for (std::size_t i = 0; i < 4; ++i) mean[i] += r->samples[0][2][i] / 200.0;
    }
    return mean;
  };
  const auto a = mean_step3("lo");
  const auto b = mean_step3("hi");
  bool separated = false;
  for (std::size_t i = 0; i < 4; ++i) {
    const double se = std::sqrt((a[i] * (1 - a[i]) + b[i] * (1 - b[i])) / (1000.0 * 200.0));
    separated = separated || std::abs(a[i] - b[i]) > 3.0 * se;
  }
  EXPECT_TRUE(separated);
}

TEST(Generate, DriftIsVisibleAcrossTheDataset) {
  const std::vector<MachineProfile> m{builtin_profile("ginkgo")};
  const Dataset ds = generate_dataset(m, Protocol::Slow, 2000, 6);
  const auto runs = ds.runs_of("ginkgo");
  auto mean = [&](std::size_t from, std::size_t to, std::size_t step) {
    std::array<double, 4> out{};
    for (std::size_t r = from; r < to; ++r) {
      for (std::size_t i = 0; i < 4; ++i) out[i] += runs[r]->samples[0][step][i] / static_cast<double>(to - from);
    }
    return out;
  };
  bool separated = false;
  for (std::size_t step = 0; step < 9; ++step) {
    const auto a = mean(0, 200, step);
    const auto b = mean(1800, 2000, step);
    for (std::size_t i = 0; i < 4; ++i) {
      const double se = std::sqrt((a[i] * (1 - a[i]) + b[i] * (1 - b[i])) / (1000.0 * 200.0));
      separated = separated || std::abs(a[i] - b[i]) > 3.0 * se;
    }
  }
  EXPECT_TRUE(separated);
}

TEST(DatasetIo, SaveLoadRoundTrip) {
  TempDir dir;
  const std::vector<MachineProfile> m{builtin_profile("alder"), builtin_profile("fir")};
  GenerateOptions o;
  o.protocol = Protocol::Fast;
  o.n_runs_per_machine = 6;
  o.seed = 77;
  o.epoch = 3600.0;
  const Dataset ds = generate_dataset(m, o);
  save_dataset(ds, dir.path());
  const Dataset back = load_dataset(dir.path());
  EXPECT_EQ(back, ds);
  EXPECT_EQ(slurp(dir.path() / "runs.csv"), format_runs_csv(ds));
}

TEST(DatasetIo, SixDecimalPrecision) {
  TempDir dir;
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  GenerateOptions o;
  o.n_runs_per_machine = 3;
  o.shots = 7;  // frequencies k/7 are not exact in six decimals
  const Dataset ds = generate_dataset(m, o);
  save_dataset(ds, dir.path());
  const Dataset back = load_dataset(dir.path());
  ASSERT_EQ(back.runs.size(), ds.runs.size());
  for (std::size_t r = 0; r < ds.runs.size(); ++r) {
    for (std::size_t k = 0; k < 9; ++k) {
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(back.runs[r].samples[0][k][i], ds.runs[r].samples[0][k][i], 5e-7);
      }
    }
  }
}

TEST(DatasetIo, CorruptFilesAreRejected) {
  TempDir dir;
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  const Dataset ds = generate_dataset(m, Protocol::Slow, 3, 1);
  save_dataset(ds, dir.path());
  const std::string csv = slurp(dir.path() / "runs.csv");

  spit(dir.path() / "runs.csv", csv.substr(0, csv.size() - 1));
  EXPECT_EQ(message_of([&] { load_dataset(dir.path()); }), "runs.csv line 28: truncated record (no trailing newline)");

  // Header, two complete runs, then one row of the third.
  std::size_t cut = 0;
  for (int line = 0; line < 20; ++line) cut = csv.find('\n', cut) + 1;
  spit(dir.path() / "runs.csv", csv.substr(0, cut));
  EXPECT_EQ(message_of([&] { load_dataset(dir.path()); }), "corrupt dataset: run 2 of alder has 1 rows, expected 9");

  std::string bad = csv;
  bad.replace(bad.find("\n0,alder,") + 1, 1, "x");
  spit(dir.path() / "runs.csv", bad);
  EXPECT_EQ(message_of([&] { load_dataset(dir.path()); }), "runs.csv line 2: bad run_id");

  spit(dir.path() / "runs.csv", "");
  EXPECT_EQ(message_of([&] { load_dataset(dir.path()); }), "runs.csv line 1: missing header");

  spit(dir.path() / "runs.csv", csv);
  bad = csv;
  std::replace(bad.begin(), bad.end(), 'a', 'o');  // "alder" -> "older"; no longer declared
  spit(dir.path() / "runs.csv", bad);
  EXPECT_EQ(message_of([&] { load_dataset(dir.path()); }).rfind("runs.csv line 1", 0), 0u);

  spit(dir.path() / "runs.csv", csv);
  spit(dir.path() / "manifest.json", "{}");
  EXPECT_EQ(message_of([&] { load_dataset(dir.path()); }).rfind("manifest.json: ", 0), 0u);
  EXPECT_THROW(load_dataset(dir.path() / "missing"), ValidationError);
}

TEST(DatasetIo, UndeclaredMachineIsCorrupt) {
  const std::vector<MachineProfile> m{builtin_profile("alder")};
  Dataset ds = generate_dataset(m, Protocol::Slow, 2, 1);
  ds.runs[1].machine_id = "zelkova";
  EXPECT_EQ(message_of([&] { ds.validate(); }), "corrupt dataset: undeclared machine 'zelkova'");
  EXPECT_EQ(message_of([&] { ds.profile("zelkova"); }), "machine 'zelkova' not in dataset");
}

}  // namespace
}  // namespace noisefp::acquisition
