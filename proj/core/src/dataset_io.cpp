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

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "noisefp/acquisition.hpp"
#include "noisefp/error.hpp"

namespace noisefp::acquisition {
namespace {

using nlohmann::json;

constexpr std::string_view kCsvHeader = "run_id,machine_id,timestamp_s,step,shots,p00,p01,p10,p11";
constexpr int kCsvFields = 9;

// JSON has no infinity; an infinite T1/T2 (no relaxation) is stored as null.
json time_constant(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

double time_constant(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json to_json(const MachineProfile& p) {
  json t1 = json::array();
  json t2 = json::array();
  for (std::size_t q = 0; q < p.t1.size(); ++q) {
    t1.push_back(time_constant(p.t1[q]));
    t2.push_back(time_constant(p.t2[q]));
  }
  json readout = json::array();
  for (const auto& row : p.readout.m) readout.push_back(row);
  return json{
      {"machine_id", p.machine_id},
      {"t1_s", t1},
      {"t2_s", t2},
      {"gate_durations_s",
       {{"single_qubit", p.gate_durations.single_qubit},
        {"cnot", p.gate_durations.cnot},
        {"toffoli", p.gate_durations.toffoli},
        {"phase", p.gate_durations.phase}}},
      {"err_1q", p.err_1q},
      {"err_2q", p.err_2q},
      {"err_3q", p.err_3q},
      {"readout", readout},
      {"drift",
       {{"relative_amplitude", p.drift.relative_amplitude},
        {"period_s", p.drift.period},
        {"jitter_std", p.drift.jitter_std},
        {"calibration_jump_std", p.drift.calibration_jump_std}}},
      {"calibration_period_s", p.calibration_period},
      {"toffoli_style", std::string(testbed::to_string(p.toffoli_style))},
  };
}

MachineProfile profile_from_json(const json& j) {
  MachineProfile p;
  p.machine_id = j.at("machine_id").get<std::string>();
  const auto& t1 = j.at("t1_s");
  const auto& t2 = j.at("t2_s");
  if (t1.size() != p.t1.size() || t2.size() != p.t2.size()) {
    throw ValidationError(p.machine_id + ": t1_s/t2_s need one entry per qubit");
  }
  for (std::size_t q = 0; q < p.t1.size(); ++q) {
    p.t1[q] = time_constant(t1[q]);
    p.t2[q] = time_constant(t2[q]);
  }
  if (j.contains("gate_durations_s")) {
    const auto& d = j.at("gate_durations_s");
    p.gate_durations.single_qubit = d.value("single_qubit", p.gate_durations.single_qubit);
    p.gate_durations.cnot = d.value("cnot", p.gate_durations.cnot);
    p.gate_durations.toffoli = d.value("toffoli", p.gate_durations.toffoli);
    p.gate_durations.phase = d.value("phase", p.gate_durations.phase);
  }
  p.err_1q = j.at("err_1q").get<double>();
  p.err_2q = j.at("err_2q").get<double>();
  p.err_3q = j.at("err_3q").get<double>();
  if (j.contains("readout")) {
    const auto& r = j.at("readout");
    if (r.size() != 4) throw ValidationError(p.machine_id + ": readout must be 4x4");
    for (std::size_t i = 0; i < 4; ++i) {
      if (r[i].size() != 4) throw ValidationError(p.machine_id + ": readout must be 4x4");
      for (std::size_t k = 0; k < 4; ++k) p.readout.m[i][k] = r[i][k].get<double>();
    }
  }
  if (j.contains("drift")) {
    const auto& d = j.at("drift");
    p.drift.relative_amplitude = d.value("relative_amplitude", 0.0);
    p.drift.period = d.value("period_s", p.drift.period);
    p.drift.jitter_std = d.value("jitter_std", 0.0);
    p.drift.calibration_jump_std = d.value("calibration_jump_std", 0.0);
  }
  p.calibration_period = j.value("calibration_period_s", p.calibration_period);
  p.toffoli_style = testbed::parse_toffoli_style(j.value("toffoli_style", std::string("none")));
  p.validate();
  return p;
}

json to_json(const ScheduleOptions& s) {
  json anomalies = json::array();
  for (const auto& a : s.anomalies) {
    anomalies.push_back({{"first_run", a.first_run}, {"last_run", a.last_run}, {"extra_gap_s", a.extra_gap_s}});
  }
  return json{{"parallel_slots", s.parallel_slots},     {"fast_wall_min_s", s.fast_wall_min_s},
              {"fast_wall_max_s", s.fast_wall_max_s},   {"slow_wall_min_s", s.slow_wall_min_s},
              {"slow_wall_max_s", s.slow_wall_max_s},   {"slow_min_gap_s", s.slow_min_gap_s},
              {"anomalies", anomalies}};
}

ScheduleOptions schedule_from_json(const json& j) {
  ScheduleOptions s;
  s.parallel_slots = j.value("parallel_slots", s.parallel_slots);
  s.fast_wall_min_s = j.value("fast_wall_min_s", s.fast_wall_min_s);
  s.fast_wall_max_s = j.value("fast_wall_max_s", s.fast_wall_max_s);
  s.slow_wall_min_s = j.value("slow_wall_min_s", s.slow_wall_min_s);
  s.slow_wall_max_s = j.value("slow_wall_max_s", s.slow_wall_max_s);
  s.slow_min_gap_s = j.value("slow_min_gap_s", s.slow_min_gap_s);
  if (j.contains("anomalies")) {
    s.anomalies.clear();
    for (const auto& a : j.at("anomalies")) {
      s.anomalies.push_back({a.at("first_run").get<int>(), a.at("last_run").get<int>(),
                             a.at("extra_gap_s").get<double>()});
    }
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
  if (!out) throw ValidationError("failed writing " + path.string());
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::string profiles_to_json(std::span<const MachineProfile> profiles) {
  json arr = json::array();
  for (const auto& p : profiles) arr.push_back(to_json(p));
  return arr.dump(2) + "\n";
}

std::vector<MachineProfile> profiles_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("profile file: ") + e.what());
  }
  if (j.is_object()) j = json::array({j});
  std::vector<MachineProfile> out;
  try {
    for (const auto& item : j) out.push_back(profile_from_json(item));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("profile file: ") + e.what());
  }
  return out;
}

std::string format_manifest(const Dataset& ds) {
  json profiles = json::array();
  for (const auto& p : ds.profiles) profiles.push_back(to_json(p));
  const json manifest{
      {"format", "noisefp-dataset"},
      {"version", 1},
      {"protocol", std::string(to_string(ds.protocol))},
      {"seed", ds.seed},
      {"epoch_s", ds.epoch},
      {"shots", ds.shots},
      {"sub_samples", sub_samples(ds.protocol)},
      {"runs_file", "runs.csv"},
      {"schedule", to_json(ds.schedule)},
      {"profiles", profiles},
  };
  return manifest.dump(2) + "\n";
}

std::string format_runs_csv(const Dataset& ds) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const Run& run : ds.runs) {
    for (const auto& sample : run.samples) {
      for (std::size_t k = 0; k < sample.size(); ++k) {
        const auto& d = sample[k];
        out += fmt::format("{},{},{:.3f},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", run.run_id, run.machine_id,
                           run.timestamp, k + 1, run.shots, d[0], d[1], d[2], d[3]);
      }
    }
  }
  return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  ds.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "runs.csv", format_runs_csv(ds));
  write_file(dir / "manifest.json", format_manifest(ds));
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  try {
    const json m = json::parse(read_file(dir / "manifest.json"));
    if (m.value("format", std::string()) != "noisefp-dataset") {
      throw ValidationError("manifest.json: not a noisefp dataset");
    }
    ds.protocol = parse_protocol(m.at("protocol").get<std::string>());
    ds.seed = m.at("seed").get<std::uint64_t>();
    ds.epoch = m.value("epoch_s", 0.0);
    ds.shots = m.at("shots").get<std::int64_t>();
    ds.schedule = schedule_from_json(m.value("schedule", json::object()));
    for (const auto& p : m.at("profiles")) ds.profiles.push_back(profile_from_json(p));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest.json: ") + e.what());
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("manifest.json", 0) == 0 || what.rfind("cannot open", 0) == 0) throw;
    throw ValidationError("manifest.json: " + what);
  }

  const std::string text = read_file(dir / "runs.csv");
  const auto per_run_rows = static_cast<std::size_t>(sub_samples(ds.protocol) * testbed::kNumSteps);
  std::string_view rest = text;
  std::size_t line_no = 0;
  std::size_t rows_in_run = 0;

  auto finish_run = [&]() {
    if (ds.runs.empty()) return;
    if (rows_in_run != per_run_rows) {
      throw ValidationError(fmt::format("corrupt dataset: run {} of {} has {} rows, expected {}",
                                        ds.runs.back().run_id, ds.runs.back().machine_id, rows_in_run,
                                        per_run_rows));
    }
  };

  while (!rest.empty()) {
    ++line_no;
    const auto nl = rest.find('\n');
    if (nl == std::string_view::npos) {
      throw ValidationError(fmt::format("runs.csv line {}: truncated record (no trailing newline)", line_no));
    }
    const std::string_view line = rest.substr(0, nl);
    rest.remove_prefix(nl + 1);
    auto fail = [&](std::string_view why) {
      throw ValidationError(fmt::format("runs.csv line {}: {}", line_no, why));
    };

    if (line_no == 1) {
      if (line != kCsvHeader) fail("unexpected header");
      continue;
    }

    std::array<std::string_view, kCsvFields> f;
    std::size_t n = 0;
    std::string_view cursor = line;
    while (true) {
      const auto comma = cursor.find(',');
      if (n == f.size()) fail("too many fields");
      f[n++] = cursor.substr(0, comma);
      if (comma == std::string_view::npos) break;
      cursor.remove_prefix(comma + 1);
    }
    if (n != f.size()) fail(fmt::format("expected {} fields, found {}", kCsvFields, n));

    int run_id = 0;
    int step = 0;
    std::int64_t shots = 0;
    double timestamp = 0.0;
    sim::OutcomeDistribution d;
    if (!parse_number(f[0], run_id)) fail("bad run_id");
    if (f[1].empty()) fail("empty machine_id");
    if (!parse_number(f[2], timestamp)) fail("bad timestamp_s");
    if (!parse_number(f[3], step)) fail("bad step");
    if (!parse_number(f[4], shots)) fail("bad shots");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!parse_number(f[5 + i], d.p[i])) fail("bad probability");
    }

    const bool new_run = ds.runs.empty() || ds.runs.back().run_id != run_id ||
                         ds.runs.back().machine_id != f[1] || rows_in_run == per_run_rows;
    if (new_run) {
      finish_run();
      Run r;
      r.run_id = run_id;
      r.machine_id = std::string(f[1]);
      r.timestamp = timestamp;
      r.shots = shots;
      ds.runs.push_back(std::move(r));
      rows_in_run = 0;
    }
    Run& run = ds.runs.back();
    if (run.timestamp != timestamp) fail("timestamp differs within a run");
    if (run.shots != shots) fail("shots differ within a run");
    const std::size_t expected_step = rows_in_run % testbed::kNumSteps + 1;
    if (static_cast<std::size_t>(step) != expected_step) {
      fail(fmt::format("expected step {}, found {}", expected_step, step));
    }
    if (expected_step == 1) run.samples.emplace_back();
    run.samples.back()[expected_step - 1] = d;
    ++rows_in_run;
  }
  if (line_no == 0) throw ValidationError("runs.csv line 1: missing header");
  finish_run();
  ds.validate();
  return ds;
}

}  // namespace noisefp::acquisition
