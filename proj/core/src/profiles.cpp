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

#include "noisefp/acquisition.hpp"
#include "noisefp/error.hpp"

namespace noisefp::acquisition {
namespace {

struct Spec {
  const char* id;
  double t1_us[4];
  double t2_us[4];
  double cnot_ns;
  double toffoli_ns;
  double err_1q;
  double err_2q;
  double err_3q;
  double q3_flip01, q3_flip10, q2_flip01, q2_flip10;
  testbed::ToffoliStyle style;
};

// Seven devices. Readout flip rates are spread so that every pair differs
// within the first three steps even after drift; gate errors, coherence
// times and Toffoli implementations vary independently.
constexpr Spec kLibrary[] = {
    {"alder", {110, 95, 120, 100}, {90, 70, 140, 110}, 300, 1100, 2e-4, 0.006, 0.020,
     0.050, 0.004, 0.095, 0.005, testbed::ToffoliStyle::None},
    {"birch", {80, 70, 90, 85}, {60, 50, 100, 80}, 350, 1300, 4e-4, 0.010, 0.080,
     0.008, 0.004, 0.004, 0.095, testbed::ToffoliStyle::None},
    {"cedar", {60, 55, 65, 70}, {50, 40, 60, 55}, 420, 1500, 8e-4, 0.030, 0.090,
     0.004, 0.100, 0.095, 0.060, testbed::ToffoliStyle::Standard6Cnot},
    {"dogwood", {130, 140, 100, 115}, {120, 150, 90, 100}, 280, 1000, 3e-4, 0.008, 0.025,
     0.020, 0.085, 0.004, 0.004, testbed::ToffoliStyle::None},
    {"elm", {45, 50, 55, 40}, {30, 35, 45, 30}, 480, 1600, 1e-3, 0.025, 0.170,
     0.052, 0.100, 0.075, 0.100, testbed::ToffoliStyle::None},
    {"fir", {95, 85, 75, 90}, {100, 60, 70, 90}, 330, 1200, 5e-4, 0.005, 0.030,
     0.100, 0.095, 0.090, 0.050, testbed::ToffoliStyle::Standard6Cnot},
    {"ginkgo", {70, 65, 80, 60}, {40, 45, 70, 50}, 400, 1400, 1.5e-3, 0.040, 0.100,
     0.100, 0.004, 0.004, 0.100, testbed::ToffoliStyle::None},
};

MachineProfile build(const Spec& s) {
  MachineProfile p;
  p.machine_id = s.id;
  for (std::size_t q = 0; q < 4; ++q) {
    p.t1[q] = s.t1_us[q] * 1e-6;
    p.t2[q] = std::min(s.t2_us[q], 2.0 * s.t1_us[q]) * 1e-6;
  }
  p.gate_durations.single_qubit = 35e-9;
  p.gate_durations.cnot = s.cnot_ns * 1e-9;
  p.gate_durations.toffoli = s.toffoli_ns * 1e-9;
  p.err_1q = s.err_1q;
  p.err_2q = s.err_2q;
  p.err_3q = s.err_3q;
  p.readout = sim::ConfusionMatrix::from_qubit_flips(s.q3_flip01, s.q3_flip10, s.q2_flip01, s.q2_flip10);
  p.drift.relative_amplitude = 0.5;
  p.drift.period = 180.0 * 3600.0;
  p.drift.jitter_std = 0.01;
  p.drift.calibration_jump_std = 0.01;
  p.calibration_period = 3600.0;
  p.toffoli_style = s.style;
  return p;
}

}  // namespace

const std::vector<MachineProfile>& builtin_profiles() {
  static const std::vector<MachineProfile> library = [] {
    std::vector<MachineProfile> out;
    for (const Spec& s : kLibrary) out.push_back(build(s));
    return out;
  }();
  return library;
}

MachineProfile builtin_profile(std::string_view machine_id) {
  for (const auto& p : builtin_profiles()) {
    if (p.machine_id == machine_id) return p;
  }
  throw ValidationError("unknown machine profile '" + std::string(machine_id) + "'");
}

}  // namespace noisefp::acquisition
