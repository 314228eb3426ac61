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
#include <string>
#include <string_view>
#include <vector>

#include "noisefp/simulator.hpp"

// The 4-qubit transport circuit: one repetition moves a "particle" encoded in
// (q3, q2) using ancillas q0 and q1; three chained repetitions are measured
// at nine truncation points.

namespace noisefp::testbed {

inline constexpr int kNumSteps = 9;
inline constexpr int kRepetitions = 3;
inline constexpr int kGatesPerRepetition = 7;

/// One of the nine truncation points, 1..9.
class MeasurementStep {
 public:
  /// Throws ValidationError("invalid step") outside 1..9.
  explicit MeasurementStep(int k);
  int value() const { return k_; }
  auto operator<=>(const MeasurementStep&) const = default;

 private:
  int k_;
};

struct Circuit {
  std::vector<sim::Gate> gates;

  std::size_t size() const { return gates.size(); }
  bool operator==(const Circuit&) const = default;
};

/// Nominal gate durations in seconds. Phase gates are virtual (zero length).
struct GateDurations {
  double single_qubit = 35e-9;
  double cnot = 300e-9;
  double toffoli = 1.2e-6;
  double phase = 0.0;

  double of(sim::GateKind kind) const;
  bool operator==(const GateDurations&) const = default;
};

enum class ToffoliStyle { None, Standard6Cnot };

std::string_view to_string(ToffoliStyle style);
/// Accepts "none" and "standard-6-cnot"; throws ValidationError otherwise.
ToffoliStyle parse_toffoli_style(std::string_view name);

/// H(q0) H(q1) CNOT(q0->q2) CNOT(q1->q3) X(q0) X(q1) TOFFOLI(q0,q1->q2).
Circuit repetition_block(const GateDurations& durations = {});

/// Number of gates (of the undecomposed circuit) executed before step k is measured.
std::size_t prefix_length(MeasurementStep step);

/// Three chained repetitions, truncated after the gate that terminates `step`.
Circuit step_circuit(MeasurementStep step, const GateDurations& durations = {});

/// Replaces each Toffoli with the textbook 6-CNOT + H + T/T^dagger network.
Circuit decompose_toffoli(const Circuit& circuit, ToffoliStyle style,
                          const GateDurations& durations = {});

/// Noiseless (q3, q2) distribution at `step`, from a cached table.
const sim::OutcomeDistribution& ideal_distribution(MeasurementStep step);
const std::array<sim::OutcomeDistribution, kNumSteps>& ideal_distributions();

/// Line format: `KIND q... #duration_ns`, one gate per line.
std::string serialize(const Circuit& circuit);
/// Inverse of serialize(); blank lines are skipped. Throws ValidationError
/// with the offending line number on malformed input.
Circuit parse_circuit(std::string_view text);

}  // namespace noisefp::testbed
