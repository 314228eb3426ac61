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

#include "noisefp/testbed.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "noisefp/error.hpp"

namespace noisefp::testbed {
namespace {

using sim::Gate;
using sim::GateKind;

Gate make(GateKind kind, std::vector<int> qubits, const GateDurations& d) {
  return Gate{kind, std::move(qubits), d.of(kind)};
}

Circuit full_circuit(const GateDurations& durations) {
  Circuit out;
  const Circuit block = repetition_block(durations);
  for (int r = 0; r < kRepetitions; ++r) {
    out.gates.insert(out.gates.end(), block.gates.begin(), block.gates.end());
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

MeasurementStep::MeasurementStep(int k) : k_(k) {
  if (k < 1 || k > kNumSteps) throw ValidationError("invalid step");
}

double GateDurations::of(GateKind kind) const {
  switch (kind) {
    case GateKind::H:
    case GateKind::X: return single_qubit;
    case GateKind::T:
    case GateKind::Tdg: return phase;
    case GateKind::CNOT: return cnot;
    case GateKind::Toffoli: return toffoli;
  }
  return 0.0;
}

std::string_view to_string(ToffoliStyle style) {
  return style == ToffoliStyle::None ? "none" : "standard-6-cnot";
}

ToffoliStyle parse_toffoli_style(std::string_view name) {
  if (name == "none") return ToffoliStyle::None;
  if (name == "standard-6-cnot") return ToffoliStyle::Standard6Cnot;
  throw ValidationError("unknown decomposition style '" + std::string(name) + "'");
}

Circuit repetition_block(const GateDurations& d) {
  return Circuit{{
      make(GateKind::H, {0}, d),
      make(GateKind::H, {1}, d),
      make(GateKind::CNOT, {0, 2}, d),
      make(GateKind::CNOT, {1, 3}, d),
      make(GateKind::X, {0}, d),
      make(GateKind::X, {1}, d),
      make(GateKind::Toffoli, {0, 1, 2}, d),
  }};
}

std::size_t prefix_length(MeasurementStep step) {
  // Within a repetition the terminators are the two CNOTs (gates 3, 4) and
  // the Toffoli (gate 7); the X gates ride along with the Toffoli step.
  static constexpr std::array<std::size_t, 3> kTerminators{3, 4, 7};
  const int k = step.value() - 1;
  return static_cast<std::size_t>(k / 3) * kGatesPerRepetition +
         kTerminators[static_cast<std::size_t>(k % 3)];
}

Circuit step_circuit(MeasurementStep step, const GateDurations& durations) {
  Circuit full = full_circuit(durations);
  full.gates.resize(prefix_length(step));
  return full;
}

Circuit decompose_toffoli(const Circuit& circuit, ToffoliStyle style, const GateDurations& d) {
  if (style == ToffoliStyle::None) return circuit;
  Circuit out;
  out.gates.reserve(circuit.size() + 16);
  for (const Gate& g : circuit.gates) {
    if (g.kind != GateKind::Toffoli) {
      out.gates.push_back(g);
      continue;
    }
    const int a = g.qubits[0];
    const int b = g.qubits[1];
    const int c = g.qubits[2];
    const std::initializer_list<Gate> network{
        make(GateKind::H, {c}, d),       make(GateKind::CNOT, {b, c}, d),
        make(GateKind::Tdg, {c}, d),     make(GateKind::CNOT, {a, c}, d),
        make(GateKind::T, {c}, d),       make(GateKind::CNOT, {b, c}, d),
        make(GateKind::Tdg, {c}, d),     make(GateKind::CNOT, {a, c}, d),
        make(GateKind::T, {b}, d),       make(GateKind::T, {c}, d),
        make(GateKind::H, {c}, d),       make(GateKind::CNOT, {a, b}, d),
        make(GateKind::T, {a}, d),       make(GateKind::Tdg, {b}, d),
        make(GateKind::CNOT, {a, b}, d),
    };
    out.gates.insert(out.gates.end(), network.begin(), network.end());
  }
  return out;
}

const std::array<sim::OutcomeDistribution, kNumSteps>& ideal_distributions() {
  static const auto table = [] {
    std::array<sim::OutcomeDistribution, kNumSteps> out;
    for (int k = 1; k <= kNumSteps; ++k) {
      const Circuit c = step_circuit(MeasurementStep(k));
      out[static_cast<std::size_t>(k - 1)] = sim::measure_pair(sim::run_circuit(c.gates));
    }
    return out;
  }();
  return table;
}

const sim::OutcomeDistribution& ideal_distribution(MeasurementStep step) {
  return ideal_distributions()[static_cast<std::size_t>(step.value() - 1)];
}

std::string serialize(const Circuit& circuit) {
  std::string out;
  for (const Gate& g : circuit.gates) {
    out += sim::to_string(g.kind);
    for (int q : g.qubits) out += fmt::format(" {}", q);
    out += fmt::format(" #{}\n", std::llround(g.duration * 1e9));
  }
  return out;
}

Circuit parse_circuit(std::string_view text) {
  Circuit out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;

    auto fail = [&](const std::string& why) {
      throw ValidationError(fmt::format("circuit line {}: {}", line_no, why));
    };
    const auto hash = line.find('#');
    if (hash == std::string_view::npos) fail("missing #duration_ns");
    std::string_view body = trim(line.substr(0, hash));
    std::string_view dur = trim(line.substr(hash + 1));

    Gate g;
    const auto sp = body.find(' ');
    try {
      g.kind = sim::parse_gate_kind(body.substr(0, sp));
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    body = sp == std::string_view::npos ? std::string_view{} : trim(body.substr(sp));
    while (!body.empty()) {
      int q = 0;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), q);
      if (ec != std::errc{}) fail("bad qubit index");
      g.qubits.push_back(q);
      body = trim(body.substr(static_cast<std::size_t>(ptr - body.data())));
    }
    long long ns = 0;
    auto [ptr, ec] = std::from_chars(dur.data(), dur.data() + dur.size(), ns);
    if (ec != std::errc{} || ptr != dur.data() + dur.size()) fail("bad duration");
    g.duration = static_cast<double>(ns) / 1e9;
    try {
      g.validate();
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    out.gates.push_back(std::move(g));
  }
  return out;
}

}  // namespace noisefp::testbed
