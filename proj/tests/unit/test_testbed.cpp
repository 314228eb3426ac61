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


#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "noisefp/error.hpp"
#include "noisefp/simulator.hpp"
#include "noisefp/testbed.hpp"
#include "statevector.hpp"

namespace noisefp::testbed {
namespace {

using sim::GateKind;

oracle::OracleGate to_oracle(const sim::Gate& g) { return {std::string(sim::to_string(g.kind)), g.qubits}; }

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(MeasurementStep, Bounds) {
  EXPECT_EQ(MeasurementStep(1).value(), 1);
  EXPECT_EQ(MeasurementStep(9).value(), 9);
  EXPECT_EQ(message_of([] { MeasurementStep(0); }), "invalid step");
  EXPECT_EQ(message_of([] { MeasurementStep(10); }), "invalid step");
}

TEST(RepetitionBlock, SevenGatesInOrder) {
  const Circuit block = repetition_block();
  ASSERT_EQ(block.size(), 7u);
  const std::vector<GateKind> kinds{GateKind::H, GateKind::H, GateKind::CNOT, GateKind::CNOT,
                                    GateKind::X, GateKind::X, GateKind::Toffoli};
  for (std::size_t i = 0; i < kinds.size(); ++i) EXPECT_EQ(block.gates[i].kind, kinds[i]);
  EXPECT_EQ(block.gates[6].qubits, (std::vector<int>{0, 1, 2}));
}

TEST(RepetitionBlock, FinalStateHasFourEqualAmplitudes) {
  const auto rho = sim::run_circuit(repetition_block().gates);
  for (int i = 0; i < sim::kDim; ++i) {
    const bool in_support = i == 6 || i == 7 || i == 9 || i == 12;
    EXPECT_NEAR(rho(i, i).real(), in_support ? 0.25 : 0.0, 1e-15) << "basis " << i;
  }
  // Amplitude on |0110> is 1/2, so the diagonal entry is its square.
  EXPECT_NEAR(std::sqrt(rho(6, 6).real()), 0.5, 1e-15);
}

TEST(StepCircuit, PrefixLengths) {
  const std::vector<std::size_t> expected{3, 4, 7, 10, 11, 14, 17, 18, 21};
  for (int k = 1; k <= kNumSteps; ++k) {
    EXPECT_EQ(prefix_length(MeasurementStep(k)), expected[static_cast<std::size_t>(k - 1)]);
    EXPECT_EQ(step_circuit(MeasurementStep(k)).size(), expected[static_cast<std::size_t>(k - 1)]);
  }
}

TEST(StepCircuit, EachStepIsAPrefixOfTheNext) {
  for (int k = 1; k < kNumSteps; ++k) {
    const Circuit a = step_circuit(MeasurementStep(k));
    const Circuit b = step_circuit(MeasurementStep(k + 1));
    ASSERT_LT(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.gates[i], b.gates[i]);
  }
}

TEST(StepCircuit, TerminatorsAreTheMeasuredGates) {
  for (int k = 1; k <= kNumSteps; ++k) {
    const Circuit c = step_circuit(MeasurementStep(k));
    const GateKind last = c.gates.back().kind;
    EXPECT_EQ(last, (k % 3 == 0) ? GateKind::Toffoli : GateKind::CNOT) << "step " << k;
  }
}

TEST(IdealDistribution, KnownSteps) {
  const auto& d1 = ideal_distribution(MeasurementStep(1));
  EXPECT_NEAR(d1[0], 0.5, 1e-15);
  EXPECT_NEAR(d1[1], 0.5, 1e-15);
  EXPECT_NEAR(d1[2], 0.0, 1e-15);
  EXPECT_NEAR(d1[3], 0.0, 1e-15);
  const auto& d3 = ideal_distribution(MeasurementStep(3));
  EXPECT_NEAR(d3[0], 0.0, 1e-15);
  EXPECT_NEAR(d3[1], 0.5, 1e-15);
  EXPECT_NEAR(d3[2], 0.25, 1e-15);
  EXPECT_NEAR(d3[3], 0.25, 1e-15);
  for (const auto& d : ideal_distributions()) EXPECT_NEAR(d.sum(), 1.0, 1e-15);
}

TEST(IdealDistribution, MatchesStatevectorOracle) {
  for (int k = 1; k <= kNumSteps; ++k) {
    const auto expected = oracle::pair_probabilities(oracle::run_statevector(oracle::oracle_step_circuit(k)));
    const auto& got = ideal_distribution(MeasurementStep(k));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[i], expected[i], 1e-12) << "step " << k;
  }
}

TEST(DecomposeToffoli, NoneLeavesCircuitUnchanged) {
  const Circuit c = step_circuit(MeasurementStep(6));
  EXPECT_EQ(decompose_toffoli(c, ToffoliStyle::None), c);
}

TEST(DecomposeToffoli, AddsGatesButKeepsIdealDistributions) {
  for (int k = 1; k <= kNumSteps; ++k) {
    const Circuit c = step_circuit(MeasurementStep(k));
    const Circuit d = decompose_toffoli(c, ToffoliStyle::Standard6Cnot);
    if (k >= 3) EXPECT_GT(d.size(), c.size());
    const auto got = sim::measure_pair(sim::run_circuit(d.gates));
    const auto& want = ideal_distribution(MeasurementStep(k));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[i], want[i], 1e-10) << "step " << k;
  }
}

TEST(DecomposeToffoli, NetworkActsAsToffoliOnEveryBasisState) {
  const Circuit toffoli{{sim::Gate{GateKind::Toffoli, {3, 1, 0}, 0.0}}};
  const Circuit network = decompose_toffoli(toffoli, ToffoliStyle::Standard6Cnot);
  for (int basis = 0; basis < sim::kDim; ++basis) {
    std::vector<oracle::OracleGate> prep;
    for (int q = 0; q < sim::kNumQubits; ++q) {
      if ((basis >> q) & 1) prep.push_back({"X", {q}});
    }
    auto with_network = prep;
    for (const auto& g : network.gates) with_network.push_back(to_oracle(g));
    auto with_toffoli = prep;
    with_toffoli.push_back({"TOFFOLI", {3, 1, 0}});
    const auto a = oracle::run_statevector(with_network);
    const auto b = oracle::run_statevector(with_toffoli);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-12) << "basis " << basis;
  }
}

TEST(ToffoliStyle, NamesRoundTrip) {
  EXPECT_EQ(parse_toffoli_style(to_string(ToffoliStyle::None)), ToffoliStyle::None);
  EXPECT_EQ(parse_toffoli_style(to_string(ToffoliStyle::Standard6Cnot)), ToffoliStyle::Standard6Cnot);
  EXPECT_THROW(parse_toffoli_style("margolus"), ValidationError);
}

TEST(GateDurations, PerKind) {
  const GateDurations d;
  EXPECT_DOUBLE_EQ(d.of(GateKind::H), d.single_qubit);
  EXPECT_DOUBLE_EQ(d.of(GateKind::CNOT), d.cnot);
  EXPECT_DOUBLE_EQ(d.of(GateKind::Toffoli), d.toffoli);
  EXPECT_DOUBLE_EQ(d.of(GateKind::T), 0.0);
}

TEST(Serialization, RoundTrip) {
  const Circuit c = decompose_toffoli(step_circuit(MeasurementStep(9)), ToffoliStyle::Standard6Cnot);
  const std::string text = serialize(c);
  const Circuit back = parse_circuit(text);
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(back.gates[i].kind, c.gates[i].kind);
    EXPECT_EQ(back.gates[i].qubits, c.gates[i].qubits);
    EXPECT_NEAR(back.gates[i].duration, c.gates[i].duration, 1e-15);
  }
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(parse_circuit("\nH 0 #35\n\n").size(), 1u);
}

TEST(Serialization, ErrorsNameTheLine) {
  EXPECT_EQ(message_of([] { parse_circuit("H 0 #35\nH 0\n"); }), "circuit line 2: missing #duration_ns");
  EXPECT_EQ(message_of([] { parse_circuit("SWAP 0 1 #35\n"); }).rfind("circuit line 1: ", 0), 0u);
  EXPECT_EQ(message_of([] { parse_circuit("X a #35\n"); }), "circuit line 1: bad qubit index");
  EXPECT_EQ(message_of([] { parse_circuit("X 0 #3.5\n"); }), "circuit line 1: bad duration");
  EXPECT_EQ(message_of([] { parse_circuit("X 7 #35\n"); }), "circuit line 1: qubit out of range");
}

}  // namespace
}  // namespace noisefp::testbed
