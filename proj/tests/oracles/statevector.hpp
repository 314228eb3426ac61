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
#include <complex>
#include <string>
#include <vector>

// Brute-force pure-state reference for the 4-qubit testbed. Gates act by
// direct index manipulation on 16 amplitudes; nothing here shares code
// with the density-matrix simulator.

namespace noisefp::oracle {

struct OracleGate {
  std::string name;  // "H", "X", "T", "TDG", "CNOT", "TOFFOLI"
  std::vector<int> qubits;  // controls first, target last
};

using Amplitudes = std::array<std::complex<double>, 16>;

Amplitudes run_statevector(const std::vector<OracleGate>& gates);

/// Probabilities of (q3, q2) = 00, 01, 10, 11.
std::array<double, 4> pair_probabilities(const Amplitudes& psi);

/// The transport circuit written out independently: three repetitions of
/// H0 H1 CX(0,2) CX(1,3) X0 X1 CCX(0,1,2), step k measured after gate
/// 7 r + {3, 4, 7}[j] for k = 3 r + j + 1.
std::vector<OracleGate> oracle_step_circuit(int step);

}  // namespace noisefp::oracle
