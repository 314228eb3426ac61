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

#include <cstdint>
#include <string>
#include <vector>

// Self-checks behind the `verify` command: the transport-circuit
// reconstruction and randomized simulator invariants.

namespace noisefp::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// One noiseless repetition on |0000> must put 1/4 on each of 0110, 0111,
/// 1001, 1100 and give the (q3, q2) distribution (0, 1/2, 1/4, 1/4).
CheckResult check_reconstruction();

/// Random gate/channel sequences: trace, Hermiticity and positivity stay
/// within tolerance; channels stay CPTP; the nine ideal distributions are valid.
std::vector<CheckResult> check_simulator_properties(std::uint64_t seed, int sequences);

std::vector<CheckResult> run_all(std::uint64_t seed = 0, int sequences = 1000);

}  // namespace noisefp::verify
