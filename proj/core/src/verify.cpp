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


#include "noisefp/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "noisefp/random.hpp"
#include "noisefp/simulator.hpp"
#include "noisefp/testbed.hpp"

namespace noisefp::verify {

namespace {

constexpr std::array<sim::GateKind, 6> kKinds{sim::GateKind::H,   sim::GateKind::X,    sim::GateKind::T,
                                              sim::GateKind::Tdg, sim::GateKind::CNOT, sim::GateKind::Toffoli};

sim::Gate random_gate(Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick_kind(0, kKinds.size() - 1);
  const auto kind = kKinds[pick_kind(rng)];
  std::array<int, sim::kNumQubits> order{0, 1, 2, 3};
  std::shuffle(order.begin(), order.end(), rng);
  const int n = sim::arity(kind);
  return {kind, std::vector<int>(order.begin(), order.begin() + n), 100e-9};
}

sim::KrausChannel random_channel(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> qubit(0, sim::kNumQubits - 1);
  if (u(rng) < 0.5) {
    const int q0 = qubit(rng);
    int q1 = qubit(rng);
    if (q1 == q0) q1 = (q0 + 1) % sim::kNumQubits;
    const std::vector<int> qubits = u(rng) < 0.5 ? std::vector<int>{q0} : std::vector<int>{q0, q1};
    return sim::depolarizing_channel(u(rng), qubits);
  }
  const double t1 = 1e-6 + 100e-6 * u(rng);
  const double t2 = 2.0 * t1 * (0.05 + 0.95 * u(rng));
  return sim::damping_channel(t1, t2, 5e-6 * u(rng), qubit(rng));
}

}  // namespace

CheckResult check_reconstruction() {
  CheckResult r{"circuit reconstruction", true, ""};
  const auto block = testbed::repetition_block();
  const auto rho = sim::run_circuit(block.gates);
  const std::array<int, 4> support{0b0110, 0b0111, 0b1001, 0b1100};
  double worst = 0.0;
  for (int i = 0; i < sim::kDim; ++i) {
    const double expected = std::find(support.begin(), support.end(), i) != support.end() ? 0.25 : 0.0;
    worst = std::max(worst, std::abs(rho.matrix()(i, i).real() - expected));
  }
  const auto pair = sim::measure_pair(rho);
  const std::array<double, 4> expected_pair{0.0, 0.5, 0.25, 0.25};
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(pair[i] - expected_pair[i]));
  r.passed = worst <= 1e-12;
  r.detail = fmt::format("max deviation {:.3g}; (q3,q2) = ({:.6f}, {:.6f}, {:.6f}, {:.6f})", worst, pair[0],
                         pair[1], pair[2], pair[3]);
  return r;
}

std::vector<CheckResult> check_simulator_properties(std::uint64_t seed, int sequences) {
  Rng rng(derive_seed(seed, "verify"));
  std::uniform_int_distribution<int> length(1, 24);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double trace_err = 0.0;
  double herm_err = 0.0;
  double min_eig = 1.0;
  double cptp_err = 0.0;
  for (int s = 0; s < sequences; ++s) {
    sim::DensityMatrix rho = sim::initial_state();
    const int n = length(rng);
    for (int g = 0; g < n; ++g) {
      if (u(rng) < 0.6) {
        rho = sim::apply_gate(rho, random_gate(rng));
      } else {
        const auto channel = random_channel(rng);
        cptp_err = std::max(cptp_err, channel.completeness_error());
        rho = sim::apply_channel(rho, channel);
      }
    }
    trace_err = std::max(trace_err, std::abs(rho.trace() - 1.0));
    herm_err = std::max(herm_err, rho.hermiticity_error());
    if (s % 10 == 0) min_eig = std::min(min_eig, rho.min_eigenvalue());
  }

  std::vector<CheckResult> out;
  out.push_back({"trace preservation", trace_err <= sim::kTraceTolerance,
                 fmt::format("{} sequences, max |tr - 1| = {:.3g}", sequences, trace_err)});
  out.push_back({"hermiticity", herm_err <= sim::kHermiticityTolerance,
                 fmt::format("max |rho - rho^dagger| = {:.3g}", herm_err)});
  out.push_back({"positivity", min_eig >= -sim::kPsdTolerance, fmt::format("min eigenvalue {:.3g}", min_eig)});
  out.push_back({"channel completeness", cptp_err <= sim::kCptpTolerance,
                 fmt::format("max |sum K^dagger K - I| = {:.3g}", cptp_err)});

  bool ideal_ok = true;
  for (const auto& d : testbed::ideal_distributions()) ideal_ok = ideal_ok && d.is_valid();
  out.push_back({"ideal step distributions", ideal_ok, "nine distributions sum to 1"});
  return out;
}

std::vector<CheckResult> run_all(std::uint64_t seed, int sequences) {
  std::vector<CheckResult> out{check_reconstruction()};
  for (auto& r : check_simulator_properties(seed, sequences)) out.push_back(std::move(r));
  return out;
}

}  // namespace noisefp::verify
