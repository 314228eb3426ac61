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

#include "noisefp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "noisefp/error.hpp"

namespace noisefp::sim {
namespace {

using Matrix2 = Eigen::Matrix2cd;

constexpr bool bit(int index, int qubit) { return ((index >> qubit) & 1) != 0; }

void check_qubit(int q) {
  if (q < 0 || q >= kNumQubits) throw ValidationError("qubit out of range");
}

void check_distinct(std::span<const int> qubits) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    check_qubit(qubits[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (qubits[i] == qubits[j]) throw ValidationError("duplicate qubit index");
    }
  }
}

/// Lifts a 2x2 operator on `qubit` to a sparse register operator.
SparseOperator lift_single(const Matrix2& local, int qubit) {
  std::vector<SparseOperator::Entry> entries;
  entries.reserve(2 * kDim);
  const int mask = 1 << qubit;
  for (int col = 0; col < kDim; ++col) {
    const int in_bit = bit(col, qubit) ? 1 : 0;
    for (int out_bit = 0; out_bit < 2; ++out_bit) {
      const Complex v = local(out_bit, in_bit);
      if (v == Complex{}) continue;
      const int row = out_bit ? (col | mask) : (col & ~mask);
      entries.push_back({static_cast<std::uint8_t>(row), static_cast<std::uint8_t>(col), v});
    }
  }
  return SparseOperator(std::move(entries));
}

/// Permutation gates: the operator maps basis column `c` to row `perm(c)`.
template <typename Perm>
SparseOperator permutation(Perm perm) {
  std::vector<SparseOperator::Entry> entries;
  entries.reserve(kDim);
  for (int col = 0; col < kDim; ++col) {
    entries.push_back({static_cast<std::uint8_t>(perm(col)), static_cast<std::uint8_t>(col),
                       Complex{1.0, 0.0}});
  }
  return SparseOperator(std::move(entries));
}

SparseOperator sparse_unitary(const Gate& gate) {
  const auto& q = gate.qubits;
  switch (gate.kind) {
    case GateKind::H: {
      const double s = 1.0 / std::numbers::sqrt2;
      Matrix2 h;
      h << s, s, s, -s;
      return lift_single(h, q[0]);
    }
    case GateKind::X:
      return permutation([m = 1 << q[0]](int c) { return c ^ m; });
    case GateKind::T:
    case GateKind::Tdg: {
      const double sign = gate.kind == GateKind::T ? 1.0 : -1.0;
      Matrix2 t = Matrix2::Zero();
      t(0, 0) = 1.0;
      t(1, 1) = std::polar(1.0, sign * std::numbers::pi / 4.0);
      return lift_single(t, q[0]);
    }
    case GateKind::CNOT:
      return permutation([c0 = q[0], t = q[1]](int c) { return bit(c, c0) ? c ^ (1 << t) : c; });
    case GateKind::Toffoli:
      return permutation([c0 = q[0], c1 = q[1], t = q[2]](int c) {
        return bit(c, c0) && bit(c, c1) ? c ^ (1 << t) : c;
      });
  }
  throw std::logic_error("unhandled gate kind");
}

/// out += K rho K^dagger.
void accumulate(const SparseOperator& k, const Matrix16& rho, Matrix16& out) {
  const auto entries = k.entries();
  for (const auto& left : entries) {
    for (const auto& right : entries) {
      out(left.row, right.row) += left.value * rho(left.col, right.col) * std::conj(right.value);
    }
  }
}

Matrix16 conjugate(const SparseOperator& k, const Matrix16& rho) {
  Matrix16 out = Matrix16::Zero();
  accumulate(k, rho, out);
  return out;
}

/// Non-identity Pauli strings on every qubit subset of size 1..3, lifted to
/// the register, indexed by the subset's bitmask.
const std::array<std::vector<SparseOperator>, 16>& pauli_table() {
  static const auto table = [] {
    std::array<Matrix2, 4> paulis;
    paulis[0] = Matrix2::Identity();
    paulis[1] << 0, 1, 1, 0;
    paulis[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    paulis[3] << 1, 0, 0, -1;
    std::array<std::vector<SparseOperator>, 16> out;
    for (int mask = 1; mask < 16; ++mask) {
      std::vector<int> qubits;
      for (int q = 0; q < kNumQubits; ++q) {
        if (bit(mask, q)) qubits.push_back(q);
      }
      if (qubits.size() > 3) continue;
      const int k = static_cast<int>(qubits.size());
      int strings = 1;
      for (int i = 0; i < k; ++i) strings *= 4;
      for (int s = 1; s < strings; ++s) {
        Matrix16 lifted = Matrix16::Identity();
        int digits = s;
        for (int i = 0; i < k; ++i) {
          lifted = lift_single(paulis[digits % 4], qubits[i]).dense() * lifted;
          digits /= 4;
        }
        out[mask].emplace_back(lifted);
      }
    }
    return out;
  }();
  return table;
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix() : rho_(Matrix16::Zero()) { rho_(0, 0) = 1.0; }

DensityMatrix::DensityMatrix(const Matrix16& entries) : rho_(entries) {}

DensityMatrix DensityMatrix::from_pure(std::span<const Complex> amplitudes) {
  if (amplitudes.size() != static_cast<std::size_t>(kDim)) {
    throw ValidationError("pure state needs 16 amplitudes");
  }
  Eigen::Matrix<Complex, kDim, 1> psi;
  for (int i = 0; i < kDim; ++i) psi(i) = amplitudes[static_cast<std::size_t>(i)];
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("zero state vector");
  psi /= norm;
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Matrix16::Identity() / static_cast<double>(kDim));
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix16 h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix16> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Eigen::Matrix2cd DensityMatrix::qubit_marginal(int qubit) const {
  check_qubit(qubit);
  Matrix2 out = Matrix2::Zero();
  for (int r = 0; r < kDim; ++r) {
    for (int c = 0; c < kDim; ++c) {
      // Partial trace: all other qubits must agree between row and column.
      if (((r ^ c) & ~(1 << qubit)) != 0) continue;
      out(bit(r, qubit), bit(c, qubit)) += rho_(r, c);
    }
  }
  return out;
}

void DensityMatrix::check_invariants() const {
  if (hermiticity_error() > kHermiticityTolerance) {
    throw ValidationError("density matrix is not Hermitian");
  }
  if (std::abs(trace() - Complex(1.0, 0.0)) > kTraceTolerance) {
    throw ValidationError("density matrix trace differs from 1");
  }
  if (min_eigenvalue() < -kPsdTolerance) {
    throw ValidationError("density matrix is not positive semidefinite");
  }
}

// ---------------------------------------------------------------------------
// Gates

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "TDG";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Toffoli: return "TOFFOLI";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::T, GateKind::Tdg, GateKind::CNOT,
                     GateKind::Toffoli}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown gate kind '" + std::string(name) + "'");
}

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT: return 2;
    case GateKind::Toffoli: return 3;
    default: return 1;
  }
}

void Gate::validate() const {
  for (int q : qubits) check_qubit(q);
  if (static_cast<int>(qubits.size()) != arity(kind)) {
    throw ValidationError("gate " + std::string(to_string(kind)) + " expects " +
                          std::to_string(arity(kind)) + " qubit(s)");
  }
  check_distinct(qubits);
  if (!(duration >= 0.0)) throw ValidationError("negative gate duration");
}

Matrix16 gate_unitary(const Gate& gate) {
  gate.validate();
  return sparse_unitary(gate).dense();
}

// ---------------------------------------------------------------------------
// Operators and channels

SparseOperator::SparseOperator(const Matrix16& dense) {
  for (int c = 0; c < kDim; ++c) {
    for (int r = 0; r < kDim; ++r) {
      if (dense(r, c) != Complex{}) {
        entries_.push_back({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(c), dense(r, c)});
      }
    }
  }
}

Matrix16 SparseOperator::dense() const {
  Matrix16 out = Matrix16::Zero();
  for (const auto& e : entries_) out(e.row, e.col) += e.value;
  return out;
}

SparseOperator SparseOperator::scaled(double factor) const {
  std::vector<Entry> out(entries_);
  for (auto& e : out) e.value *= factor;
  return SparseOperator(std::move(out));
}

KrausChannel::KrausChannel(std::span<const Matrix16> operators) {
  std::vector<SparseOperator> ops;
  ops.reserve(operators.size());
  for (const auto& m : operators) ops.emplace_back(m);
  *this = KrausChannel(std::move(ops));
}

KrausChannel::KrausChannel(std::vector<SparseOperator> operators) : ops_(std::move(operators)) {
  // sum_k K^dagger K, using (K^dagger K)(a, b) = sum_i conj(K(i, a)) K(i, b).
  Matrix16 acc = Matrix16::Zero();
  for (const auto& op : ops_) {
    const auto entries = op.entries();
    for (const auto& u : entries) {
      for (const auto& v : entries) {
        if (u.row == v.row) acc(u.col, v.col) += std::conj(u.value) * v.value;
      }
    }
  }
  completeness_error_ = (acc - Matrix16::Identity()).cwiseAbs().maxCoeff();
}

KrausChannel KrausChannel::identity() {
  return KrausChannel(std::vector<SparseOperator>{SparseOperator(Matrix16(Matrix16::Identity()))});
}

bool OutcomeDistribution::is_valid(double tol) const {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

ConfusionMatrix ConfusionMatrix::identity() {
  ConfusionMatrix cm;
  for (int i = 0; i < 4; ++i) cm.m[i][i] = 1.0;
  return cm;
}

ConfusionMatrix ConfusionMatrix::from_qubit_flips(double q3_flip01, double q3_flip10,
                                                  double q2_flip01, double q2_flip10) {
  for (double f : {q3_flip01, q3_flip10, q2_flip01, q2_flip10}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("invalid probability");
  }
  // Single-qubit readout channels r[true][observed].
  const double q3[2][2] = {{1.0 - q3_flip01, q3_flip01}, {q3_flip10, 1.0 - q3_flip10}};
  const double q2[2][2] = {{1.0 - q2_flip01, q2_flip01}, {q2_flip10, 1.0 - q2_flip10}};
  ConfusionMatrix cm;
  for (int t = 0; t < 4; ++t) {
    for (int o = 0; o < 4; ++o) {
      cm.m[t][o] = q3[t >> 1][o >> 1] * q2[t & 1][o & 1];
    }
  }
  return cm;
}

bool ConfusionMatrix::is_valid(double tol) const {
  for (const auto& row : m) {
    double s = 0.0;
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) return false;
      s += v;
    }
    if (std::abs(s - 1.0) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Operations

DensityMatrix initial_state() { return DensityMatrix(); }

DensityMatrix apply_gate(const DensityMatrix& state, const Gate& gate) {
  gate.validate();
  return DensityMatrix(conjugate(sparse_unitary(gate), state.matrix()));
}

KrausChannel depolarizing_channel(double p, std::span<const int> qubits) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("invalid probability");
  if (qubits.empty() || qubits.size() > 3) {
    throw ValidationError("depolarizing channel acts on 1 to 3 qubits");
  }
  check_distinct(qubits);
  int mask = 0;
  for (int q : qubits) mask |= 1 << q;

  std::vector<SparseOperator> ops;
  if (p < 1.0) ops.emplace_back(SparseOperator(Matrix16(Matrix16::Identity())).scaled(std::sqrt(1.0 - p)));
  if (p > 0.0) {
    const auto& paulis = pauli_table()[static_cast<std::size_t>(mask)];
    const double weight = std::sqrt(p / static_cast<double>(paulis.size()));
    for (const auto& pauli : paulis) ops.push_back(pauli.scaled(weight));
  }
  return KrausChannel(std::move(ops));
}

DampingRates damping_rates(double t1, double t2, double duration) {
  if (!(t1 > 0.0)) throw ValidationError("T1 must be positive");
  if (!(t2 > 0.0)) throw ValidationError("T2 must be positive");
  if (t2 > 2.0 * t1) throw ValidationError("unphysical T2");
  if (!(duration >= 0.0)) throw ValidationError("negative duration");
  DampingRates r;
  if (duration == 0.0) return r;
  r.gamma = -std::expm1(-duration / t1);
  const double dephasing_rate = 1.0 / t2 - 1.0 / (2.0 * t1);
  r.lambda = dephasing_rate > 0.0 ? -std::expm1(-duration * dephasing_rate) : 0.0;
  return r;
}

KrausChannel damping_channel(double t1, double t2, double duration, int qubit) {
  check_qubit(qubit);
  const auto [gamma, lambda] = damping_rates(t1, t2, duration);
  if (gamma == 0.0 && lambda == 0.0) return KrausChannel::identity();

  // Amplitude damping {A0, A1} followed by the phase flip {sqrt(1-l/2) I, sqrt(l/2) Z}.
  // Z A1 = A1, so the two A1 branches merge into one operator.
  const double keep = std::sqrt(1.0 - lambda / 2.0);
  const double flip = std::sqrt(lambda / 2.0);
  const double decay = std::sqrt(1.0 - gamma);
  Matrix2 k0 = Matrix2::Zero();
  k0(0, 0) = keep;
  k0(1, 1) = keep * decay;
  Matrix2 k1 = Matrix2::Zero();
  k1(0, 0) = flip;
  k1(1, 1) = -flip * decay;
  Matrix2 k2 = Matrix2::Zero();
  k2(0, 1) = std::sqrt(gamma);

  std::vector<SparseOperator> ops;
  ops.push_back(lift_single(k0, qubit));
  if (flip > 0.0) ops.push_back(lift_single(k1, qubit));
  if (gamma > 0.0) ops.push_back(lift_single(k2, qubit));
  return KrausChannel(std::move(ops));
}

DensityMatrix apply_channel(const DensityMatrix& state, const KrausChannel& channel) {
  if (!channel.is_cptp()) throw ValidationError("non-CPTP channel");
  Matrix16 out = Matrix16::Zero();
  for (const auto& op : channel.sparse_operators()) accumulate(op, state.matrix(), out);
  return DensityMatrix(out);
}

OutcomeDistribution measure_pair(const DensityMatrix& state) {
  OutcomeDistribution d;
  for (int i = 0; i < kDim; ++i) d.p[static_cast<std::size_t>(i >> 2)] += state(i, i).real();
  for (double& v : d.p) v = std::clamp(v, 0.0, 1.0);
  return d;
}

OutcomeDistribution apply_readout(const OutcomeDistribution& dist, const ConfusionMatrix& cm) {
  OutcomeDistribution out;
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t o = 0; o < 4; ++o) out.p[o] += dist.p[t] * cm.m[t][o];
  }
  for (double& v : out.p) v = std::clamp(v, 0.0, 1.0);
  return out;
}

OutcomeDistribution sample_counts(const OutcomeDistribution& dist, std::int64_t shots, Rng& rng) {
  if (shots <= 0) throw ValidationError("empty sample");
  // Multinomial draw as a chain of conditional binomials.
  std::array<std::int64_t, 4> counts{};
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i + 1 < 4 && remaining > 0; ++i) {
    const double q = mass > 0.0 ? std::clamp(dist.p[i] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    counts[i] = q >= 1.0 ? remaining : draw(rng);
    remaining -= counts[i];
    mass -= dist.p[i];
  }
  counts[3] = remaining;
  OutcomeDistribution out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.p[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
  }
  return out;
}

NoiseParameters NoiseParameters::noiseless() {
  NoiseParameters n;
  n.t1.fill(std::numeric_limits<double>::infinity());
  n.t2.fill(std::numeric_limits<double>::infinity());
  return n;
}

double NoiseParameters::error_rate(GateKind kind) const {
  switch (arity(kind)) {
    case 1: return err_1q;
    case 2: return err_2q;
    default: return err_3q;
  }
}

DensityMatrix apply_noisy_gate(const DensityMatrix& state, const Gate& gate,
                               const NoiseParameters& noise) {
  DensityMatrix out = apply_gate(state, gate);
  if (const double p = noise.error_rate(gate.kind); p > 0.0) {
    out = apply_channel(out, depolarizing_channel(p, gate.qubits));
  }
  if (gate.duration > 0.0) {
    for (int q = 0; q < kNumQubits; ++q) {
      const auto qi = static_cast<std::size_t>(q);
      if (std::isinf(noise.t1[qi]) && std::isinf(noise.t2[qi])) continue;
      out = apply_channel(out, damping_channel(noise.t1[qi], noise.t2[qi], gate.duration, q));
    }
  }
  return out;
}

DensityMatrix run_circuit(std::span<const Gate> gates) {
  DensityMatrix state;
  for (const auto& g : gates) state = apply_gate(state, g);
  return state;
}

DensityMatrix run_circuit(std::span<const Gate> gates, const NoiseParameters& noise) {
  DensityMatrix state;
  for (const auto& g : gates) state = apply_noisy_gate(state, g, noise);
  return state;
}

}  // namespace noisefp::sim
