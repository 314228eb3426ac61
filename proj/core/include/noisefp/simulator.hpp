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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "noisefp/random.hpp"

// Exact density-matrix simulation of the 4-qubit register.
//
// Basis states are ordered |q3 q2 q1 q0> with q0 least significant, so the
// basis index of a computational state is 8*q3 + 4*q2 + 2*q1 + q0.

namespace noisefp::sim {

inline constexpr int kNumQubits = 4;
inline constexpr int kDim = 16;

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kCptpTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

using Complex = std::complex<double>;
using Matrix16 = Eigen::Matrix<Complex, kDim, kDim>;

class DensityMatrix {
 public:
  /// |0000><0000|.
  DensityMatrix();
  explicit DensityMatrix(const Matrix16& entries);

  /// Pure state |psi><psi| from a 16-amplitude vector (normalized here).
  static DensityMatrix from_pure(std::span<const Complex> amplitudes);
  /// I/16.
  static DensityMatrix maximally_mixed();

  const Matrix16& matrix() const { return rho_; }
  Complex operator()(int row, int col) const { return rho_(row, col); }

  Complex trace() const { return rho_.trace(); }
  double purity() const;
  /// max |rho_ij - conj(rho_ji)|.
  double hermiticity_error() const;
  double min_eigenvalue() const;

  /// Reduced 2x2 density matrix of one qubit.
  Eigen::Matrix2cd qubit_marginal(int qubit) const;

  /// Throws ValidationError naming the first violated invariant.
  void check_invariants() const;

 private:
  Matrix16 rho_;
};

enum class GateKind { H, X, T, Tdg, CNOT, Toffoli };

std::string_view to_string(GateKind kind);
/// Throws ValidationError on an unknown name.
GateKind parse_gate_kind(std::string_view name);
int arity(GateKind kind);

/// `qubits` holds controls first and the target last.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> qubits;
  double duration = 0.0;  // seconds

  /// Arity and qubit-index checks; throws ValidationError("qubit out of range") etc.
  void validate() const;
  bool operator==(const Gate&) const = default;
};

/// Unitary of `gate` lifted to the 4-qubit register.
Matrix16 gate_unitary(const Gate& gate);

/// Row-compressed sparse form of a 16x16 operator. Lifted Paulis, damping
/// operators and the gate unitaries used here have at most two nonzeros
/// per row, so products with a density matrix are cheap in this form.
class SparseOperator {
 public:
  struct Entry {
    std::uint8_t row;
    std::uint8_t col;
    Complex value;
  };

  SparseOperator() = default;
  explicit SparseOperator(const Matrix16& dense);
  explicit SparseOperator(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  Matrix16 dense() const;
  std::span<const Entry> entries() const { return entries_; }
  SparseOperator scaled(double factor) const;

 private:
  std::vector<Entry> entries_;
};

class KrausChannel {
 public:
  KrausChannel() = default;
  explicit KrausChannel(std::span<const Matrix16> operators);
  explicit KrausChannel(std::vector<SparseOperator> operators);

  static KrausChannel identity();

  std::size_t size() const { return ops_.size(); }
  Matrix16 op(std::size_t i) const { return ops_.at(i).dense(); }
  std::span<const SparseOperator> sparse_operators() const { return ops_; }

  /// max |sum_i K_i^dagger K_i - I|, computed once at construction.
  double completeness_error() const { return completeness_error_; }
  bool is_cptp(double tol = kCptpTolerance) const { return completeness_error_ <= tol; }

 private:
  std::vector<SparseOperator> ops_;
  double completeness_error_ = 0.0;
};

/// Outcome probabilities for (q3, q2) indexed 00, 01, 10, 11.
struct OutcomeDistribution {
  std::array<double, 4> p{};

  double operator[](std::size_t i) const { return p[i]; }
  double& operator[](std::size_t i) { return p[i]; }
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
  /// Each entry in [0,1] and sum within `tol` of one.
  bool is_valid(double tol = kTraceTolerance) const;
  bool operator==(const OutcomeDistribution&) const = default;
};

/// Readout error model: m[true][observed].
struct ConfusionMatrix {
  std::array<std::array<double, 4>, 4> m{};

  static ConfusionMatrix identity();
  /// Tensor product of two independent single-qubit readout channels.
  /// `flip01` is P(read 1 | prepared 0), `flip10` is P(read 0 | prepared 1).
  static ConfusionMatrix from_qubit_flips(double q3_flip01, double q3_flip10,
                                          double q2_flip01, double q2_flip10);
  bool is_valid(double tol = 1e-12) const;
  bool operator==(const ConfusionMatrix&) const = default;
};

DensityMatrix initial_state();

/// U rho U^dagger. Throws ValidationError("qubit out of range") on bad indices.
DensityMatrix apply_gate(const DensityMatrix& state, const Gate& gate);

/// sqrt(1-p) I plus sqrt(p/(4^k-1)) P for each non-identity Pauli string P on
/// `qubits`. Throws ValidationError("invalid probability") for p outside [0,1].
KrausChannel depolarizing_channel(double p, std::span<const int> qubits);

struct DampingRates {
  double gamma = 0.0;   // amplitude damping, 1 - exp(-t/T1)
  double lambda = 0.0;  // pure dephasing, 1 - exp(-t (1/T2 - 1/(2 T1)))
};

/// Throws ValidationError("unphysical T2") when t2 > 2 t1.
DampingRates damping_rates(double t1, double t2, double duration);

/// Amplitude damping with rate gamma followed by a phase flip with
/// probability lambda/2, so coherences decay as exp(-duration/T2).
KrausChannel damping_channel(double t1, double t2, double duration, int qubit);

/// sum_i K_i rho K_i^dagger. Throws ValidationError("non-CPTP channel").
DensityMatrix apply_channel(const DensityMatrix& state, const KrausChannel& channel);

/// Born probabilities of the (q3, q2) pair.
OutcomeDistribution measure_pair(const DensityMatrix& state);

/// observed = dist^T m.
OutcomeDistribution apply_readout(const OutcomeDistribution& dist, const ConfusionMatrix& cm);

/// Empirical frequencies of `shots` categorical draws. Throws
/// ValidationError("empty sample") for shots == 0.
OutcomeDistribution sample_counts(const OutcomeDistribution& dist, std::int64_t shots, Rng& rng);

/// Instantaneous noise parameters for a noisy circuit execution.
struct NoiseParameters {
  double err_1q = 0.0;
  double err_2q = 0.0;
  double err_3q = 0.0;
  std::array<double, kNumQubits> t1{};  // seconds; +inf disables damping
  std::array<double, kNumQubits> t2{};

  static NoiseParameters noiseless();
  double error_rate(GateKind kind) const;
};

/// Applies `gate`, then depolarizing noise on its qubits at the gate-class
/// rate, then damping on every qubit for the gate's duration.
DensityMatrix apply_noisy_gate(const DensityMatrix& state, const Gate& gate,
                               const NoiseParameters& noise);

/// Noiseless or noisy execution of a gate list starting from |0000>.
DensityMatrix run_circuit(std::span<const Gate> gates);
DensityMatrix run_circuit(std::span<const Gate> gates, const NoiseParameters& noise);

}  // namespace noisefp::sim
