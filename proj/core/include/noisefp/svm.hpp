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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "noisefp/acquisition.hpp"

// Soft-margin kernel SVMs trained in the dual with a pairwise (SMO-style)
// solver, one-vs-rest multiclass, validation-driven model selection.

namespace noisefp::svm {

using FeatureVector = std::vector<double>;

/// Which measurement steps feed a feature vector.
class FeatureSpec {
 public:
  enum class Mode { Single, Window, Prefix };

  /// Step k alone.
  static FeatureSpec single(int k);
  /// Steps max(1, k - s) .. k.
  static FeatureSpec window(int k, int s);
  /// Steps 1 .. k.
  static FeatureSpec prefix(int k);

  Mode mode() const { return mode_; }
  int k() const { return k_; }
  int s() const { return s_; }
  /// Ascending list of selected steps.
  std::vector<int> steps() const;
  std::size_t dimension() const { return 4 * steps().size(); }
  /// e.g. "single(3)", "window(5,2)", "prefix(9)".
  std::string label() const;

 private:
  FeatureSpec(Mode mode, int k, int s);
  Mode mode_;
  int k_;
  int s_;
};

struct LabeledSet {
  std::vector<FeatureVector> x;
  std::vector<int> y;

  std::size_t size() const { return x.size(); }
  std::size_t dimension() const { return x.empty() ? 0 : x.front().size(); }
  /// Sorted distinct labels.
  std::vector<int> classes() const;
  LabeledSet subset(std::span<const std::size_t> indices) const;
  void append(const LabeledSet& other);
  /// Equal lengths and a common dimension; throws ValidationError.
  void validate() const;
};

/// Appends one vector per sample of `run` (one for slow runs, eight for fast).
void append_run(LabeledSet& out, const acquisition::Run& run, const FeatureSpec& spec, int label);

/// Features for every run of the listed machines; the label is the
/// machine's position in `machines`. Throws on unknown machines or an
/// empty selection.
LabeledSet build_features(const acquisition::Dataset& ds, const FeatureSpec& spec,
                          std::span<const std::string> machines);

enum class KernelKind { Linear, Poly2, Poly3, Poly4, Rbf };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);
inline constexpr std::array<KernelKind, 5> kAllKernels{KernelKind::Linear, KernelKind::Poly2,
                                                       KernelKind::Poly3, KernelKind::Poly4,
                                                       KernelKind::Rbf};

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double gamma = 1.0;  // rbf width / polynomial scale
  double coef0 = 1.0;  // polynomial offset

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

/// linear a.b; poly-d (gamma a.b + coef0)^d; rbf exp(-gamma |a-b|^2).
double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const FeatureVector> points);

/// 1 / (p * variance of all feature entries); 1 when the variance vanishes.
double default_gamma(const LabeledSet& train);

struct TrainOptions {
  double tol = 1e-3;
  int max_iter = 10000;  // sweeps; each scans all n variables and updates one pair
};

struct SvmModel {
  KernelSpec kernel;
  double c = 1.0;
  std::array<int, 2> classes{-1, 1};  // {negative, positive}
  std::vector<FeatureVector> support_vectors;
  std::vector<double> dual_coefs;  // alpha_i * y_i
  std::vector<std::size_t> support_indices;  // rows of the training set
  double bias = 0.0;
  bool converged = true;
  std::int64_t iterations = 0;

  double decision_value(std::span<const double> x) const;
};

struct Prediction {
  int label = 0;
  double decision_value = 0.0;
};

/// Throws ValidationError("degenerate labels") unless exactly two labels occur.
/// The larger label is the positive class.
SvmModel train_binary(const LabeledSet& data, double c, const KernelSpec& kernel,
                      const TrainOptions& options = {});

/// Sign of the decision value; zero goes to the positive (larger) class.
Prediction predict(const SvmModel& model, std::span<const double> x);

/// Full alpha vector over the n training rows (zero for non-support rows).
std::vector<double> dual_alphas(const SvmModel& model, std::size_t n);
/// sum alpha - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij over the training set.
double dual_objective(const SvmModel& model, const LabeledSet& train);
/// Largest violation of the KKT conditions on the training set (0 when all hold).
double kkt_violation(const SvmModel& model, const LabeledSet& train);

struct OvrModel {
  std::vector<int> classes;
  std::vector<SvmModel> models;  // models[m] separates classes[m] from the rest

  bool converged() const;
};

OvrModel train_ovr(const LabeledSet& data, double c, const KernelSpec& kernel,
                   const TrainOptions& options = {});
/// Argmax of the per-class decision values; ties go to the lowest label.
Prediction predict(const OvrModel& model, std::span<const double> x);

/// Binary model for two classes, one-vs-rest otherwise.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(SvmModel m) : model_(std::move(m)) {}
  explicit Classifier(OvrModel m) : model_(std::move(m)) {}

  int predict(std::span<const double> x) const;
  std::vector<int> predict_all(const LabeledSet& data) const;
  bool converged() const;
  const std::variant<SvmModel, OvrModel>& model() const { return model_; }

 private:
  std::variant<SvmModel, OvrModel> model_;
};

/// Trains on `data`, choosing binary or one-vs-rest from the label count.
Classifier train_classifier(const LabeledSet& data, double c, const KernelSpec& kernel,
                            const TrainOptions& options = {});

struct SelectionRow {
  KernelSpec kernel;
  double c = 0.0;
  double val_accuracy = 0.0;
  bool converged = true;
};

struct Selection {
  Classifier model;
  KernelSpec kernel;
  double c = 0.0;
  double val_accuracy = 0.0;
  std::vector<SelectionRow> report;  // one row per (kernel, C)
};

/// Trains every (C, kernel) pair and keeps the best validation accuracy.
/// Ties go to the simpler kernel (linear < poly2 < poly3 < poly4 < rbf),
/// then to the smaller C.
Selection select_model(const LabeledSet& train, const LabeledSet& val, std::span<const double> c_grid,
                       std::span<const KernelSpec> kernels, const TrainOptions& options = {});

/// One KernelSpec per kind, with gamma from `gamma` or default_gamma(train).
std::vector<KernelSpec> make_kernels(const LabeledSet& train, std::span<const KernelKind> kinds,
                                     std::optional<double> gamma = std::nullopt, double coef0 = 1.0);

/// (1/n) * #{i : predicted_i == actual_i}. Throws on length mismatch or n == 0.
double accuracy(std::span<const int> predicted, std::span<const int> actual);

struct Split {
  LabeledSet train;
  LabeledSet val;
  LabeledSet test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
  std::vector<std::size_t> test_indices;
};

/// Seeded permutation cut into contiguous parts of rounded sizes.
Split split(const LabeledSet& data, std::array<double, 3> fractions = {0.6, 0.2, 0.2},
            std::uint64_t seed = 0);

/// Per-feature z-scoring fitted on a training set.
class Standardizer {
 public:
  explicit Standardizer(const LabeledSet& train);
  void apply(LabeledSet& data) const;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

/// Self-describing text form (kernel, C, bias, support vectors with coefficients).
void write_model(std::ostream& out, const SvmModel& model);
SvmModel read_model(std::istream& in);
void write_model(std::ostream& out, const OvrModel& model);
OvrModel read_ovr_model(std::istream& in);

}  // namespace noisefp::svm
