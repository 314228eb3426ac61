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


#include "noisefp/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "noisefp/error.hpp"
#include "noisefp/random.hpp"

namespace noisefp::svm {

// ---- features ---------------------------------------------------------------

FeatureSpec::FeatureSpec(Mode mode, int k, int s) : mode_(mode), k_(k), s_(s) {
  if (k < 1 || k > 9) throw ValidationError("invalid step: " + std::to_string(k));
  if (mode == Mode::Window && s < 1) throw ValidationError("window width must be >= 1");
}

FeatureSpec FeatureSpec::single(int k) { return {Mode::Single, k, 0}; }
FeatureSpec FeatureSpec::window(int k, int s) { return {Mode::Window, k, s}; }
FeatureSpec FeatureSpec::prefix(int k) { return {Mode::Prefix, k, 0}; }

std::vector<int> FeatureSpec::steps() const {
  int lo = k_;
  if (mode_ == Mode::Window) lo = std::max(1, k_ - s_);
  if (mode_ == Mode::Prefix) lo = 1;
  std::vector<int> out;
  for (int step = lo; step <= k_; ++step) out.push_back(step);
  return out;
}

std::string FeatureSpec::label() const {
  switch (mode_) {
    case Mode::Single:
      return "single(" + std::to_string(k_) + ")";
    case Mode::Window:
      return "window(" + std::to_string(k_) + "," + std::to_string(s_) + ")";
    case Mode::Prefix:
      break;
  }
  return "prefix(" + std::to_string(k_) + ")";
}

std::vector<int> LabeledSet::classes() const {
  std::set<int> distinct(y.begin(), y.end());
  return {distinct.begin(), distinct.end()};
}

LabeledSet LabeledSet::subset(std::span<const std::size_t> indices) const {
  LabeledSet out;
  out.x.reserve(indices.size());
  out.y.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw ValidationError("subset index out of range");
    out.x.push_back(x[i]);
    out.y.push_back(y[i]);
  }
  return out;
}

void LabeledSet::append(const LabeledSet& other) {
  x.insert(x.end(), other.x.begin(), other.x.end());
  y.insert(y.end(), other.y.begin(), other.y.end());
}

void LabeledSet::validate() const {
  if (x.size() != y.size()) throw ValidationError("labeled set: x and y lengths differ");
  for (const auto& v : x) {
    if (v.size() != dimension()) throw ValidationError("labeled set: inconsistent dimensions");
  }
}

void append_run(LabeledSet& out, const acquisition::Run& run, const FeatureSpec& spec, int label) {
  const auto steps = spec.steps();
  for (const auto& sample : run.samples) {
    FeatureVector v;
    v.reserve(4 * steps.size());
    for (int step : steps) {
      const auto& p = sample[static_cast<std::size_t>(step - 1)].p;
      v.insert(v.end(), p.begin(), p.end());
    }
    out.x.push_back(std::move(v));
    out.y.push_back(label);
  }
}

LabeledSet build_features(const acquisition::Dataset& ds, const FeatureSpec& spec,
                          std::span<const std::string> machines) {
  if (machines.empty()) throw ValidationError("empty machine selection");
  LabeledSet out;
  for (std::size_t m = 0; m < machines.size(); ++m) {
    if (!ds.has_machine(machines[m])) throw ValidationError("unknown machine: " + machines[m]);
    for (const auto* run : ds.runs_of(machines[m])) append_run(out, *run, spec, static_cast<int>(m));
  }
  if (out.size() == 0) throw ValidationError("empty selection: no runs for the requested machines");
  return out;
}

// ---- kernels ----------------------------------------------------------------

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Linear:
      return "linear";
    case KernelKind::Poly2:
      return "poly2";
    case KernelKind::Poly3:
      return "poly3";
    case KernelKind::Poly4:
      return "poly4";
    case KernelKind::Rbf:
      return "rbf";
  }
  return "linear";
}

KernelKind parse_kernel_kind(std::string_view name) {
  for (KernelKind k : kAllKernels) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown kernel: " + std::string(name));
}

void KernelSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("kernel gamma must be > 0");
  if (!std::isfinite(coef0)) throw ValidationError("kernel coef0 must be finite");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

double kernel_unchecked(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
  switch (spec.kind) {
    case KernelKind::Linear:
      return dot(a, b);
    case KernelKind::Poly2:
      return ipow(spec.gamma * dot(a, b) + spec.coef0, 2);
    case KernelKind::Poly3:
      return ipow(spec.gamma * dot(a, b) + spec.coef0, 3);
    case KernelKind::Poly4:
      return ipow(spec.gamma * dot(a, b) + spec.coef0, 4);
    case KernelKind::Rbf:
      return std::exp(-spec.gamma * squared_distance(a, b));
  }
  return 0.0;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("dimension mismatch");
  return kernel_unchecked(spec, a, b);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const FeatureVector> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (points[i].size() != points[0].size()) throw ValidationError("dimension mismatch");
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_unchecked(spec, points[i], points[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

double default_gamma(const LabeledSet& train) {
  const std::size_t p = train.dimension();
  const std::size_t count = p * train.size();
  if (count == 0) return 1.0;
  double mean = 0.0;
  for (const auto& v : train.x) mean += std::accumulate(v.begin(), v.end(), 0.0);
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (const auto& v : train.x) {
    for (double e : v) var += (e - mean) * (e - mean);
  }
  var /= static_cast<double>(count);
  if (!(var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(p) * var);
}

// ---- binary solver ----------------------------------------------------------

namespace {

struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
};

bool in_up(double y, double a, double c) { return (y > 0 && a < c) || (y < 0 && a > 0); }
bool in_low(double y, double a, double c) { return (y > 0 && a > 0) || (y < 0 && a < c); }

// Maximal-violating-pair SMO on min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0,
// with Q_ij = y_i y_j K_ij. G holds the gradient Qa - e.
DualSolution solve_dual(const Eigen::MatrixXd& k, const std::vector<double>& y, double c,
                        const TrainOptions& options) {
  const std::size_t n = y.size();
  constexpr double kTau = 1e-12;
  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> g(n, -1.0);
  auto& a = sol.alpha;
  const std::int64_t limit = std::max(options.max_iter, 0);

  double m_up = 0.0;
  double m_low = 0.0;
  for (;;) {
    std::ptrdiff_t i = -1;
    std::ptrdiff_t j = -1;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * g[t];
      if (in_up(y[t], a[t], c) && v > m_up) {
        m_up = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (in_low(y[t], a[t], c) && v < m_low) {
        m_low = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0 || m_up - m_low < options.tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= limit) break;
    ++sol.iterations;

    const auto ui = static_cast<Eigen::Index>(i);
    const auto uj = static_cast<Eigen::Index>(j);
    const double qii = k(ui, ui);
    const double qjj = k(uj, uj);
    const double qij = y[i] * y[j] * k(ui, uj);
    const double old_ai = a[i];
    const double old_aj = a[j];

    if (y[i] != y[j]) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-g[i] - g[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = c - diff;
        }
      } else if (a[j] > c) {
        a[j] = c;
        a[i] = c + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (g[i] - g[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > c) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = sum - c;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > c) {
        if (a[j] > c) {
          a[j] = c;
          a[i] = sum - c;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }

    const double dai = (a[i] - old_ai) * y[i];
    const double daj = (a[j] - old_aj) * y[j];
    const double* ki = k.col(ui).data();
    const double* kj = k.col(uj).data();
    for (std::size_t t = 0; t < n; ++t) g[t] += y[t] * (ki[t] * dai + kj[t] * daj);
  }

  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (a[t] > 0.0 && a[t] < c) {
      free_sum += -y[t] * g[t];
      ++free_count;
    }
  }
  if (free_count > 0) {
    sol.bias = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(m_up) && std::isfinite(m_low)) {
    sol.bias = 0.5 * (m_up + m_low);
  } else {
    sol.bias = std::isfinite(m_up) ? m_up : (std::isfinite(m_low) ? m_low : 0.0);
  }
  return sol;
}

SvmModel assemble(const LabeledSet& data, const std::vector<double>& y, const DualSolution& sol,
                  double c, const KernelSpec& kernel, std::array<int, 2> classes) {
  SvmModel model;
  model.kernel = kernel;
  model.c = c;
  model.classes = classes;
  model.bias = sol.bias;
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (sol.alpha[t] > 0.0) {
      model.support_vectors.push_back(data.x[t]);
      model.dual_coefs.push_back(sol.alpha[t] * y[t]);
      model.support_indices.push_back(t);
    }
  }
  return model;
}

void check_training_input(const LabeledSet& data, double c, const KernelSpec& kernel) {
  data.validate();
  kernel.validate();
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("C must be > 0");
}

SvmModel train_binary_with_gram(const LabeledSet& data, const Eigen::MatrixXd& k, double c,
                                const KernelSpec& kernel, const TrainOptions& options,
                                std::array<int, 2> classes) {
  std::vector<double> y(data.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = data.y[t] == classes[1] ? 1.0 : -1.0;
  return assemble(data, y, solve_dual(k, y, c, options), c, kernel, classes);
}

OvrModel train_ovr_with_gram(const LabeledSet& data, const Eigen::MatrixXd& k, double c,
                             const KernelSpec& kernel, const TrainOptions& options,
                             const std::vector<int>& classes) {
  OvrModel model;
  model.classes = classes;
  for (int cls : classes) {
    std::vector<double> y(data.size());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = data.y[t] == cls ? 1.0 : -1.0;
    // The "rest" label is never reported; it only has to differ from cls.
    const int rest = cls == std::numeric_limits<int>::min() ? cls + 1 : cls - 1;
    model.models.push_back(assemble(data, y, solve_dual(k, y, c, options), c, kernel, {rest, cls}));
  }
  return model;
}

Classifier train_with_gram(const LabeledSet& data, const Eigen::MatrixXd& k, double c,
                           const KernelSpec& kernel, const TrainOptions& options) {
  const auto classes = data.classes();
  if (classes.size() < 2) throw ValidationError("degenerate labels");
  if (classes.size() == 2) {
    return Classifier(train_binary_with_gram(data, k, c, kernel, options, {classes[0], classes[1]}));
  }
  return Classifier(train_ovr_with_gram(data, k, c, kernel, options, classes));
}

}  // namespace

double SvmModel::decision_value(std::span<const double> x) const {
  double f = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    if (support_vectors[i].size() != x.size()) throw ValidationError("dimension mismatch");
    f += dual_coefs[i] * kernel_unchecked(kernel, support_vectors[i], x);
  }
  return f;
}

SvmModel train_binary(const LabeledSet& data, double c, const KernelSpec& kernel,
                      const TrainOptions& options) {
  check_training_input(data, c, kernel);
  const auto classes = data.classes();
  if (classes.size() != 2) throw ValidationError("degenerate labels");
  return train_binary_with_gram(data, gram_matrix(kernel, data.x), c, kernel, options,
                                {classes[0], classes[1]});
}

Prediction predict(const SvmModel& model, std::span<const double> x) {
  const double f = model.decision_value(x);
  return {f >= 0.0 ? model.classes[1] : model.classes[0], f};
}

std::vector<double> dual_alphas(const SvmModel& model, std::size_t n) {
  std::vector<double> alpha(n, 0.0);
  for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
    const std::size_t t = model.support_indices[s];
    if (t >= n) throw ValidationError("support index out of range");
    alpha[t] = std::abs(model.dual_coefs[s]);
  }
  return alpha;
}

namespace {

std::vector<double> signed_labels(const SvmModel& model, const LabeledSet& train) {
  std::vector<double> y(train.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = train.y[t] == model.classes[1] ? 1.0 : -1.0;
  return y;
}

}  // namespace

double dual_objective(const SvmModel& model, const LabeledSet& train) {
  const auto alpha = dual_alphas(model, train.size());
  const auto y = signed_labels(model, train);
  const Eigen::MatrixXd k = gram_matrix(model.kernel, train.x);
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] *
              k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return linear - 0.5 * quad;
}

double kkt_violation(const SvmModel& model, const LabeledSet& train) {
  const auto alpha = dual_alphas(model, train.size());
  const auto y = signed_labels(model, train);
  double worst = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double margin = y[i] * model.decision_value(train.x[i]);
    double v = 0.0;
    if (alpha[i] <= 0.0) {
      v = std::max(0.0, 1.0 - margin);
    } else if (alpha[i] >= model.c) {
      v = std::max(0.0, margin - 1.0);
    } else {
      v = std::abs(margin - 1.0);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

// ---- one-vs-rest ------------------------------------------------------------

bool OvrModel::converged() const {
  return std::all_of(models.begin(), models.end(), [](const SvmModel& m) { return m.converged; });
}

OvrModel train_ovr(const LabeledSet& data, double c, const KernelSpec& kernel,
                   const TrainOptions& options) {
  check_training_input(data, c, kernel);
  const auto classes = data.classes();
  if (classes.size() < 2) throw ValidationError("degenerate labels");
  return train_ovr_with_gram(data, gram_matrix(kernel, data.x), c, kernel, options, classes);
}

Prediction predict(const OvrModel& model, std::span<const double> x) {
  if (model.models.empty()) throw ValidationError("empty one-vs-rest model");
  Prediction best{model.classes[0], model.models[0].decision_value(x)};
  for (std::size_t m = 1; m < model.models.size(); ++m) {
    const double f = model.models[m].decision_value(x);
    if (f > best.decision_value) best = {model.classes[m], f};
  }
  return best;
}

int Classifier::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return svm::predict(m, x).label; }, model_);
}

std::vector<int> Classifier::predict_all(const LabeledSet& data) const {
  std::vector<int> out;
  out.reserve(data.size());
  for (const auto& x : data.x) out.push_back(predict(x));
  return out;
}

bool Classifier::converged() const {
  if (const auto* ovr = std::get_if<OvrModel>(&model_)) return ovr->converged();
  return std::get<SvmModel>(model_).converged;
}

Classifier train_classifier(const LabeledSet& data, double c, const KernelSpec& kernel,
                            const TrainOptions& options) {
  check_training_input(data, c, kernel);
  return train_with_gram(data, gram_matrix(kernel, data.x), c, kernel, options);
}

// ---- model selection --------------------------------------------------------

Selection select_model(const LabeledSet& train, const LabeledSet& val, std::span<const double> c_grid,
                       std::span<const KernelSpec> kernels, const TrainOptions& options) {
  if (c_grid.empty() || kernels.empty()) throw ValidationError("empty model-selection grid");
  if (val.size() == 0) throw ValidationError("empty validation set");
  val.validate();
  if (val.dimension() != train.dimension()) throw ValidationError("dimension mismatch");
  for (double c : c_grid) check_training_input(train, c, kernels.front());

  Selection best;
  bool have_best = false;
  for (const auto& kernel : kernels) {
    kernel.validate();
    const Eigen::MatrixXd k = gram_matrix(kernel, train.x);
    for (double c : c_grid) {
      Classifier model = train_with_gram(train, k, c, kernel, options);
      const double acc = accuracy(model.predict_all(val), val.y);
      best.report.push_back({kernel, c, acc, model.converged()});
      const bool better =
          !have_best || acc > best.val_accuracy ||
          (acc == best.val_accuracy &&
           (kernel.kind < best.kernel.kind || (kernel.kind == best.kernel.kind && c < best.c)));
      if (better) {
        have_best = true;
        best.model = std::move(model);
        best.kernel = kernel;
        best.c = c;
        best.val_accuracy = acc;
      }
    }
  }
  return best;
}

std::vector<KernelSpec> make_kernels(const LabeledSet& train, std::span<const KernelKind> kinds,
                                     std::optional<double> gamma, double coef0) {
  const double g = gamma.value_or(default_gamma(train));
  std::vector<KernelSpec> out;
  for (KernelKind kind : kinds) {
    KernelSpec spec{kind, g, coef0};
    spec.validate();
    out.push_back(spec);
  }
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size()) throw ValidationError("accuracy: length mismatch");
  if (predicted.empty()) throw ValidationError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == actual[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

// ---- split / standardization ------------------------------------------------

Split split(const LabeledSet& data, std::array<double, 3> fractions, std::uint64_t seed) {
  data.validate();
  const std::size_t n = data.size();
  if (n < 5) throw ValidationError("split: need at least 5 points");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw ValidationError("split: negative fraction");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("split: fractions must sum to 1");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto n_train = static_cast<std::size_t>(std::llround(fractions[0] * static_cast<double>(n)));
  const auto n_val = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(fractions[1] * static_cast<double>(n))));
  Split out;
  out.train_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.val_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                         perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  out.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), perm.end());
  out.train = data.subset(out.train_indices);
  out.val = data.subset(out.val_indices);
  out.test = data.subset(out.test_indices);
  return out;
}

Standardizer::Standardizer(const LabeledSet& train) {
  train.validate();
  const std::size_t p = train.dimension();
  mean_.assign(p, 0.0);
  scale_.assign(p, 1.0);
  if (train.size() == 0) return;
  const auto n = static_cast<double>(train.size());
  for (const auto& v : train.x) {
    for (std::size_t d = 0; d < p; ++d) mean_[d] += v[d];
  }
  for (double& m : mean_) m /= n;
  std::vector<double> var(p, 0.0);
  for (const auto& v : train.x) {
    for (std::size_t d = 0; d < p; ++d) var[d] += (v[d] - mean_[d]) * (v[d] - mean_[d]);
  }
  for (std::size_t d = 0; d < p; ++d) {
    const double sd = std::sqrt(var[d] / n);
    scale_[d] = sd > 0.0 ? sd : 1.0;
  }
}

void Standardizer::apply(LabeledSet& data) const {
  for (auto& v : data.x) {
    if (v.size() != mean_.size()) throw ValidationError("dimension mismatch");
    for (std::size_t d = 0; d < v.size(); ++d) v[d] = (v[d] - mean_[d]) / scale_[d];
  }
}

}  // namespace noisefp::svm
