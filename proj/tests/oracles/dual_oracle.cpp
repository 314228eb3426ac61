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


#include "dual_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace noisefp::oracle {

double dual_value(const Eigen::MatrixXd& k, const std::vector<double>& y, const std::vector<double>& alpha) {
  const auto n = static_cast<Eigen::Index>(y.size());
  double lin = 0.0;
  double quad = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    lin += alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      quad += alpha[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(j)] *
              y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * k(i, j);
    }
  }
  return lin - 0.5 * quad;
}

DualOptimum brute_force_dual(const Eigen::MatrixXd& k, const std::vector<double>& y, double c) {
  const int n = static_cast<int>(y.size());
  if (n > 10) throw std::invalid_argument("brute_force_dual: too many points");
  constexpr double kRidge = 1e-9;
  constexpr double kFeasTol = 1e-9;

  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q(i, j) = y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * k(i, j);
  }

  DualOptimum best;
  best.objective = -std::numeric_limits<double>::infinity();
  int faces = 1;
  for (int i = 0; i < n; ++i) faces *= 3;

  std::vector<int> state(static_cast<std::size_t>(n));
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int code = 0; code < faces; ++code) {
    int rest = code;
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(i)] = rest % 3;
      rest /= 3;
      alpha[static_cast<std::size_t>(i)] = state[static_cast<std::size_t>(i)] == 1 ? c : 0.0;
      if (state[static_cast<std::size_t>(i)] == 2) free_idx.push_back(i);
    }
    double y_fixed = 0.0;
    for (int i = 0; i < n; ++i) y_fixed += y[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(i)];

    if (free_idx.empty()) {
      if (std::abs(y_fixed) > kFeasTol) continue;
    } else {
      const auto m = static_cast<Eigen::Index>(free_idx.size());
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
      Eigen::VectorXd rhs(m + 1);
      for (Eigen::Index r = 0; r < m; ++r) {
        const int i = free_idx[static_cast<std::size_t>(r)];
        for (Eigen::Index s = 0; s < m; ++s) a(r, s) = q(i, free_idx[static_cast<std::size_t>(s)]);
        a(r, r) += kRidge;
        a(r, m) = y[static_cast<std::size_t>(i)];
        a(m, r) = y[static_cast<std::size_t>(i)];
        double fixed_term = 0.0;
        for (int j = 0; j < n; ++j) {
          if (state[static_cast<std::size_t>(j)] == 1) fixed_term += q(i, j) * c;
        }
        rhs(r) = 1.0 - fixed_term;
      }
      rhs(m) = -y_fixed;
      const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
      if (!sol.allFinite()) continue;
      bool feasible = true;
      for (Eigen::Index r = 0; r < m; ++r) {
        const double v = sol(r);
        if (v < -kFeasTol || v > c + kFeasTol) feasible = false;
        alpha[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(r)])] = std::min(c, std::max(0.0, v));
      }
      if (!feasible) continue;
      double balance = 0.0;
      for (int i = 0; i < n; ++i) balance += y[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(i)];
      if (std::abs(balance) > 1e-7) continue;
    }
    const double obj = dual_value(k, y, alpha);
    if (obj > best.objective) {
      best.objective = obj;
      best.alpha = alpha;
    }
  }
  return best;
}

}  // namespace noisefp::oracle
