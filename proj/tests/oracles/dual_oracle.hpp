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

#include <vector>

#include <Eigen/Core>

// Exact maximizer of the soft-margin SVM dual for tiny problems:
//   max sum(a) - 1/2 a' Q a,  Q_ij = y_i y_j K_ij,  0 <= a <= C,  y' a = 0.
// Every partition of the indices into {a = 0, a = C, free} is tried; on each
// face the stationarity system is solved directly and feasible candidates
// are compared. Exponential in n, meant for n <= 8.

namespace noisefp::oracle {

struct DualOptimum {
  double objective = 0.0;
  std::vector<double> alpha;
};

DualOptimum brute_force_dual(const Eigen::MatrixXd& k, const std::vector<double>& y, double c);

/// The dual objective of `alpha` for the given Gram matrix and labels.
double dual_value(const Eigen::MatrixXd& k, const std::vector<double>& y, const std::vector<double>& alpha);

}  // namespace noisefp::oracle
