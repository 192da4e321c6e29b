// Copyright 2026 The aoed Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "aoed/errors.hpp"

namespace aoed {

/// The capped simplex {w : 0 <= w <= 1, sum(w) <= budget}. Binary designs
/// with at most `budget` active sensors are its vertices with 0/1 entries.
struct CappedSimplex {
  int dim;     // number of candidate sensors m
  int budget;  // sensor budget m0, 1 <= budget <= dim

  CappedSimplex(int dim_, int budget_) : dim(dim_), budget(budget_) {
    if (dim < 1) throw InvalidBudget("dimension must be >= 1");
    if (budget < 1 || budget > dim) {
      throw InvalidBudget("budget must satisfy 1 <= budget <= dim");
    }
  }
};

/// Membership test with slack `tol` on both the box and the sum constraint.
inline bool contains(const CappedSimplex& set, const Eigen::VectorXd& w,
                     double tol = 1e-9) {
  if (w.size() != set.dim) {
    throw DimensionMismatch("contains: vector size does not match set dimension");
  }
  if (w.minCoeff() < -tol || w.maxCoeff() > 1.0 + tol) return false;
  return w.sum() <= static_cast<double>(set.budget) + tol;
}

/// Euclidean projection onto the capped simplex.
///
/// The KKT system of min ||w - v||^2 over the set gives
/// w_k = clip(v_k - tau, 0, 1) where tau >= 0 is the multiplier of the sum
/// constraint. If the plain box clip already satisfies the budget, tau = 0;
/// otherwise tau solves sum_k clip(v_k - tau, 0, 1) = budget, a continuous
/// nonincreasing piecewise-linear equation solved here by bisection on
/// [0, max(v)] to 1e-12 absolute tolerance on the sum (200 iteration cap).
inline Eigen::VectorXd project(const CappedSimplex& set,
                               const Eigen::VectorXd& v) {
  if (v.size() != set.dim) {
    throw DimensionMismatch("project: vector size does not match set dimension");
  }
  const double budget = static_cast<double>(set.budget);
  Eigen::VectorXd clipped = v.cwiseMax(0.0).cwiseMin(1.0);
  if (clipped.sum() <= budget) return clipped;

  const auto clipped_sum = [&](double tau) {
    return (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0).sum();
  };
  double lo = 0.0;
  double hi = v.maxCoeff();  // clipped_sum(hi) = 0 <= budget
  double tau = hi;
  for (int iter = 0; iter < 200; ++iter) {
    tau = 0.5 * (lo + hi);
    const double sum = clipped_sum(tau);
    if (std::abs(sum - budget) <= 1e-12) break;
    if (sum > budget) {
      lo = tau;
    } else {
      hi = tau;
    }
  }
  return (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0);
}

/// Vertex of the capped simplex minimizing <g, w>: activate the
/// min(budget, #negative) most negative entries of g. Ties between equal
/// gradient values are broken toward the lowest index so runs reproduce.
inline Eigen::VectorXd linear_minimizer(const CappedSimplex& set,
                                        const Eigen::VectorXd& g) {
  if (g.size() != set.dim) {
    throw DimensionMismatch(
        "linear_minimizer: vector size does not match set dimension");
  }
  std::vector<int> order(static_cast<size_t>(set.dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g[a] < g[b]; });
  Eigen::VectorXd w = Eigen::VectorXd::Zero(set.dim);
  int placed = 0;
  for (int idx : order) {
    if (placed >= set.budget || g[idx] >= 0.0) break;
    w[idx] = 1.0;
    ++placed;
  }
  return w;
}

}  // namespace aoed
