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

// Shared fixtures for the test suite: canonical analytic models, seeded
// random models, random feasible points, and finite-difference oracles.

#include <Eigen/Core>

#include <vector>

#include "aoed/aoed.hpp"

namespace aoed_test {

/// F = I, C_prior = diag(variances), sigma^2 = noise_var: the family with
/// closed-form J(w) = sum_k c_k / (1 + c_k w_k) at unit noise.
inline aoed::Model diagonal_model(const std::vector<double>& variances,
                                  double noise_var = 1.0) {
  aoed::ProblemSpec spec;
  spec.family = aoed::ProblemFamily::diagonal;
  spec.variances = variances;
  spec.noise_var = noise_var;
  return aoed::generate(spec);
}

inline aoed::Model random_model(int m, int d, int n, std::uint64_t seed,
                                double noise_percent = 1.0) {
  aoed::ProblemSpec spec;
  spec.family = aoed::ProblemFamily::random_gaussian;
  spec.m = m;
  spec.d = d;
  spec.n = n;
  spec.seed = seed;
  spec.noise_percent = noise_percent;
  return aoed::generate(spec);
}

inline aoed::Model grid_model(int m, int d, int n, std::uint64_t seed,
                              double length_scale = 0.3) {
  aoed::ProblemSpec spec;
  spec.family = aoed::ProblemFamily::grid_source;
  spec.m = m;
  spec.d = d;
  spec.n = n;
  spec.seed = seed;
  spec.length_scale = length_scale;
  return aoed::generate(spec);
}

/// Uniform point of [0,1]^m rescaled into the budget: always feasible.
inline Eigen::VectorXd random_feasible(int m, int budget,
                                       aoed::SplitMix64& rng) {
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) w[k] = rng.next_double();
  const double sum = w.sum();
  if (sum > budget) w *= budget / sum;
  return w;
}

/// Interior random point with entries in [lo, hi], for derivative checks
/// away from the boundary.
inline Eigen::VectorXd random_interior(int m, double lo, double hi,
                                       aoed::SplitMix64& rng) {
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) w[k] = rng.next_double(lo, hi);
  return w;
}

/// Central finite-difference gradient of the objective.
inline Eigen::VectorXd fd_gradient(const aoed::Model& model,
                                   const aoed::PrecomputedKernels& kernels,
                                   const Eigen::VectorXd& w, double h) {
  Eigen::VectorXd g(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    Eigen::VectorXd wp = w, wm = w;
    wp[k] += h;
    wm[k] -= h;
    g[k] = (aoed::objective(model, kernels, wp) -
            aoed::objective(model, kernels, wm)) /
           (2.0 * h);
  }
  return g;
}

/// Central finite-difference directional derivative of the gradient,
/// approximating H(w) v.
inline Eigen::VectorXd fd_hessian_apply(const aoed::Model& model,
                                        const aoed::PrecomputedKernels& kernels,
                                        const Eigen::VectorXd& w,
                                        const Eigen::VectorXd& v, double h) {
  return (aoed::gradient(model, kernels, w + h * v) -
          aoed::gradient(model, kernels, w - h * v)) /
         (2.0 * h);
}

}  // namespace aoed_test
