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

// Relaxed A-optimal design: minimize the convex objective J over the capped
// simplex, and certify first-order global optimality.
//
// The solver is projected gradient with a Barzilai-Borwein step and Armijo
// backtracking along the projection arc. Since J is convex, smooth on the
// feasible set, and the projection is exact, the first-order condition is
// also sufficient: w is the global relaxed optimum iff w equals the
// projection of w - t grad J(w) for any t > 0.
//
// The certificate implements the equivalent order statistic test. Sort the
// gradient at w ascending; with budget m0, every index whose gradient lies
// strictly below the (m0+1)-th sorted value must carry weight 1 (dominant),
// every index strictly above the m0-th sorted value must carry weight 0
// (redundant), and the weights must sum to m0. Strictness is implemented
// with a tolerance band tol_grad; indices inside the band are classified
// intermediate and never raise violations, which makes the test insensitive
// to roundoff in near-tied gradients.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "aoed/errors.hpp"
#include "aoed/model.hpp"
#include "aoed/simplex.hpp"

namespace aoed {

struct SolverOptions {
  int max_iters = 2000;
  double tol_pg = 1e-8;    // threshold on ||w - project(w - grad J(w))||
  Eigen::VectorXd init;    // empty: start from (m0/m) * ones
};

struct RelaxedSolution {
  Design w_star;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_step_criterion = 0.0;  // last projected-gradient norm
  std::vector<double> objective_history;  // J per accepted iterate, nonincreasing
};

enum class IndexClass { dominant, redundant, intermediate };

/// One failed optimality condition: 'a' (dominant index without weight 1),
/// 'b' (redundant index without weight 0), or 'c' (weights do not sum to the
/// budget; index is -1 for this global condition).
struct CertificateViolation {
  Eigen::Index index;
  char condition;
};

struct Certificate {
  Eigen::VectorXd sorted_gradient;         // ascending
  std::vector<Eigen::Index> permutation;   // sorted position -> original index
  double threshold_low = 0.0;   // sorted value at position m0 (1-based)
  double threshold_high = 0.0;  // value at position m0+1; +inf when m0 = m
  std::vector<IndexClass> classification;  // per original index
  bool is_optimal = false;
  std::vector<CertificateViolation> violations;
  bool source_converged = true;  // false when certifying a failed solve
  int budget = 0;
  double tol_grad = 0.0;
};

/// Sorted-gradient optimality test at w for budget m0. tol_grad < 0 selects
/// the default band 1e-6 * ||grad J(w)||_inf.
inline Certificate certify(const Model& model, const PrecomputedKernels& kernels,
                           const Eigen::VectorXd& w, int m0,
                           double tol_grad = -1.0) {
  detail::check_weights(model, w);
  const Eigen::Index m = model.num_sensors;
  if (m0 < 1 || m0 > m) throw InvalidBudget("m0 must be in [1, m]");

  const Eigen::VectorXd g = gradient(model, kernels, w);
  Certificate cert;
  cert.budget = m0;
  cert.tol_grad = tol_grad >= 0.0 ? tol_grad : 1e-6 * g.cwiseAbs().maxCoeff();

  cert.permutation.resize(static_cast<size_t>(m));
  std::iota(cert.permutation.begin(), cert.permutation.end(), Eigen::Index{0});
  std::stable_sort(cert.permutation.begin(), cert.permutation.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return g[a] < g[b]; });
  cert.sorted_gradient.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    cert.sorted_gradient[i] = g[cert.permutation[static_cast<size_t>(i)]];
  }
  cert.threshold_low = cert.sorted_gradient[m0 - 1];
  cert.threshold_high = m0 < m ? cert.sorted_gradient[m0]
                               : std::numeric_limits<double>::infinity();

  // An index cannot satisfy both strict comparisons: a gradient value above
  // threshold_low sits at sorted position >= m0 and is therefore >=
  // threshold_high.
  cert.classification.resize(static_cast<size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    IndexClass label = IndexClass::intermediate;
    if (g[k] < cert.threshold_high - cert.tol_grad) {
      label = IndexClass::dominant;
      if (std::abs(w[k] - 1.0) > 1e-6) cert.violations.push_back({k, 'a'});
    } else if (g[k] > cert.threshold_low + cert.tol_grad) {
      label = IndexClass::redundant;
      if (std::abs(w[k]) > 1e-6) cert.violations.push_back({k, 'b'});
    }
    cert.classification[static_cast<size_t>(k)] = label;
  }
  if (std::abs(w.sum() - static_cast<double>(m0)) > 1e-6) {
    cert.violations.push_back({Eigen::Index{-1}, 'c'});
  }
  cert.is_optimal = cert.violations.empty();
  return cert;
}

/// Indices classified redundant, ascending: the candidates the informed
/// sweep removes. Refuses to classify from an unconverged solve.
inline std::vector<Eigen::Index> classify_redundant(const Certificate& cert) {
  if (!cert.source_converged) {
    throw NotCertified("certificate derives from an unconverged solve");
  }
  std::vector<Eigen::Index> redundant;
  for (size_t k = 0; k < cert.classification.size(); ++k) {
    if (cert.classification[k] == IndexClass::redundant) {
      redundant.push_back(static_cast<Eigen::Index>(k));
    }
  }
  return redundant;
}

/// Projected-gradient solve of the relaxed problem at budget m0.
inline RelaxedSolution solve_relaxed(const Model& model,
                                     const PrecomputedKernels& kernels, int m0,
                                     const SolverOptions& opts = {}) {
  const Eigen::Index m = model.num_sensors;
  if (m0 < 1 || m0 > m) throw InvalidBudget("m0 must be in [1, m]");
  const CappedSimplex set{static_cast<int>(m), m0};

  Eigen::VectorXd w;
  if (opts.init.size() == 0) {
    w = Eigen::VectorXd::Constant(m, static_cast<double>(m0) /
                                         static_cast<double>(m));
  } else {
    if (opts.init.size() != m) {
      throw DimensionMismatch("initial point has wrong length");
    }
    w = project(set, opts.init);
  }

  Eigen::VectorXd g(m);
  double value = objective_gradient(model, kernels, w, g);
  if (!std::isfinite(value) || !g.allFinite()) {
    throw NonFiniteObjective("objective is not finite at the initial point");
  }

  RelaxedSolution sol;
  sol.objective_history.push_back(value);
  double alpha = 1.0 / std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  double pg_norm = (w - project(set, w - g)).norm();

  // Near the optimum the Armijo test loses resolution: achievable objective
  // decrease falls below the roundoff of J while the gradient is still
  // accurate to machine precision. Once the line search exhausts, a polish
  // phase takes projected-gradient steps accepted on strict decrease of the
  // projected-gradient norm instead of the objective.
  bool polish = false;
  while (sol.iterations < opts.max_iters) {
    if (pg_norm <= opts.tol_pg) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;

    if (!polish) {
      // Armijo backtracking along the projection arc; the projected step
      // direction is always a descent direction for feasible w.
      double step = alpha;
      Eigen::VectorXd w_next;
      double value_next = value;
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving) {
        Eigen::VectorXd candidate = project(set, w - step * g);
        const double model_decrease = g.dot(candidate - w);
        const double candidate_value = objective(model, kernels, candidate);
        if (!std::isfinite(candidate_value)) {
          throw NonFiniteObjective("objective became non-finite in line search");
        }
        if (candidate_value <= value + 1e-4 * model_decrease) {
          w_next = std::move(candidate);
          value_next = candidate_value;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        polish = true;
        continue;
      }

      Eigen::VectorXd g_next(m);
      objective_gradient(model, kernels, w_next, g_next);
      if (!g_next.allFinite()) {
        throw NonFiniteObjective("gradient became non-finite");
      }

      // Barzilai-Borwein step s's / s'y, clamped; convexity keeps s'y >= 0.
      const Eigen::VectorXd s = w_next - w;
      const Eigen::VectorXd y = g_next - g;
      const double sy = s.dot(y);
      alpha = sy > 0.0 ? std::clamp(s.dot(s) / sy, 1e-12, 1e12) : 1e12;

      w = std::move(w_next);
      g = std::move(g_next);
      value = value_next;
      sol.objective_history.push_back(value);
      pg_norm = (w - project(set, w - g)).norm();
    } else {
      double step = alpha;
      Eigen::VectorXd w_next, g_next(m);
      double value_next = value;
      double pg_next = pg_norm;
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving) {
        Eigen::VectorXd candidate = project(set, w - step * g);
        Eigen::VectorXd candidate_grad(m);
        const double candidate_value =
            objective_gradient(model, kernels, candidate, candidate_grad);
        if (!std::isfinite(candidate_value) || !candidate_grad.allFinite()) {
          throw NonFiniteObjective("objective became non-finite in polish");
        }
        const double candidate_pg =
            (candidate - project(set, candidate - candidate_grad)).norm();
        if (candidate_pg < pg_norm) {
          w_next = std::move(candidate);
          g_next = std::move(candidate_grad);
          value_next = candidate_value;
          pg_next = candidate_pg;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;  // stationarity at the numerical floor

      const Eigen::VectorXd s = w_next - w;
      const Eigen::VectorXd y = g_next - g;
      const double sy = s.dot(y);
      alpha = sy > 0.0 ? std::clamp(s.dot(s) / sy, 1e-12, 1e12) : 1e12;

      w = std::move(w_next);
      g = std::move(g_next);
      value = value_next;
      if (value <= sol.objective_history.back()) {
        sol.objective_history.push_back(value);
      }
      pg_norm = pg_next;
    }
  }

  sol.w_star = Design{w, m0};
  sol.objective_value = value;
  sol.final_step_criterion = pg_norm;
  return sol;
}

/// Certificate for a solver result, carrying its convergence status.
inline Certificate certify_solution(const Model& model,
                                    const PrecomputedKernels& kernels,
                                    const RelaxedSolution& sol,
                                    double tol_grad = -1.0) {
  Certificate cert =
      certify(model, kernels, sol.w_star.weights, sol.w_star.budget, tol_grad);
  cert.source_converged = sol.converged;
  return cert;
}

}  // namespace aoed
