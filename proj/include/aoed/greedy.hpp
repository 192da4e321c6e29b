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

// Greedy sensor selection with incremental posterior updates, plus the
// exhaustive binary oracle.
//
// The greedy sweep starts from the empty design and repeatedly activates the
// sensor whose inclusion decreases J the most. Activating sensor k changes
// the posterior covariance by a rank-d downdate,
//
//   C' = C - C F_k^T M_k^-1 F_k C,   M_k = sigma^2 I_d + F_k C F_k^T,
//
// so the exact objective change is dJ_k = -tr(M_k^-1 F_k C^2 F_k^T), a d x d
// solve per candidate. PosteriorState caches what that solve needs in one of
// two equivalent forms: the n x n posterior covariance itself (dense mode),
// or the data-space kernels P = F C_post F^T and Q = F C_post^2 F^T
// (data_space mode, independent of n). Ties always break to the lowest
// index, and candidate gains within a step are evaluated into index-ordered
// slots, so sweeps are deterministic under any thread count.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <chrono>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "aoed/errors.hpp"
#include "aoed/model.hpp"
#include "aoed/parallel.hpp"

namespace aoed {

/// How greedy steps evaluate candidate gains. `automatic` picks dense when
/// n <= 1000, else data_space. `full_recompute` evaluates J(w + e_k) from
/// scratch for every candidate; it exists to validate the incremental paths
/// and must produce identical selections.
enum class GreedyStrategy { automatic, dense, data_space, full_recompute };

struct GreedyOptions {
  GreedyStrategy strategy = GreedyStrategy::automatic;
};

/// Record of one greedy (or informed) sweep. designs[i] is the binary design
/// with i+1 active sensors; objectives[i] = J(designs[i]).
struct SweepTrace {
  std::vector<Design> designs;
  std::vector<double> objectives;
  long long evaluations = 0;  // candidate-objective evaluations performed
  double wall_clock = 0.0;    // seconds
};

/// Mutable cache of the posterior under the current binary design. Gains are
/// const and safe to evaluate concurrently; activation is exclusive.
class PosteriorState {
 public:
  PosteriorState(const Model& model, const PrecomputedKernels& kernels,
                 GreedyStrategy strategy = GreedyStrategy::automatic)
      : model_(&model),
        dense_(strategy == GreedyStrategy::dense ||
               (strategy != GreedyStrategy::data_space &&
                model.param_dim <= 1000)),
        weights_(Eigen::VectorXd::Zero(model.num_sensors)),
        value_(kernels.prior_trace) {
    if (dense_) {
      cov_ = model.prior_cov;
    } else {
      p_ = kernels.data_cov;
      q_ = kernels.data_cov_sq;
    }
  }

  const Eigen::VectorXd& weights() const { return weights_; }
  double objective_value() const { return value_; }
  int active_count() const { return active_count_; }
  bool is_active(Eigen::Index k) const { return weights_[k] != 0.0; }

  /// Exact change in J from activating sensor k: dJ_k <= 0.
  double gain(Eigen::Index k) const {
    check_inactive(k);
    const Eigen::Index d = model_->block_size;
    if (dense_) {
      const Eigen::MatrixXd x = model_->sensor_block(k) * cov_;  // F_k C
      Eigen::MatrixXd mk = x * model_->sensor_block(k).transpose();
      mk.diagonal().array() += model_->noise_var;
      return -Eigen::LLT<Eigen::MatrixXd>(mk)
                  .solve(x * x.transpose())
                  .trace();
    }
    Eigen::MatrixXd mk = p_.block(k * d, k * d, d, d);
    mk.diagonal().array() += model_->noise_var;
    return -Eigen::LLT<Eigen::MatrixXd>(mk)
                .solve(q_.block(k * d, k * d, d, d))
                .trace();
  }

  /// Sets w_k = 1 and applies the rank-d posterior downdate.
  void activate(Eigen::Index k) {
    check_inactive(k);
    const Eigen::Index d = model_->block_size;
    if (dense_) {
      const Eigen::MatrixXd x = model_->sensor_block(k) * cov_;
      Eigen::MatrixXd mk = x * model_->sensor_block(k).transpose();
      mk.diagonal().array() += model_->noise_var;
      const Eigen::LLT<Eigen::MatrixXd> llt(mk);
      value_ -= llt.solve(x * x.transpose()).trace();
      cov_ -= x.transpose() * llt.solve(x);
      cov_ = 0.5 * (cov_ + cov_.transpose());
    } else {
      Eigen::MatrixXd mk = p_.block(k * d, k * d, d, d);
      mk.diagonal().array() += model_->noise_var;
      const Eigen::MatrixXd qkk = q_.block(k * d, k * d, d, d);
      const Eigen::LLT<Eigen::MatrixXd> llt(mk);
      value_ -= llt.solve(qkk).trace();
      const Eigen::MatrixXd mk_inv =
          llt.solve(Eigen::MatrixXd::Identity(d, d));
      const Eigen::MatrixXd pc = p_.middleCols(k * d, d);   // P[:, block k]
      const Eigen::MatrixXd qc = q_.middleCols(k * d, d);   // Q[:, block k]
      const Eigen::MatrixXd pcb = pc * mk_inv;
      q_ -= qc * pcb.transpose() + pcb * qc.transpose() -
            pcb * qkk * pcb.transpose();
      p_ -= pcb * pc.transpose();
      p_ = 0.5 * (p_ + p_.transpose());
      q_ = 0.5 * (q_ + q_.transpose());
    }
    weights_[k] = 1.0;
    ++active_count_;
  }

 private:
  void check_inactive(Eigen::Index k) const {
    if (k < 0 || k >= model_->num_sensors) {
      throw DimensionMismatch("sensor index out of range");
    }
    if (is_active(k)) {
      throw IndexActive("sensor " + std::to_string(k) + " is already active");
    }
  }

  const Model* model_;
  bool dense_;
  Eigen::VectorXd weights_;
  double value_;
  int active_count_ = 0;
  Eigen::MatrixXd cov_;  // dense mode: C_post, n x n
  Eigen::MatrixXd p_;    // data_space mode: F C_post F^T
  Eigen::MatrixXd q_;    // data_space mode: F C_post^2 F^T
};

/// dJ_k for activating sensor k under the cached posterior;
/// J(w + e_k) = J(w) + incremental_gain(state, k).
inline double incremental_gain(const PosteriorState& state, Eigen::Index k) {
  return state.gain(k);
}

namespace detail {

/// Gains (or from-scratch objectives) for all inactive candidates, written
/// into index-ordered slots; active slots stay +inf. Returns the argmin,
/// lowest index on ties.
template <typename Candidate>
Eigen::Index argmin_candidates(Eigen::Index m, std::vector<double>& values,
                               const Candidate& candidate) {
  values.assign(static_cast<size_t>(m),
                std::numeric_limits<double>::infinity());
  parallel_for(m, [&](long k) { candidate(k, values[static_cast<size_t>(k)]); });
  Eigen::Index best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < m; ++k) {
    if (values[static_cast<size_t>(k)] < best_value) {
      best_value = values[static_cast<size_t>(k)];
      best = k;
    }
  }
  return best;
}

}  // namespace detail

/// Algorithm: starting from w = 0, activate the best sensor m_max times,
/// recording every intermediate design. Evaluation count is exactly
/// sum_{i=0}^{m_max-1} (m - i).
inline SweepTrace greedy_sweep(const Model& model,
                               const PrecomputedKernels& kernels, int m_max,
                               const GreedyOptions& opts = {}) {
  if (m_max < 1 || m_max > model.num_sensors) {
    throw InvalidBudget("m_max must be in [1, m]");
  }
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index m = model.num_sensors;
  SweepTrace trace;
  trace.designs.reserve(m_max);
  trace.objectives.reserve(m_max);
  std::vector<double> values;

  if (opts.strategy == GreedyStrategy::full_recompute) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    for (int step = 0; step < m_max; ++step) {
      const Eigen::Index best =
          detail::argmin_candidates(m, values, [&](long k, double& out) {
            if (w[k] != 0.0) return;
            Eigen::VectorXd wk = w;
            wk[k] = 1.0;
            out = objective(model, kernels, wk);
          });
      trace.evaluations += m - step;
      w[best] = 1.0;
      trace.designs.push_back(Design{w, step + 1});
      trace.objectives.push_back(values[static_cast<size_t>(best)]);
    }
  } else {
    PosteriorState state(model, kernels, opts.strategy);
    for (int step = 0; step < m_max; ++step) {
      const Eigen::Index best =
          detail::argmin_candidates(m, values, [&](long k, double& out) {
            if (state.is_active(k)) return;
            out = state.gain(k);
          });
      trace.evaluations += m - step;
      state.activate(best);
      trace.designs.push_back(Design{state.weights(), step + 1});
      trace.objectives.push_back(state.objective_value());
    }
  }
  trace.wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return trace;
}

/// Greedy steps from a binary starting design (not from 0) until it has
/// target_count active sensors.
inline Design greedy_fill(const Model& model, const PrecomputedKernels& kernels,
                          const Eigen::VectorXd& w_init, int target_count,
                          const GreedyOptions& opts = {}) {
  detail::check_weights(model, w_init);
  int initial_count = 0;
  for (Eigen::Index k = 0; k < w_init.size(); ++k) {
    if (w_init[k] == 1.0) {
      ++initial_count;
    } else if (w_init[k] != 0.0) {
      throw NotBinary("greedy_fill requires a binary starting design");
    }
  }
  if (target_count < initial_count || target_count > model.num_sensors) {
    throw InvalidBudget("target_count must be in [popcount(w_init), m]");
  }

  PosteriorState state(model, kernels,
                       opts.strategy == GreedyStrategy::full_recompute
                           ? GreedyStrategy::automatic
                           : opts.strategy);
  for (Eigen::Index k = 0; k < w_init.size(); ++k) {
    if (w_init[k] == 1.0) state.activate(k);
  }
  std::vector<double> values;
  const Eigen::Index m = model.num_sensors;
  while (state.active_count() < target_count) {
    const Eigen::Index best =
        detail::argmin_candidates(m, values, [&](long k, double& out) {
          if (state.is_active(k)) return;
          out = state.gain(k);
        });
    state.activate(best);
  }
  return Design{state.weights(), target_count};
}

/// Exhaustive minimizer of J over binary designs with exactly m0 ones.
/// Guarded to C(m, m0) <= 10^6 candidates. Ties resolve to the
/// lexicographically smallest weight vector.
inline std::pair<Design, double> brute_force_best(
    const Model& model, const PrecomputedKernels& kernels, int m0) {
  const Eigen::Index m = model.num_sensors;
  if (m0 < 1 || m0 > m) throw InvalidBudget("m0 must be in [1, m]");

  double count = 1.0;
  for (int i = 0; i < m0; ++i) {
    count *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    if (count > 1e6) {
      throw TooLarge("C(m, m0) exceeds the 10^6 enumeration guard");
    }
  }

  std::vector<Eigen::Index> active(static_cast<size_t>(m0));
  for (int i = 0; i < m0; ++i) active[static_cast<size_t>(i)] = i;

  Eigen::VectorXd best_w;
  double best_value = std::numeric_limits<double>::infinity();
  while (true) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    for (Eigen::Index k : active) w[k] = 1.0;
    const double value = objective(model, kernels, w);
    if (value < best_value ||
        (value == best_value &&
         std::lexicographical_compare(w.data(), w.data() + m, best_w.data(),
                                      best_w.data() + m))) {
      best_value = value;
      best_w = w;
    }
    // Next m0-combination of {0..m-1} in lexicographic index order.
    int i = m0 - 1;
    while (i >= 0 && active[static_cast<size_t>(i)] == m - m0 + i) --i;
    if (i < 0) break;
    ++active[static_cast<size_t>(i)];
    for (int j = i + 1; j < m0; ++j) {
      active[static_cast<size_t>(j)] = active[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return {Design{best_w, m0}, best_value};
}

}  // namespace aoed
