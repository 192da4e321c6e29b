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

// Global-optimum-informed greedy sweep and the greedy-vs-informed
// comparison report.
//
// The informed sweep interleaves relaxed solves with greedy refills. The
// first recorded design (budget m0_start) is plain greedy. For every larger
// budget m0 the sweep solves the relaxed problem at m0, removes from the
// running design every index the certificate classifies redundant (an index
// the relaxed optimum provably assigns weight 0), greedily refills to m0
// active sensors, and records the result. The relaxed solves also provide
// J(w*), the lower bound no binary design at the same budget can beat.
//
// Pruning requires a converged relaxed solve; when a solve stops at the
// iteration cap its J value is still recorded but no pruning happens that
// step. With prune_every > 1, budgets between scheduled solves skip steps
// (i)-(ii) entirely and record NaN in relaxed_objectives.

#include <Eigen/Core>

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoed/csv.hpp"
#include "aoed/errors.hpp"
#include "aoed/greedy.hpp"
#include "aoed/model.hpp"
#include "aoed/relaxed.hpp"

namespace aoed {

struct InformedOptions {
  SolverOptions solver;     // forwarded to every relaxed solve
  GreedyOptions greedy;     // forwarded to the fill steps
  int prune_every = 1;      // solve/prune period in budget steps
  double tol_grad = -1.0;   // certificate band; < 0 selects the default
  bool warm_start = true;   // seed each solve from the previous optimum
};

/// Record of one informed sweep. Entry i describes budget m0_start + i.
/// relaxed_objectives holds J(w*) where a solve ran, NaN where prune_every
/// skipped it. pruned_counts is the number of active indices removed in step
/// (ii); reintroduced_counts is the number of redundant indices the greedy
/// refill activated again in the same step.
struct InformedTrace {
  int m0_start = 0;
  std::vector<Design> designs;
  std::vector<double> objectives;
  std::vector<double> relaxed_objectives;
  std::vector<int> pruned_counts;
  std::vector<int> reintroduced_counts;
  double relaxed_seconds = 0.0;
  double total_seconds = 0.0;
};

struct ComparisonRow {
  int m0;
  double j_greedy;
  double j_informed;
  double j_relaxed;          // NaN where the informed sweep skipped the solve
  double rel_improvement;    // (j_greedy - j_informed) / j_greedy
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double mean_improvement = 0.0;
  double best_improvement = 0.0;
  double fraction_not_worse = 0.0;  // share of rows with j_informed <= j_greedy
  double greedy_seconds = 0.0;
  double informed_seconds = 0.0;
  double relaxed_seconds = 0.0;  // relaxed-solve share of informed_seconds
};

inline InformedTrace informed_sweep(const Model& model,
                                    const PrecomputedKernels& kernels,
                                    int m0_start, int m_max,
                                    const InformedOptions& opts = {}) {
  if (m0_start < 1 || m0_start > m_max || m_max > model.num_sensors) {
    throw InvalidBudget("need 1 <= m0_start <= m_max <= m");
  }
  if (opts.prune_every < 1) throw InvalidBudget("prune_every must be >= 1");

  const auto sweep_start = std::chrono::steady_clock::now();
  InformedTrace trace;
  trace.m0_start = m0_start;

  Eigen::VectorXd warm;
  auto run_relaxed = [&](int m0) {
    SolverOptions solver = opts.solver;
    if (opts.warm_start && warm.size() > 0) {
      solver.init = warm * (static_cast<double>(m0) / warm.sum());
    }
    const auto t0 = std::chrono::steady_clock::now();
    RelaxedSolution sol = solve_relaxed(model, kernels, m0, solver);
    trace.relaxed_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    warm = sol.w_star.weights;
    return sol;
  };

  Design current = greedy_fill(model, kernels,
                               Eigen::VectorXd::Zero(model.num_sensors),
                               m0_start, opts.greedy);
  trace.designs.push_back(current);
  trace.objectives.push_back(objective(model, kernels, current.weights));
  // The initial design is recorded unpruned; the solve here only supplies
  // the lower-bound value.
  trace.relaxed_objectives.push_back(run_relaxed(m0_start).objective_value);
  trace.pruned_counts.push_back(0);
  trace.reintroduced_counts.push_back(0);

  for (int m0 = m0_start + 1; m0 <= m_max; ++m0) {
    int pruned = 0;
    int reintroduced = 0;
    double relaxed_value = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd w = current.weights;

    if ((m0 - m0_start) % opts.prune_every == 0) {
      const RelaxedSolution sol = run_relaxed(m0);
      relaxed_value = sol.objective_value;
      if (sol.converged) {
        const Certificate cert =
            certify_solution(model, kernels, sol, opts.tol_grad);
        const std::vector<Eigen::Index> redundant = classify_redundant(cert);
        for (Eigen::Index k : redundant) {
          if (w[k] == 1.0) {
            w[k] = 0.0;
            ++pruned;
          }
        }
        current = greedy_fill(model, kernels, w, m0, opts.greedy);
        for (Eigen::Index k : redundant) {
          if (current.weights[k] == 1.0) ++reintroduced;
        }
      } else {
        current = greedy_fill(model, kernels, w, m0, opts.greedy);
      }
    } else {
      current = greedy_fill(model, kernels, w, m0, opts.greedy);
    }

    trace.designs.push_back(current);
    trace.objectives.push_back(objective(model, kernels, current.weights));
    trace.relaxed_objectives.push_back(relaxed_value);
    trace.pruned_counts.push_back(pruned);
    trace.reintroduced_counts.push_back(reintroduced);
  }

  trace.total_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - sweep_start)
                            .count();
  return trace;
}

/// Per-budget comparison of a plain greedy trace against an informed trace
/// over the overlap of their budget ranges.
inline ComparisonReport compare_sweeps(const SweepTrace& greedy_trace,
                                       const InformedTrace& informed_trace) {
  if (greedy_trace.designs.empty() || informed_trace.designs.empty()) {
    throw RangeMismatch("cannot compare empty traces");
  }
  // Greedy traces cover budgets 1..len; informed traces m0_start..m0_start+len-1.
  const int greedy_max = static_cast<int>(greedy_trace.designs.size());
  const int lo = informed_trace.m0_start;
  const int hi = informed_trace.m0_start +
                 static_cast<int>(informed_trace.designs.size()) - 1;
  if (lo > greedy_max) {
    throw RangeMismatch("budget ranges do not overlap");
  }

  ComparisonReport report;
  report.greedy_seconds = greedy_trace.wall_clock;
  report.informed_seconds = informed_trace.total_seconds;
  report.relaxed_seconds = informed_trace.relaxed_seconds;

  int not_worse = 0;
  for (int m0 = lo; m0 <= std::min(hi, greedy_max); ++m0) {
    ComparisonRow row;
    row.m0 = m0;
    row.j_greedy = greedy_trace.objectives[static_cast<size_t>(m0 - 1)];
    row.j_informed = informed_trace.objectives[static_cast<size_t>(m0 - lo)];
    row.j_relaxed =
        informed_trace.relaxed_objectives[static_cast<size_t>(m0 - lo)];
    row.rel_improvement = (row.j_greedy - row.j_informed) / row.j_greedy;
    if (row.j_informed <= row.j_greedy) ++not_worse;
    report.rows.push_back(row);
  }

  double sum = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const ComparisonRow& row : report.rows) {
    sum += row.rel_improvement;
    best = std::max(best, row.rel_improvement);
  }
  report.mean_improvement = sum / static_cast<double>(report.rows.size());
  report.best_improvement = best;
  report.fraction_not_worse =
      static_cast<double>(not_worse) / static_cast<double>(report.rows.size());
  return report;
}

/// CSV form of the report: a header row, then one row per budget, all values
/// at full precision. Deterministic for deterministic traces.
inline std::string comparison_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "m0,J_greedy,J_informed,J_relaxed,rel_improvement\n";
  for (const ComparisonRow& row : report.rows) {
    out << row.m0 << ',' << format_double(row.j_greedy) << ','
        << format_double(row.j_informed) << ',' << format_double(row.j_relaxed)
        << ',' << format_double(row.rel_improvement) << '\n';
  }
  return out.str();
}

/// JSON form: the CSV rows plus summary and timing blocks. The timing block
/// holds measured wall-clock seconds and is the only part that varies
/// between identical runs. NaN values serialize as null.
inline nlohmann::json comparison_json(const ComparisonReport& report) {
  auto number_or_null = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const ComparisonRow& row : report.rows) {
    rows.push_back({{"m0", row.m0},
                    {"J_greedy", row.j_greedy},
                    {"J_informed", row.j_informed},
                    {"J_relaxed", number_or_null(row.j_relaxed)},
                    {"rel_improvement", row.rel_improvement}});
  }
  return nlohmann::json{
      {"rows", rows},
      {"summary",
       {{"mean_improvement", report.mean_improvement},
        {"best_improvement", report.best_improvement},
        {"fraction_not_worse", report.fraction_not_worse}}},
      {"timing",
       {{"greedy_seconds", report.greedy_seconds},
        {"informed_seconds", report.informed_seconds},
        {"relaxed_seconds", report.relaxed_seconds}}}};
}

}  // namespace aoed
