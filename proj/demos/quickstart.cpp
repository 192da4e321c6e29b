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

// End-to-end tour on a small seeded problem: generate a model, solve the
// relaxed problem, certify it, and compare plain greedy against the
// informed sweep.

#include <cstdio>

#include "aoed/aoed.hpp"

int main() {
  aoed::ProblemSpec spec = aoed::pruning_demo_spec();
  const aoed::Model model = aoed::generate(spec);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  std::printf("model: m=%ld sensors, d=%ld measurements each, n=%ld parameters\n",
              long(model.num_sensors), long(model.block_size),
              long(model.param_dim));

  const int m0 = 6;
  const aoed::RelaxedSolution relaxed =
      aoed::solve_relaxed(model, kernels, m0);
  const aoed::Certificate cert =
      aoed::certify_solution(model, kernels, relaxed);
  std::printf("relaxed optimum at budget %d: J = %.6f, certified %s, "
              "%zu redundant indices\n",
              m0, relaxed.objective_value, cert.is_optimal ? "yes" : "no",
              aoed::classify_redundant(cert).size());

  const aoed::SweepTrace greedy = aoed::greedy_sweep(model, kernels, 10);
  const aoed::InformedTrace informed =
      aoed::informed_sweep(model, kernels, 3, 10);
  const aoed::ComparisonReport report = aoed::compare_sweeps(greedy, informed);
  std::printf("\n%s", aoed::comparison_csv(report).c_str());
  std::printf("\nmean improvement %.2f%%, best %.2f%%\n",
              100.0 * report.mean_improvement,
              100.0 * report.best_improvement);
  return 0;
}
