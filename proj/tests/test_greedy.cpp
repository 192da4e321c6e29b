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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "aoed/greedy.hpp"
#include "aoed/relaxed.hpp"
#include "support.hpp"

using Eigen::VectorXd;

TEST_CASE("sweep on the diagonal family follows the variance order",
          "[greedy]") {
  const aoed::Model model = aoed_test::diagonal_model({4.0, 1.0, 0.25});
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const aoed::SweepTrace trace = aoed::greedy_sweep(model, kernels, 3);

  REQUIRE(trace.designs.size() == 3);
  CHECK(trace.designs[0].weights[0] == 1.0);
  CHECK(trace.designs[1].weights[1] == 1.0);
  CHECK(trace.designs[2].weights[2] == 1.0);
  CHECK(trace.objectives[0] == Catch::Approx(2.05).epsilon(1e-12));
  CHECK(trace.objectives[1] == Catch::Approx(1.55).epsilon(1e-12));
  CHECK(trace.objectives[2] == Catch::Approx(1.50).epsilon(1e-12));
  CHECK(trace.evaluations == 3 + 2 + 1);
}

TEST_CASE("ties break to the lowest index", "[greedy]") {
  const aoed::Model model = aoed_test::diagonal_model({1.0, 1.0});
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const aoed::SweepTrace trace = aoed::greedy_sweep(model, kernels, 1);
  CHECK(trace.designs[0].weights[0] == 1.0);
  CHECK(trace.designs[0].weights[1] == 0.0);
  CHECK(trace.objectives[0] == Catch::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("first greedy pick equals the exhaustive single-sensor optimum",
          "[greedy]") {
  const aoed::Model model = aoed_test::random_model(8, 1, 12, 31);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const aoed::SweepTrace trace = aoed::greedy_sweep(model, kernels, 2);
  const auto [best, value] = aoed::brute_force_best(model, kernels, 1);
  CHECK((trace.designs[0].weights - best.weights).norm() == 0.0);
  CHECK(trace.objectives[0] == Catch::Approx(value).epsilon(1e-12));
}

TEST_CASE("greedy_fill starts from a partial design", "[greedy]") {
  const aoed::Model model = aoed_test::diagonal_model({4.0, 1.0, 0.25});
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);

  VectorXd init(3);
  init << 0, 1, 0;
  const aoed::Design filled = aoed::greedy_fill(model, kernels, init, 2);
  CHECK(filled.weights[0] == 1.0);
  CHECK(filled.weights[1] == 1.0);
  CHECK(filled.weights[2] == 0.0);

  // Already-full designs return unchanged; filling from zero equals a sweep.
  CHECK((aoed::greedy_fill(model, kernels, init, 1).weights - init).norm() ==
        0.0);
  const aoed::SweepTrace trace = aoed::greedy_sweep(model, kernels, 2);
  CHECK((aoed::greedy_fill(model, kernels, VectorXd::Zero(3), 2).weights -
         trace.designs[1].weights)
            .norm() == 0.0);

  VectorXd fractional(3);
  fractional << 0.5, 0, 0;
  CHECK_THROWS_AS(aoed::greedy_fill(model, kernels, fractional, 2),
                  aoed::NotBinary);
  CHECK_THROWS_AS(aoed::greedy_fill(model, kernels, init, 0),
                  aoed::InvalidBudget);
}

TEST_CASE("incremental gains equal objective differences", "[greedy]") {
  const aoed::Model identity = aoed_test::diagonal_model({1.0, 1.0});
  const aoed::PrecomputedKernels ki = aoed::precompute(identity);
  aoed::PosteriorState state(identity, ki);
  CHECK(aoed::incremental_gain(state, 0) == Catch::Approx(-0.5));

  const aoed::Model diagonal = aoed_test::diagonal_model({4.0, 1.0});
  const aoed::PrecomputedKernels kd = aoed::precompute(diagonal);
  aoed::PosteriorState state2(diagonal, kd);
  CHECK(aoed::incremental_gain(state2, 0) ==
        Catch::Approx(-16.0 / 5).epsilon(1e-12));

  // On a random model, J(w) + gain(k) equals objective(w + e_k).
  const aoed::Model model = aoed_test::random_model(6, 2, 9, 17);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  for (aoed::GreedyStrategy strategy :
       {aoed::GreedyStrategy::dense, aoed::GreedyStrategy::data_space}) {
    aoed::PosteriorState state3(model, kernels, strategy);
    state3.activate(2);
    state3.activate(4);
    VectorXd w = state3.weights();
    for (Eigen::Index k : {0, 1, 3, 5}) {
      VectorXd wk = w;
      wk[k] = 1.0;
      const double direct = aoed::objective(model, kernels, wk);
      const double incremental =
          aoed::objective(model, kernels, w) + aoed::incremental_gain(state3, k);
      REQUIRE(std::abs(direct - incremental) <= 1e-10 * std::abs(direct));
    }
    CHECK_THROWS_AS(state3.gain(2), aoed::IndexActive);
    CHECK_THROWS_AS(state3.activate(4), aoed::IndexActive);
  }
}

TEST_CASE("brute force enumerates the binary optimum", "[greedy]") {
  const aoed::Model diagonal = aoed_test::diagonal_model({4.0, 1.0});
  const aoed::PrecomputedKernels kd = aoed::precompute(diagonal);
  const auto [best, value] = aoed::brute_force_best(diagonal, kd, 1);
  CHECK(best.weights[0] == 1.0);
  CHECK(best.weights[1] == 0.0);
  CHECK(value == Catch::Approx(1.8).epsilon(1e-12));

  // Full budget has a single candidate.
  const auto [all, all_value] = aoed::brute_force_best(diagonal, kd, 2);
  CHECK(all.weights.sum() == 2.0);

  // Exact ties resolve to the lexicographically smallest weight vector.
  const aoed::Model identity = aoed_test::diagonal_model({1.0, 1.0});
  const aoed::PrecomputedKernels ki = aoed::precompute(identity);
  const auto [tie, tie_value] = aoed::brute_force_best(identity, ki, 1);
  CHECK(tie.weights[0] == 0.0);
  CHECK(tie.weights[1] == 1.0);

  const aoed::Model big = aoed_test::random_model(40, 1, 5, 1);
  const aoed::PrecomputedKernels kb = aoed::precompute(big);
  CHECK_THROWS_AS(aoed::brute_force_best(big, kb, 20), aoed::TooLarge);
}

TEST_CASE("relaxed optimum lower-bounds the enumerated binary optimum",
          "[greedy]") {
  const aoed::Model model = aoed_test::random_model(10, 1, 15, 5);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const auto [best, value] = aoed::brute_force_best(model, kernels, 3);
  const aoed::RelaxedSolution sol = aoed::solve_relaxed(model, kernels, 3);
  CHECK(sol.objective_value <= value + 1e-9);
}

TEST_CASE("sweeps are nested with nonincreasing objectives", "[greedy]") {
  const aoed::Model model = aoed_test::random_model(12, 2, 16, 23);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const aoed::SweepTrace trace = aoed::greedy_sweep(model, kernels, 12);
  for (size_t i = 0; i < trace.designs.size(); ++i) {
    CHECK(trace.designs[i].is_binary());
    CHECK(trace.designs[i].active_count() == static_cast<int>(i) + 1);
    if (i > 0) {
      CHECK(trace.objectives[i] <= trace.objectives[i - 1]);
      // Nestedness: the previous design's support is contained in this one.
      CHECK((trace.designs[i].weights - trace.designs[i - 1].weights)
                .minCoeff() >= 0.0);
    }
  }

  // Greedy at the brute-force budget cannot beat the enumerated optimum.
  const auto [best, value] = aoed::brute_force_best(model, kernels, 4);
  CHECK(trace.objectives[3] >= value - 1e-9);
}

TEST_CASE("all evaluation strategies select identical designs", "[greedy]") {
  const aoed::Model model = aoed_test::random_model(50, 1, 60, 2);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);

  const aoed::SweepTrace dense = aoed::greedy_sweep(
      model, kernels, 20, {aoed::GreedyStrategy::dense});
  const aoed::SweepTrace data_space = aoed::greedy_sweep(
      model, kernels, 20, {aoed::GreedyStrategy::data_space});
  const aoed::SweepTrace recompute = aoed::greedy_sweep(
      model, kernels, 20, {aoed::GreedyStrategy::full_recompute});

  CHECK(dense.evaluations == 50 * 20 - 20 * 19 / 2);
  CHECK(data_space.evaluations == dense.evaluations);
  CHECK(recompute.evaluations == dense.evaluations);
  for (size_t i = 0; i < 20; ++i) {
    CHECK((dense.designs[i].weights - data_space.designs[i].weights).norm() ==
          0.0);
    CHECK((dense.designs[i].weights - recompute.designs[i].weights).norm() ==
          0.0);
  }
}

TEST_CASE("budget validation", "[greedy]") {
  const aoed::Model model = aoed_test::diagonal_model({4.0, 1.0});
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  CHECK_THROWS_AS(aoed::greedy_sweep(model, kernels, 0), aoed::InvalidBudget);
  CHECK_THROWS_AS(aoed::greedy_sweep(model, kernels, 3), aoed::InvalidBudget);
  CHECK_THROWS_AS(aoed::brute_force_best(model, kernels, 0),
                  aoed::InvalidBudget);
}
