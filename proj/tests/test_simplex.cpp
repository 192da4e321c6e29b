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

#include "aoed/rng.hpp"
#include "aoed/simplex.hpp"
#include "support.hpp"

using aoed::CappedSimplex;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> values) {
  VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("set construction validates the budget", "[simplex]") {
  CHECK_NOTHROW(CappedSimplex(3, 1));
  CHECK_NOTHROW(CappedSimplex(3, 3));
  CHECK_THROWS_AS(CappedSimplex(3, 0), aoed::InvalidBudget);
  CHECK_THROWS_AS(CappedSimplex(3, 4), aoed::InvalidBudget);
}

TEST_CASE("membership on vertices, infeasible points, interior", "[simplex]") {
  const CappedSimplex set(3, 2);
  CHECK(aoed::contains(set, vec({1, 1, 0})));
  CHECK_FALSE(aoed::contains(set, vec({1, 1, 0.5})));
  CHECK(aoed::contains(set, vec({0.5, 0.5, 0.5})));
  CHECK_THROWS_AS(aoed::contains(set, vec({1, 1})), aoed::DimensionMismatch);
}

TEST_CASE("projection fixes feasible points", "[simplex]") {
  const CappedSimplex set(3, 2);
  const VectorXd w = vec({0.3, 0.8, 0.4});
  CHECK((aoed::project(set, w) - w).norm() == 0.0);
}

TEST_CASE("projection solves the clipped threshold equation", "[simplex]") {
  // For v = (2, 2, -1) with budget 1 the threshold is tau = 1.5, verified
  // against a dense grid search over tau.
  const CappedSimplex set(3, 1);
  const VectorXd p = aoed::project(set, vec({2, 2, -1}));
  CHECK(p[0] == Catch::Approx(0.5).margin(1e-10));
  CHECK(p[1] == Catch::Approx(0.5).margin(1e-10));
  CHECK(p[2] == 0.0);
}

TEST_CASE("projection reduces to the box clip under a slack budget",
          "[simplex]") {
  const CappedSimplex set(2, 2);
  const VectorXd p = aoed::project(set, vec({1.7, -0.3}));
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
}

TEST_CASE("projection properties on random inputs", "[simplex]") {
  aoed::SplitMix64 rng(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_below(49));
    const int budget = 1 + static_cast<int>(rng.next_below(m));
    const CappedSimplex set(m, budget);
    VectorXd u(m), v(m);
    for (int k = 0; k < m; ++k) {
      u[k] = rng.next_double(-3.0, 4.0);
      v[k] = rng.next_double(-3.0, 4.0);
    }
    const VectorXd pu = aoed::project(set, u);
    const VectorXd pv = aoed::project(set, v);

    CHECK(aoed::contains(set, pu, 1e-9));
    CHECK((aoed::project(set, pu) - pu).norm() <= 1e-10);             // idempotent
    CHECK((pu - pv).norm() <= (u - v).norm() + 1e-10);                // nonexpansive

    // Variational inequality against random feasible points.
    for (int probe = 0; probe < 20; ++probe) {
      const VectorXd z = aoed_test::random_feasible(m, budget, rng);
      CHECK((u - pu).dot(z - pu) <= 1e-9);
    }
  }
}

TEST_CASE("linear minimizer picks the most negative coordinates", "[simplex]") {
  auto matches = [](const VectorXd& a, const VectorXd& b) {
    return (a - b).norm() == 0.0;
  };
  CHECK(matches(aoed::linear_minimizer(CappedSimplex(3, 2), vec({-3, -1, -2})),
                vec({1, 0, 1})));
  CHECK(matches(aoed::linear_minimizer(CappedSimplex(3, 2), vec({1, 2, 3})),
                vec({0, 0, 0})));
  CHECK(matches(
      aoed::linear_minimizer(CappedSimplex(4, 2), vec({-1, -1, -1, 0})),
      vec({1, 1, 0, 0})));
}

TEST_CASE("linear minimizer beats random feasible points", "[simplex]") {
  aoed::SplitMix64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_below(30));
    const int budget = 1 + static_cast<int>(rng.next_below(m));
    const CappedSimplex set(m, budget);
    VectorXd g(m);
    for (int k = 0; k < m; ++k) g[k] = rng.next_double(-2.0, 2.0);
    const VectorXd w = aoed::linear_minimizer(set, g);
    REQUIRE(aoed::contains(set, w));
    for (int probe = 0; probe < 20; ++probe) {
      const VectorXd z = aoed_test::random_feasible(m, budget, rng);
      CHECK(g.dot(w) <= g.dot(z) + 1e-12);
    }
  }
}
