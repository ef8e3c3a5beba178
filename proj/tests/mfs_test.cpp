// Copyright 2026 The iidsup Authors
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

#include <random>

#include <gtest/gtest.h>

#include "iidsup/mfs.hpp"
#include "iidsup/oracle.hpp"
#include "support/brute_force.hpp"

namespace iidsup {
namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

const CoefficientVector kAverage4({-1, -1, -1, 2});
const CoefficientVector kAverage3({1, 1, -2});

std::vector<long> raw(const CoefficientVector& c) { return {c.values().begin(), c.values().end()}; }

// Exact optimum by exhausting every subset of pruned versions (small m only).
std::size_t exhaustive_optimum(const CoefficientVector& c, int m) {
  const auto pruned = pruned_versions(c, m).pruned();
  const std::size_t k = pruned.size();
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::size_t bits = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (bits <= best) continue;
    std::vector<Version> subset;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) subset.push_back(pruned[i]);
    if (check_subset_feasible(c, m, subset)) best = bits;
  }
  return best;
}

TEST(SolveMfs, KnownOptima) {
  auto m4 = solve_mfs(kAverage4, 4);
  ASSERT_TRUE(m4.optimal);
  EXPECT_EQ(*m4.bound, q(1, 2));
  auto m6 = solve_mfs(kAverage4, 6);
  ASSERT_TRUE(m6.optimal);
  EXPECT_EQ(*m6.bound, q(7, 15));
  EXPECT_EQ(m6.satisfied.size(), 28u);
  EXPECT_EQ(m6.violated.size(), 2u);
}

TEST(SolveMfs, FrozenOptimaForFiveAndSeven) {
  // Frozen from an exhaustive subset search at m = 5 and the exact solver at m = 7.
  auto m5 = solve_mfs(kAverage4, 5);
  ASSERT_TRUE(m5.optimal);
  EXPECT_EQ(*m5.bound, q(1, 2));
  auto m7 = solve_mfs(kAverage4, 7);
  ASSERT_TRUE(m7.optimal);
  EXPECT_EQ(*m7.bound, q(16, 35));
}

TEST(SolveMfs, MatchesExhaustiveSubsetSearch) {
  for (int m = 4; m <= 5; ++m) {
    auto r = solve_mfs(kAverage4, m);
    EXPECT_EQ(r.satisfied.size(), exhaustive_optimum(kAverage4, m)) << m;
  }
  for (const auto& c : {kAverage3, CoefficientVector({-2, 1, 1}), CoefficientVector({1, -1})}) {
    int m = static_cast<int>(c.size()) + 1;
    EXPECT_EQ(solve_mfs(c, m).satisfied.size(), exhaustive_optimum(c, m));
  }
}

TEST(SolveMfs, BeatTheAverageIsTwoThirds) {
  for (int m = 3; m <= 6; ++m) {
    auto r = solve_mfs(kAverage3, m);
    ASSERT_TRUE(r.optimal);
    EXPECT_EQ(*r.bound, q(2, 3)) << m;
  }
}

TEST(SolveMfs, TwoDiceIsOneHalf) {
  for (int m = 2; m <= 4; ++m) {
    auto r = solve_mfs(CoefficientVector({1, -1}), m);
    ASSERT_TRUE(r.optimal);
    EXPECT_EQ(*r.bound, q(1, 2)) << m;
  }
}

TEST(SolveMfs, WitnessReproducesFraction) {
  for (int m = 4; m <= 7; ++m) {
    auto r = solve_mfs(kAverage4, m);
    EXPECT_EQ(check_mfs_result(r), "");
    std::vector<Rational> x(r.witness.values().begin(), r.witness.values().end());
    EXPECT_EQ(brute::injection_average(raw(kAverage4), x), r.satisfied_fraction()) << m;
    EXPECT_EQ(injection_average(kAverage4, r.witness), r.satisfied_fraction());
  }
}

TEST(SolveMfs, IndependentOfBranchingOrder) {
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    MfsOptions o;
    o.order_seed = seed;
    auto r = solve_mfs(kAverage4, 6, o);
    ASSERT_TRUE(r.optimal);
    EXPECT_EQ(*r.bound, q(7, 15));
  }
}

TEST(SolveMfs, NoGridPointBeatsTheOptimum) {
  for (int m = 4; m <= 6; ++m) {
    auto r = solve_mfs(kAverage4, m);
    EXPECT_LE(brute::grid_max(raw(kAverage4), m, 6), r.satisfied.size()) << m;
  }
}

TEST(SolveMfs, HeuristicNeverExceedsExact) {
  MfsOptions h;
  h.mode = MfsMode::kHeuristic;
  for (int m = 4; m <= 7; ++m) {
    auto heuristic = solve_mfs(kAverage4, m, h);
    EXPECT_FALSE(heuristic.optimal);
    EXPECT_FALSE(heuristic.bound.has_value());
    EXPECT_EQ(check_mfs_result(heuristic), "");
    EXPECT_LE(heuristic.satisfied.size(), solve_mfs(kAverage4, m).satisfied.size());
  }
}

TEST(SolveMfs, ZeroBudgetIsNotOptimal) {
  MfsOptions o;
  o.time_budget = std::chrono::milliseconds(0);
  auto r = solve_mfs(kAverage4, 8, o);
  EXPECT_EQ(check_mfs_result(r), "");
  EXPECT_THROW(bound_sequence(kAverage4, 8, 8, o), BudgetExceeded);
}

TEST(BoundSequence, Nonincreasing) {
  auto seq = bound_sequence(kAverage4, 4, 7);
  ASSERT_EQ(seq.size(), 4u);
  EXPECT_EQ(seq.front(), q(1, 2));
  EXPECT_EQ(seq.back(), q(16, 35));
  for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_LE(seq[i], seq[i - 1]);
}

TEST(SubsetFeasibility, FourVersionSystemIsInfeasible) {
  std::vector<Version> system{{{3, 4, 5, 6}}, {{1, 2, 5, 3}}, {{1, 3, 6, 4}}, {{2, 4, 6, 5}}};
  EXPECT_FALSE(check_subset_feasible(kAverage4, 6, system).has_value());
  auto f = solve_feasibility(kAverage4, 6, system);
  EXPECT_FALSE(f.conflict.empty());
  std::vector<Version> core;
  for (auto i : f.conflict) core.push_back(system[i]);
  EXPECT_FALSE(check_subset_feasible(kAverage4, 6, core).has_value());
}

TEST(SubsetFeasibility, WitnessSatisfiesEveryVersion) {
  std::vector<Version> pair{{{1, 2, 3, 4}}, {{1, 2, 4, 3}}};
  auto w = check_subset_feasible(kAverage4, 4, pair);
  ASSERT_TRUE(w.has_value());
  for (const auto& v : pair) EXPECT_TRUE(strictly_satisfied(kAverage4, v, *w));
  auto empty = check_subset_feasible(kAverage4, 5, {});
  ASSERT_TRUE(empty.has_value());
  for (const auto& x : empty->values()) EXPECT_EQ(x, 0);
}

TEST(SubsetFeasibility, RandomSubsetsAgreeWithWitnessOrConflict) {
  std::mt19937_64 rng(31);
  const auto pruned = pruned_versions(kAverage4, 6).pruned();
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Version> subset;
    for (const auto& v : pruned)
      if (rng() % 3 == 0) subset.push_back(v);
    auto f = solve_feasibility(kAverage4, 6, subset);
    if (f.witness) {
      for (const auto& v : subset) EXPECT_TRUE(strictly_satisfied(kAverage4, v, *f.witness));
    } else {
      std::vector<Version> core;
      for (auto i : f.conflict) core.push_back(subset[i]);
      EXPECT_FALSE(check_subset_feasible(kAverage4, 6, core).has_value());
    }
  }
}

TEST(CheckMfsResult, RejectsTampering) {
  auto r = solve_mfs(kAverage4, 6);
  auto moved = r;
  moved.violated.push_back(moved.satisfied.back());
  moved.satisfied.pop_back();
  EXPECT_NE(check_mfs_result(moved), "");
  auto inflated = r;
  inflated.bound = q(1, 2);
  EXPECT_NE(check_mfs_result(inflated), "");
  auto unbounded = r;
  unbounded.bound.reset();
  EXPECT_NE(check_mfs_result(unbounded), "");
}

TEST(EvaluateWitness, CountsPrunedVersions) {
  auto r = evaluate_witness(kAverage4, Assignment({0, 0, 4, 6, 7, 7}));
  EXPECT_EQ(r.satisfied.size() + r.violated.size(), 30u);
  EXPECT_EQ(r.satisfied_fraction(), injection_average(kAverage4, Assignment({0, 0, 4, 6, 7, 7})));
  EXPECT_FALSE(r.optimal);
}

}  // namespace
}  // namespace iidsup
