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

#include "iidsup/oracle.hpp"
#include "support/brute_force.hpp"

namespace iidsup {
namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

const CoefficientVector kAverage4({-1, -1, -1, 2});
const CoefficientVector kAverage3({1, 1, -2});
const DiscreteDistribution kMixed({0, 5, 9}, {q(1, 2), q(1, 6), q(1, 3)});

std::vector<Rational> powers(int m) {
  std::vector<Rational> v;
  for (int i = 0; i < m; ++i) v.push_back(Rational(Integer(1) << i));
  return v;
}

std::vector<long> raw(const CoefficientVector& c) { return {c.values().begin(), c.values().end()}; }

brute::Probabilities reference(const std::vector<long>& c, const DiscreteDistribution& mu) {
  return brute::probabilities(c, {mu.atoms().begin(), mu.atoms().end()},
                              {mu.weights().begin(), mu.weights().end()});
}

TEST(ProbStrict, KnownValues) {
  EXPECT_EQ(prob_strict(kAverage3, DiscreteDistribution::uniform(powers(3))), q(13, 27));
  EXPECT_EQ(prob_strict(kAverage3, DiscreteDistribution::uniform(powers(4))), q(17, 32));
  EXPECT_EQ(prob_strict(kAverage4, kMixed), q(26, 81));
  EXPECT_EQ(prob_equal(kAverage4, kMixed), q(1, 8));
}

TEST(ProbStrict, PointMassNeverWins) {
  for (const auto& c : {kAverage4, kAverage3, CoefficientVector({-5, 3, 1})})
    for (long a : {0L, 1L, 7L}) {
      EXPECT_EQ(prob_strict(c, DiscreteDistribution::point_mass(a)), 0);
    }
}

TEST(ProbEqual, DifferenceOfTwoIsDiagonalMass) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto mu = brute::random_distribution(rng, 6, 30);
    Rational diagonal = 0;
    for (const auto& w : mu.weights()) diagonal += w * w;
    EXPECT_EQ(prob_equal(CoefficientVector({1, -1}), mu), diagonal);
  }
}

TEST(ProbStrict, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = brute::random_coefficients(rng, 4, 4);
    auto mu = brute::random_distribution(rng, 5, 12);
    auto want = reference(c, mu);
    auto got = event_probabilities(CoefficientVector(c), mu);
    EXPECT_EQ(got.strict, want.strict);
    EXPECT_EQ(got.equal, want.equal);
  }
}

TEST(ProbStrict, LargeAtomsUseWideArithmetic) {
  // Atoms near 2^80 with awkward weights exceed 128-bit intermediate bounds.
  Integer big = Integer(1) << 80;
  DiscreteDistribution mu({Rational(0), Rational(big), Rational(big + 1), Rational(2 * big - 3)},
                          {q(1, 7), q(2, 7), q(3, 11), Rational(1) - q(1, 7) - q(2, 7) - q(3, 11)});
  for (const auto& c : {kAverage4, kAverage3}) {
    auto want = reference(raw(c), mu);
    EXPECT_EQ(prob_strict(c, mu), want.strict);
    EXPECT_EQ(prob_equal(c, mu), want.equal);
  }
}

TEST(ProbStrict, IndependentOfWorkerCount) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto mu = brute::random_distribution(rng, 12, 40);
    auto one = event_probabilities(kAverage4, mu, {OracleOptions{}.budget, 1});
    auto four = event_probabilities(kAverage4, mu, {OracleOptions{}.budget, 4});
    EXPECT_EQ(one.strict, four.strict);
    EXPECT_EQ(one.equal, four.equal);
  }
}

TEST(ProbStrict, BudgetIsEnforced) {
  std::vector<Rational> atoms;
  for (int i = 0; i < 20; ++i) atoms.push_back(i);
  auto mu = DiscreteDistribution::uniform(atoms);
  EXPECT_THROW(prob_strict(kAverage4, mu, {1000, 1}), BudgetExceeded);
  EXPECT_NO_THROW(prob_strict(kAverage4, mu, {160000, 1}));
}

TEST(ProbStrict, InvariantUnderPermutingCoefficients) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = brute::random_coefficients(rng, 4, 4);
    auto mu = brute::random_distribution(rng, 4, 10);
    auto base = event_probabilities(CoefficientVector(c), mu);
    std::shuffle(c.begin(), c.end(), rng);
    auto permuted = event_probabilities(CoefficientVector(c), mu);
    EXPECT_EQ(base.strict, permuted.strict);
    EXPECT_EQ(base.equal, permuted.equal);
  }
}

TEST(ProbStrict, TwoDiceIdentity) {
  // P[X1 >= X2] = (1 + P[X1 = X2]) / 2.
  std::mt19937_64 rng(25);
  const std::vector<long> reversed{-1, 1};
  for (int trial = 0; trial < 50; ++trial) {
    auto mu = brute::random_distribution(rng, 6, 20);
    Rational at_least = 1 - event_probabilities(std::span<const long>(reversed), mu).strict;
    EXPECT_EQ(at_least, (1 + prob_equal(CoefficientVector({1, -1}), mu)) / 2);
  }
}

TEST(WithoutReplacement, KnownValues) {
  EXPECT_EQ(prob_strict_without_replacement(kAverage3, powers(3)), q(2, 3));
  EXPECT_EQ(prob_strict_without_replacement(kAverage3, powers(5)), q(2, 3));
  EXPECT_EQ(prob_strict_without_replacement(CoefficientVector({1, -1}),
                                            std::vector<Rational>{q(3), q(7, 2)}),
            q(1, 2));
  EXPECT_THROW(prob_strict_without_replacement(kAverage4, powers(3)), InvalidArgument);
  EXPECT_THROW(prob_strict_without_replacement(kAverage3, std::vector<Rational>{1, 1, 2}),
               InvalidArgument);
}

TEST(WithoutReplacement, MatchesBruteForce) {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<int> value(0, 30);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = brute::random_coefficients(rng, 3, 4);
    std::set<int> distinct;
    while (distinct.size() < c.size() + 2) distinct.insert(value(rng));
    std::vector<Rational> values(distinct.begin(), distinct.end());
    std::shuffle(values.begin(), values.end(), rng);
    EXPECT_EQ(prob_strict_without_replacement(CoefficientVector(c), values),
              brute::without_replacement(c, values));
  }
}

TEST(InjectionAverage, KnownValues) {
  EXPECT_EQ(injection_average(kAverage4, Assignment({0, 0, 4, 6, 7, 7})), q(28, 60));
  EXPECT_EQ(injection_average(kAverage4, Assignment({0, 0, 1, 1})), q(2, 4));
  EXPECT_EQ(injection_average(kAverage4, Assignment({3, 3, 3, 3, 3})), 0);
  EXPECT_EQ(injection_average(kAverage3, Assignment({2, 2, 2})), 0);
}

TEST(InjectionAverage, MatchesBruteForce) {
  std::mt19937_64 rng(27);
  std::uniform_int_distribution<int> value(0, 10);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = brute::random_coefficients(rng, 4, 3);
    std::vector<Rational> x(c.size() + 1);
    for (auto& v : x) v = value(rng);
    std::sort(x.begin(), x.end());
    EXPECT_EQ(injection_average(CoefficientVector(c), Assignment(x)),
              brute::injection_average(c, x));
  }
}

TEST(FallingFactorial, Values) {
  EXPECT_EQ(falling_factorial_factor(3, 6), q(5, 9));
  EXPECT_EQ(falling_factorial_factor(3, 3), q(2, 9));
  EXPECT_EQ(falling_factorial_factor(4, 3), 0);
}

TEST(UniformReplacementGap, SmallExample) {
  Assignment a({0, 0, 1});
  auto gap = uniform_replacement_gap(kAverage3, a);
  // Independent count over the 27 index maps into (0, 0, 1).
  const std::vector<Rational> x{0, 0, 1};
  long wins = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (x[i] + x[j] - 2 * x[k] > 0) ++wins;
  EXPECT_EQ(gap.uniform_probability, q(wins, 27));
  EXPECT_EQ(gap.uniform_probability, q(10, 27));
  EXPECT_EQ(gap.factor, q(2, 9));
  EXPECT_GE(gap.uniform_probability, gap.factor * injection_average(kAverage3, a));
}

}  // namespace
}  // namespace iidsup
