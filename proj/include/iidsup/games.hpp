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

// Beat-the-average: the player draws B and C, the house draws A, and the
// house wins when A < (B + C) / 2, i.e. B + C - 2A > 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "iidsup/core.hpp"
#include "iidsup/lower.hpp"
#include "iidsup/oracle.hpp"

namespace iidsup {

// Coefficients in role order (B, C, A).
inline CoefficientVector beat_the_average() { return CoefficientVector({1, 1, -2}); }

// Cards with distinct values, drawn without replacement.
inline Rational card_game(std::span<const Rational> values,
                          const OracleOptions& options = {}) {
  if (values.size() < 3) throw InvalidArgument("card game needs at least 3 values");
  return prob_strict_without_replacement(beat_the_average(), values, options);
}

// Three iid throws of the same die.
inline Rational dice_game(const DiscreteDistribution& die, const OracleOptions& options = {}) {
  return prob_strict(beat_the_average(), die, options);
}

struct DiceDecomposition {
  Rational e1;   // all three faces equal
  Rational e2;   // exactly two distinct faces
  Rational e3;   // three distinct faces
  Rational win;  // 2/3 - e2/6 - 2 e1/3
};

// Split of a uniform m-sided die by the number of distinct faces thrown.
inline DiceDecomposition dice_decomposition(const DiscreteDistribution& die) {
  const long m = static_cast<long>(die.size());
  for (const auto& w : die.weights())
    if (w != die.weight(0)) throw InvalidArgument("die weights must be uniform");
  const long m2 = m * m;
  DiceDecomposition d;
  d.e1 = make_rational(1, m2);
  d.e2 = make_rational(3 * (m - 1), m2);
  d.e3 = make_rational((m - 1) * (m - 2), m2);
  d.win = Rational(2, 3) - d.e2 / 6 - 2 * d.e1 / 3;
  return d;
}

struct TwoSidedOptimum {
  Rational p;      // mass on the high face, within 2^-60 of 1 - 1/sqrt(3)
  Rational value;  // p^3 - 3p^2 + 2p at that p
};

// Faces {0, 1}: the house wins with probability p^3 - 3p^2 + 2p, maximized
// where 3p^2 - 6p + 2 changes sign on [0, 1/2].
inline TwoSidedOptimum two_sided_optimal() {
  auto slope = [](const Rational& p) { return Rational(3 * p * p - 6 * p + 2); };
  Rational lo = 0, hi = Rational(1, 2);
  for (int i = 0; i < 60; ++i) {
    Rational mid = (lo + hi) / 2;
    if (sgn(slope(mid)) > 0) lo = mid;
    else hi = mid;
  }
  Rational p = (lo + hi) / 2;
  return {p, p * p * p - 3 * p * p + 2 * p};
}

struct ThreeSidedCandidate {
  DiscreteDistribution die;
  Rational value;  // exact house win probability
};

// Grid search over dice with faces {0, t, 1}: t and the weights range over
// multiples of 1/resolution.
inline ThreeSidedCandidate three_sided_grid(int resolution) {
  if (resolution < 3) throw InvalidArgument("resolution must be at least 3");
  const CoefficientVector c = beat_the_average();
  double best = -1;
  int best_t = 1, best_a = 1, best_b = 1;
  for (int t = 1; t < resolution; ++t) {
    std::vector<Rational> faces{0, make_rational(t, resolution), 1};
    detail::WeightObjective objective(c, faces);
    for (int a = 1; a < resolution; ++a)
      for (int b = 1; a + b < resolution; ++b) {
        std::vector<double> w{static_cast<double>(a) / resolution,
                              static_cast<double>(b) / resolution,
                              static_cast<double>(resolution - a - b) / resolution};
        double v = objective.evaluate(w, false).p;
        if (v > best) {
          best = v;
          best_t = t;
          best_a = a;
          best_b = b;
        }
      }
  }
  DiscreteDistribution die({0, make_rational(best_t, resolution), 1},
                           {make_rational(best_a, resolution), make_rational(best_b, resolution),
                            make_rational(resolution - best_a - best_b, resolution)});
  Rational value = dice_game(die);
  return {std::move(die), std::move(value)};
}

enum class GameVariant { kCard, kDice };

struct MonteCarloEstimate {
  std::uint64_t wins = 0;
  std::uint64_t trials = 0;
  double estimate = 0;
  double low = 0, high = 0;  // Wilson score interval
};

namespace detail {

// Stateless generator: the stream of trial i depends only on (seed, i).
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial)
      : state_(mix(seed ^ mix(trial + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace detail

// Simulated house win frequency. For cards, `die` supplies the deck as its
// atoms; for dice, its law. The result does not depend on `workers`.
inline MonteCarloEstimate monte_carlo(GameVariant variant, const DiscreteDistribution& die,
                                      std::uint64_t trials, std::uint64_t seed,
                                      int workers = 1, double z = 1.959963984540054) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  const std::size_t k = die.size();
  if (variant == GameVariant::kCard && k < 3)
    throw InvalidArgument("card game needs at least 3 values");
  std::vector<double> cumulative(k);
  double running = 0;
  for (std::size_t i = 0; i < k; ++i) cumulative[i] = (running += die.weight(i).get_d());
  auto wins_for = [&](std::size_t a, std::size_t b, std::size_t c) {
    return sgn(die.atom(b) + die.atom(c) - 2 * die.atom(a)) > 0;
  };
  auto draw = [&](detail::TrialStream& s) {
    double u = s.unit() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), k - 1);
  };
  auto simulate = [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t wins = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      detail::TrialStream s(seed, t);
      std::size_t a, b, c;
      if (variant == GameVariant::kDice) {
        a = draw(s);
        b = draw(s);
        c = draw(s);
      } else {
        a = s.below(k);
        b = s.below(k - 1);
        if (b >= a) ++b;
        c = s.below(k - 2);
        for (std::size_t taken : {std::min(a, b), std::max(a, b)})
          if (c >= taken) ++c;
      }
      if (wins_for(a, b, c)) ++wins;
    }
    return wins;
  };

  const std::size_t pool = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::uint64_t> partial(pool, 0);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < pool; ++w) {
    std::uint64_t lo = trials * w / pool, hi = trials * (w + 1) / pool;
    if (pool == 1) partial[w] = simulate(lo, hi);
    else threads.emplace_back([&, w, lo, hi] { partial[w] = simulate(lo, hi); });
  }
  for (auto& t : threads) t.join();

  MonteCarloEstimate out;
  out.trials = trials;
  for (auto w : partial) out.wins += w;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(out.wins) / n;
  out.estimate = phat;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  out.low = std::max(0.0, centre - half);
  out.high = std::min(1.0, centre + half);
  return out;
}

}  // namespace iidsup
