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

// Constructive lower bounds on sup P[sum c_i X_i > 0] over iid laws.
//
// If X has law mu with p = P[event] and q = P[tie], the law of
// sum_j eta^{j-1} X_j (small eta) wins whenever the first non-tied level
// wins, so its success probability approaches p / (1 - q).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "iidsup/core.hpp"
#include "iidsup/oracle.hpp"

namespace iidsup {

struct BoostReport {
  Rational p;      // P[strict]
  Rational q;      // P[tie]
  Rational ratio;  // p / (1 - q), or 0 when q = 1
  DiscreteDistribution base;
};

inline BoostReport boost_ratio(const CoefficientVector& c, const DiscreteDistribution& mu,
                               const OracleOptions& options = {}) {
  EventProbabilities e = event_probabilities(c, mu, options);
  BoostReport r{e.strict, e.equal, 0, mu};
  if (e.equal != 1) r.ratio = e.strict / (1 - e.equal);
  return r;
}

// Step sizes below this keep every non-tied level dominant: with integer
// atoms of gcd g, maximum A and C = sum |c_i|, a nonzero level is at least
// g*gcd(c) and the tail is at most C*A*eta/(1-eta).
inline Rational eta_limit(const CoefficientVector& c, const DiscreteDistribution& mu) {
  std::vector<Integer> atoms = detail::integer_atoms(mu);
  Integer g = 0, top = 0;
  for (const auto& a : atoms) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (a > top) top = a;
  }
  if (g == 0) return 1;  // point mass at zero: every level ties
  long cg = 0;
  for (long v : c.values()) cg = std::gcd(cg, v < 0 ? -v : v);
  Integer level = g * cg;
  Rational limit(level, level + Integer(c.abs_sum()) * top);
  limit.canonicalize();
  return limit;
}

inline Rational auto_eta(const CoefficientVector& c, const DiscreteDistribution& mu) {
  return eta_limit(c, mu) / 2;
}

struct Boosted {
  DiscreteDistribution distribution;
  Rational eta;
  bool eta_warning = false;  // eta at or above eta_limit
};

// Law of sum_{j=1..k} eta^{j-1} X_j with X_j iid mu; eta defaults to
// auto_eta(c, mu).
inline Boosted build_boosted(const CoefficientVector& c, const DiscreteDistribution& mu,
                             int k, std::optional<Rational> eta = std::nullopt,
                             std::size_t support_budget = 1'000'000) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  Boosted out{mu, eta ? *eta : auto_eta(c, mu), false};
  if (out.eta <= 0) throw InvalidArgument("eta must be positive");
  out.eta_warning = out.eta >= eta_limit(c, mu);
  std::map<Rational, Rational> law;
  for (std::size_t i = 0; i < mu.size(); ++i) law[mu.atom(i)] += mu.weight(i);
  Rational scale = 1;
  for (int j = 2; j <= k; ++j) {
    scale *= out.eta;
    if (static_cast<long double>(law.size()) * mu.size() > support_budget)
      throw BudgetExceeded("boosted support exceeds " + std::to_string(support_budget));
    std::map<Rational, Rational> next;
    for (const auto& [a, w] : law)
      for (std::size_t i = 0; i < mu.size(); ++i)
        next[a + scale * mu.atom(i)] += w * mu.weight(i);
    law = std::move(next);
  }
  std::vector<Rational> atoms, weights;
  for (auto& [a, w] : law) {
    atoms.push_back(a);
    weights.push_back(w);
  }
  out.distribution = DiscreteDistribution(std::move(atoms), std::move(weights));
  return out;
}

// 1/2 at zero and 1/(2N) at each 1 - 2^-i, i = 1..N.
inline DiscreteDistribution family_dyadic(int n) {
  if (n < 1) throw InvalidArgument("N must be at least 1");
  std::vector<Rational> atoms{0}, weights{Rational(1, 2)};
  Rational step = 1;
  for (int i = 1; i <= n; ++i) {
    step /= 2;
    atoms.push_back(1 - step);
    weights.push_back(Rational(Integer(1), Integer(2 * n)));
  }
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

// family_dyadic with mass q/2 moved onto the extra atom 1 - 2^-(N+1).
inline DiscreteDistribution family_dyadic_weighted(int n, const Rational& q) {
  if (n < 1) throw InvalidArgument("N must be at least 1");
  if (q <= 0 || q >= 1) throw InvalidArgument("q_weight must lie in (0, 1)");
  std::vector<Rational> atoms{0}, weights{Rational(1, 2)};
  Rational step = 1;
  for (int i = 1; i <= n; ++i) {
    step /= 2;
    atoms.push_back(1 - step);
    weights.push_back((1 - q) / (2 * n));
  }
  atoms.push_back(1 - step / 2);
  weights.push_back(q / 2);
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

namespace detail {

// Floating-point p, q and their gradients in the weights for a fixed
// support: tuples are classified exactly once.
class WeightObjective {
 public:
  WeightObjective(const CoefficientVector& c, std::span<const Rational> support)
      : n_(c.size()), k_(support.size()) {
    if (k_ == 0) throw InvalidArgument("empty support");
    if (!within_budget(k_, n_, 50'000'000))
      throw BudgetExceeded("support too large for weight ascent");
    std::vector<std::size_t> idx(n_, 0);
    while (true) {
      Rational s = 0;
      for (std::size_t r = 0; r < n_; ++r) s += c[r] * support[idx[r]];
      int sign = sgn(s);
      if (sign > 0) strict_.insert(strict_.end(), idx.begin(), idx.end());
      if (sign == 0) tie_.insert(tie_.end(), idx.begin(), idx.end());
      std::size_t r = 0;
      while (r < n_ && ++idx[r] == k_) idx[r++] = 0;
      if (r == n_) break;
    }
  }

  struct Value {
    double p = 0, q = 0, ratio = 0;
    std::vector<double> grad;  // of ratio
  };

  Value evaluate(const std::vector<double>& w, bool with_gradient) const {
    Value v;
    std::vector<double> gp(k_, 0), gq(k_, 0);
    v.p = accumulate(strict_, w, with_gradient ? &gp : nullptr);
    v.q = accumulate(tie_, w, with_gradient ? &gq : nullptr);
    const double d = 1 - v.q;
    v.ratio = d > 1e-15 ? v.p / d : 0;
    if (with_gradient) {
      v.grad.assign(k_, 0);
      if (d > 1e-15)
        for (std::size_t i = 0; i < k_; ++i)
          v.grad[i] = (gp[i] * d + v.p * gq[i]) / (d * d);
    }
    return v;
  }

 private:
  double accumulate(const std::vector<std::size_t>& tuples, const std::vector<double>& w,
                    std::vector<double>* grad) const {
    double total = 0;
    for (std::size_t base = 0; base < tuples.size(); base += n_) {
      double prod = 1;
      for (std::size_t r = 0; r < n_; ++r) prod *= w[tuples[base + r]];
      total += prod;
      if (!grad) continue;
      for (std::size_t r = 0; r < n_; ++r) {
        double others = 1;
        for (std::size_t s = 0; s < n_; ++s)
          if (s != r) others *= w[tuples[base + s]];
        (*grad)[tuples[base + r]] += others;
      }
    }
    return total;
  }

  std::size_t n_, k_;
  std::vector<std::size_t> strict_, tie_;
};

// Euclidean projection onto the probability simplex.
inline std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0, theta = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    double t = (cumulative - 1) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
  return v;
}

// Rational weights with denominator 10^9 summing to exactly one; entries
// that round to zero are dropped from the support.
inline DiscreteDistribution snap_weights(std::span<const Rational> support,
                                         const std::vector<double>& w) {
  constexpr long kDen = 1'000'000'000;
  std::vector<long> units(w.size());
  long total = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    units[i] = std::max(0L, std::lround(w[i] * kDen));
    total += units[i];
    if (w[i] > w[largest]) largest = i;
  }
  units[largest] += kDen - total;
  std::vector<Rational> atoms, weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (units[i] <= 0) continue;
    atoms.push_back(support[i]);
    weights.push_back(make_rational(units[i], kDen));
  }
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

}  // namespace detail

struct AscentResult {
  DiscreteDistribution distribution;  // final weights, zero entries dropped
  BoostReport report;                 // exact re-evaluation
  std::vector<double> trace;          // objective after each accepted step
};

// Projected gradient ascent of the boost ratio over weights on a fixed
// support. Seed 0 starts from uniform weights; other seeds start from a
// random point of the simplex.
inline AscentResult ascend_weights(const CoefficientVector& c,
                                   std::vector<Rational> support, int steps,
                                   std::uint64_t seed, const OracleOptions& options = {}) {
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  std::sort(support.begin(), support.end());
  if (std::adjacent_find(support.begin(), support.end()) != support.end())
    throw InvalidArgument("support atoms must be distinct");
  for (const auto& a : support)
    if (a < 0) throw InvalidArgument("support atoms must be nonnegative");
  const std::size_t k = support.size();
  detail::WeightObjective objective(c, support);

  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> draw(1.0);
    double total = 0;
    for (auto& x : w) total += (x = draw(rng));
    for (auto& x : w) x /= total;
  }
  auto current = objective.evaluate(w, true);
  AscentResult out;
  out.trace.push_back(current.ratio);
  double rate = 1.0;
  for (int step = 0; step < steps; ++step) {
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      std::vector<double> trial(k);
      for (std::size_t i = 0; i < k; ++i) trial[i] = w[i] + rate * current.grad[i];
      trial = detail::project_simplex(std::move(trial));
      auto next = objective.evaluate(trial, true);
      if (next.ratio > current.ratio) {
        w = std::move(trial);
        current = std::move(next);
        out.trace.push_back(current.ratio);
        rate *= 1.5;
        accepted = true;
      } else {
        rate /= 2;
      }
    }
    if (!accepted) break;
  }
  out.distribution = detail::snap_weights(support, w);
  out.report = boost_ratio(c, out.distribution, options);
  return out;
}

struct BernoulliOptimum {
  Rational p;  // mass at one
  BoostReport report;
};

// Best (1-p) delta_0 + p delta_1 by a grid scan refined with ternary search.
inline BernoulliOptimum bernoulli_optimum(const CoefficientVector& c, int grid = 200,
                                          int refinements = 80) {
  std::vector<Rational> support{0, 1};
  detail::WeightObjective objective(c, support);
  auto f = [&](double p) { return objective.evaluate({1 - p, p}, false).ratio; };
  int best = 1;
  for (int i = 1; i < grid; ++i)
    if (f(static_cast<double>(i) / grid) > f(static_cast<double>(best) / grid)) best = i;
  double lo = static_cast<double>(best - 1) / grid, hi = static_cast<double>(best + 1) / grid;
  for (int it = 0; it < refinements; ++it) {
    double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if (f(a) < f(b)) lo = a;
    else hi = b;
  }
  constexpr long kDen = 1'000'000'000;
  long units = std::clamp(std::lround((lo + hi) / 2 * kDen), 1L, kDen - 1);
  BernoulliOptimum out;
  out.p = make_rational(units, kDen);
  out.report = boost_ratio(c, DiscreteDistribution({0, 1}, {1 - out.p, out.p}));
  return out;
}

}  // namespace iidsup
