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

// Exact brute-force probabilities of strict linear events under product
// measures of finitely supported distributions. Everything else in the
// library is checked against these numbers.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "iidsup/core.hpp"
#include "iidsup/versions.hpp"

namespace iidsup {

struct OracleOptions {
  // Maximum |support|^n (weighted tuples, counted before any symmetry
  // reduction) an exact enumeration may touch.
  std::uint64_t budget = 100'000'000;
  int workers = 1;
};

// P[sum c_i X_i > 0] and P[sum c_i X_i = 0].
struct EventProbabilities {
  Rational strict;
  Rational equal;
};

namespace detail {

// Atoms as integers after clearing a common denominator (the events are
// invariant under positive scaling).
inline std::vector<Integer> integer_atoms(const DiscreteDistribution& mu) {
  Integer lcm = 1;
  for (const auto& a : mu.atoms())
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(mu.size());
  for (const auto& a : mu.atoms()) out.push_back(a.get_num() * (lcm / a.get_den()));
  return out;
}

// Weights as integers over the common denominator `den`.
inline std::vector<Integer> integer_weights(const DiscreteDistribution& mu,
                                            Integer& den) {
  den = 1;
  for (const auto& w : mu.weights())
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(mu.size());
  for (const auto& w : mu.weights()) out.push_back(w.get_num() * (den / w.get_den()));
  return out;
}

inline bool within_budget(std::size_t support, std::size_t n,
                          std::uint64_t budget) {
  long double work = 1;
  for (std::size_t i = 0; i < n; ++i) work *= static_cast<long double>(support);
  return work <= static_cast<long double>(budget);
}

inline __int128 to_i128(const Integer& z) {
  // Caller guarantees |z| < 2^126.
  Integer hi = z >> 64;
  Integer lo = z - (hi << 64);
  return (static_cast<__int128>(hi.get_si()) << 64) +
         static_cast<__int128>(lo.get_ui());
}

// Enumerates the first n-1 coordinates as multisets within blocks of equal
// coefficients (weighted by multinomial counts); the last coordinate is
// resolved by binary search over the sorted atoms.
template <typename Num>
class Enumerator {
 public:
  Enumerator(std::span<const long> c, std::vector<Num> atoms,
             std::vector<Integer> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    const std::size_t n = c.size();
    // Put the largest-magnitude coefficient last so it is nonzero.
    std::size_t last = 0;
    for (std::size_t i = 1; i < n; ++i) {
      long ai = c[i] < 0 ? -c[i] : c[i];
      long al = c[last] < 0 ? -c[last] : c[last];
      if (ai > al) last = i;
    }
    last_coeff_ = c[last];
    for (std::size_t i = 0; i < n; ++i)
      if (i != last) head_.push_back(c[i]);
    std::stable_sort(head_.begin(), head_.end());
    prefix_.assign(weights_.size() + 1, 0);
    for (std::size_t j = 0; j < weights_.size(); ++j)
      prefix_[j + 1] = prefix_[j] + weights_[j];
    factorial_.assign(head_.size() + 1, 1);
    for (std::size_t k = 1; k <= head_.size(); ++k)
      factorial_[k] = factorial_[k - 1] * k;
  }

  // Accumulates numerators over first-coordinate indices [lo, hi).
  std::pair<Integer, Integer> run(std::size_t lo, std::size_t hi) const {
    Integer strict = 0, equal = 0;
    const std::size_t k = head_.size();
    std::vector<std::size_t> idx(k, 0);
    Integer product;
    auto recurse = [&](auto&& self, std::size_t pos) -> void {
      if (pos == k) {
        leaf(idx, strict, equal, product);
        return;
      }
      std::size_t begin = 0, end = atoms_.size();
      if (pos == 0) {
        begin = lo;
        end = hi;
      } else if (head_[pos] == head_[pos - 1]) {
        begin = idx[pos - 1];
      }
      for (std::size_t j = begin; j < end; ++j) {
        idx[pos] = j;
        self(self, pos + 1);
      }
    };
    recurse(recurse, 0);
    return {strict, equal};
  }

  std::size_t support() const { return atoms_.size(); }

 private:
  void leaf(const std::vector<std::size_t>& idx, Integer& strict, Integer& equal,
            Integer& product) const {
    const std::size_t k = head_.size();
    Num partial = 0;
    for (std::size_t i = 0; i < k; ++i) partial += Num(head_[i]) * atoms_[idx[i]];
    // multinomial multiplicity of this multiset assignment
    std::uint64_t mult = 1;
    std::size_t block_start = 0;
    while (block_start < k) {
      std::size_t block_end = block_start;
      while (block_end < k && head_[block_end] == head_[block_start]) ++block_end;
      std::uint64_t denom = 1;
      std::size_t run = 1;
      for (std::size_t i = block_start + 1; i <= block_end; ++i) {
        if (i < block_end && idx[i] == idx[i - 1]) {
          ++run;
        } else {
          denom *= factorial_[run];
          run = 1;
        }
      }
      mult *= factorial_[block_end - block_start] / denom;
      block_start = block_end;
    }
    product = mult;
    for (std::size_t i = 0; i < k; ++i) product *= weights_[idx[i]];

    // last_coeff * atom + partial > 0; find the boundary in sorted atoms.
    const Num target = -partial;
    const std::size_t s = atoms_.size();
    // first j with last_coeff * atoms[j] >= target (monotone in j when
    // last_coeff > 0, antitone when < 0)
    if (last_coeff_ > 0) {
      auto ge = std::partition_point(atoms_.begin(), atoms_.end(), [&](const Num& a) {
        return Num(last_coeff_) * a < target;
      });
      std::size_t j0 = static_cast<std::size_t>(ge - atoms_.begin());
      std::size_t j1 = j0;
      if (j1 < s && Num(last_coeff_) * atoms_[j1] == target) {
        equal += product * weights_[j1];
        ++j1;
      }
      strict += product * (prefix_[s] - prefix_[j1]);
    } else {
      auto le = std::partition_point(atoms_.begin(), atoms_.end(), [&](const Num& a) {
        return Num(last_coeff_) * a > target;
      });
      std::size_t j0 = static_cast<std::size_t>(le - atoms_.begin());
      strict += product * prefix_[j0];
      if (j0 < s && Num(last_coeff_) * atoms_[j0] == target)
        equal += product * weights_[j0];
    }
  }

  std::vector<Num> atoms_;
  std::vector<Integer> weights_;
  std::vector<Integer> prefix_;
  std::vector<long> head_;
  long last_coeff_ = 0;
  std::vector<std::uint64_t> factorial_;
};

template <typename Num>
std::pair<Integer, Integer> run_enumeration(const Enumerator<Num>& e, int workers) {
  const std::size_t s = e.support();
  if (workers <= 1 || s < 2) return e.run(0, s);
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(workers), s);
  std::vector<std::pair<Integer, Integer>> parts(chunks);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < chunks; ++w) {
    threads.emplace_back([&, w] {
      parts[w] = e.run(s * w / chunks, s * (w + 1) / chunks);
    });
  }
  for (auto& t : threads) t.join();
  Integer strict = 0, equal = 0;
  for (const auto& [a, b] : parts) {
    strict += a;
    equal += b;
  }
  return {strict, equal};
}

}  // namespace detail

// Exact P[sum c_i X_i > 0] and P[... = 0] for X_i iid mu. `c` may be any
// integer vector (the trichotomy checks use -c).
inline EventProbabilities event_probabilities(std::span<const long> c,
                                              const DiscreteDistribution& mu,
                                              const OracleOptions& options = {}) {
  if (c.empty()) throw InvalidArgument("empty coefficient vector");
  if (!detail::within_budget(mu.size(), c.size(), options.budget))
    throw BudgetExceeded("exact enumeration needs " + std::to_string(mu.size()) +
                         "^" + std::to_string(c.size()) +
                         " weighted tuples, above the budget of " +
                         std::to_string(options.budget));
  bool all_zero = std::all_of(c.begin(), c.end(), [](long v) { return v == 0; });
  if (all_zero) return {Rational(0), Rational(1)};
  if (c.size() == 1) {
    // sign(c) * atom > 0
    Rational strict = 0, equal = 0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (sgn(mu.atom(j)) == 0) equal += mu.weight(j);
      else if (c[0] > 0) strict += mu.weight(j);
    }
    return {strict, equal};
  }

  Integer den;
  std::vector<Integer> weights = detail::integer_weights(mu, den);
  std::vector<Integer> atoms = detail::integer_atoms(mu);
  Integer bound = 0;
  for (long v : c) bound += v < 0 ? -v : v;
  bound *= atoms.back();
  std::pair<Integer, Integer> num;
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) < 120) {
    std::vector<__int128> small;
    small.reserve(atoms.size());
    for (const auto& a : atoms) small.push_back(detail::to_i128(a));
    detail::Enumerator<__int128> e(c, std::move(small), std::move(weights));
    num = detail::run_enumeration(e, options.workers);
  } else {
    detail::Enumerator<Integer> e(c, std::move(atoms), std::move(weights));
    num = detail::run_enumeration(e, options.workers);
  }
  Integer total;
  mpz_pow_ui(total.get_mpz_t(), den.get_mpz_t(), c.size());
  Rational strict(num.first, total);
  Rational equal(num.second, total);
  strict.canonicalize();
  equal.canonicalize();
  return {strict, equal};
}

inline EventProbabilities event_probabilities(const CoefficientVector& c,
                                              const DiscreteDistribution& mu,
                                              const OracleOptions& options = {}) {
  return event_probabilities(c.values(), mu, options);
}

inline Rational prob_strict(const CoefficientVector& c, const DiscreteDistribution& mu,
                            const OracleOptions& options = {}) {
  return event_probabilities(c, mu, options).strict;
}

inline Rational prob_equal(const CoefficientVector& c, const DiscreteDistribution& mu,
                           const OracleOptions& options = {}) {
  return event_probabilities(c, mu, options).equal;
}

// Card model: P[sum c_i v_{pi(i)} > 0] for a uniformly random injection pi
// of the coefficient positions into the (distinct) values.
inline Rational prob_strict_without_replacement(std::span<const long> c,
                                                std::span<const Rational> values,
                                                const OracleOptions& options = {}) {
  const std::size_t n = c.size();
  const std::size_t m = values.size();
  if (m < n)
    throw InvalidArgument("need at least " + std::to_string(n) + " values, got " +
                          std::to_string(m));
  {
    std::vector<Rational> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("card values must be distinct");
  }
  long double work = 1;
  for (std::size_t i = 0; i < n; ++i) work *= static_cast<long double>(m - i);
  if (work > static_cast<long double>(options.budget))
    throw BudgetExceeded("injection enumeration exceeds the budget");

  std::uint64_t wins = 0, total = 0;
  std::vector<bool> used(m, false);
  Rational partial = 0;
  auto recurse = [&](auto&& self, std::size_t pos, const Rational& acc) -> void {
    if (pos == n) {
      ++total;
      if (sgn(acc) > 0) ++wins;
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, pos + 1, acc + c[pos] * values[j]);
      used[j] = false;
    }
  };
  recurse(recurse, 0, partial);
  Rational r{Integer(static_cast<unsigned long>(wins)),
             Integer(static_cast<unsigned long>(total))};
  r.canonicalize();
  return r;
}

inline Rational prob_strict_without_replacement(const CoefficientVector& c,
                                                std::span<const Rational> values,
                                                const OracleOptions& options = {}) {
  return prob_strict_without_replacement(c.values(), values, options);
}

// Fraction of all versions over a.m() variables that `a` satisfies strictly.
inline Rational injection_average(const CoefficientVector& c, const Assignment& a) {
  const int m = static_cast<int>(a.m());
  VersionSet vs = enumerate_versions(c, m);
  std::size_t hits = 0;
  for (const auto& v : vs.all())
    if (strictly_satisfied(c, v, a)) ++hits;
  Rational r{Integer(static_cast<unsigned long>(hits)),
             Integer(static_cast<unsigned long>(vs.all().size()))};
  r.canonicalize();
  return r;
}

// m (m-1) ... (m-n+1) / m^n: probability that a uniform map [n] -> [m] is
// injective.
inline Rational falling_factorial_factor(std::size_t n, std::size_t m) {
  if (m < n) return 0;
  Integer num = 1, den = 1;
  for (std::size_t i = 0; i < n; ++i) {
    num *= static_cast<unsigned long>(m - i);
    den *= static_cast<unsigned long>(m);
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

struct ReplacementGap {
  Rational uniform_probability;  // prob_strict under uniform{x_1..x_m}
  Rational factor;               // falling factorial factor
};

// Sampling-with-replacement value of the assignment versus its injection
// average; uniform_probability >= factor * injection_average always holds.
inline ReplacementGap uniform_replacement_gap(const CoefficientVector& c,
                                              const Assignment& a,
                                              const OracleOptions& options = {}) {
  if (a.m() < c.size()) throw InvalidArgument("assignment shorter than n");
  auto mu = DiscreteDistribution::uniform(a.values());
  // uniform() merges repeated values; weights stay multiples of 1/m.
  return {prob_strict(c, mu, options), falling_factorial_factor(c.size(), a.m())};
}

}  // namespace iidsup
