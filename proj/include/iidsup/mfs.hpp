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

// Maximum feasible subsystem of the ordered-version system. The largest
// number of versions that one assignment x_1 <= ... <= x_m satisfies,
// divided by the number of all versions, bounds sup_mu P[sum c_i X_i > 0]
// from above.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iidsup/core.hpp"
#include "iidsup/lp.hpp"
#include "iidsup/versions.hpp"

namespace iidsup {

enum class MfsMode { kExact, kHeuristic };

struct MfsOptions {
  MfsMode mode = MfsMode::kExact;
  std::chrono::milliseconds time_budget{std::chrono::minutes(10)};
  // Nonzero: shuffle the branching order with this seed (the optimum count
  // must not depend on it).
  std::uint64_t order_seed = 0;
  // Heuristic mode tries LP augmentation only up to this many versions.
  std::size_t augment_limit = 300;
};

struct MfsResult {
  CoefficientVector c;
  int m = 0;
  Assignment witness;
  std::vector<Version> satisfied;
  std::vector<Version> violated;
  bool optimal = false;
  // |satisfied| / |all versions|; present only when optimal.
  std::optional<Rational> bound;
  Integer total_versions;

  Rational satisfied_fraction() const {
    Rational r(Integer(static_cast<unsigned long>(satisfied.size())), total_versions);
    r.canonicalize();
    return r;
  }
};

// Outcome of the exact margin LP for a set of versions.
struct Feasibility {
  std::optional<Assignment> witness;  // x_m = 1 (all zeros for an empty set)
  // When infeasible: positions (into the checked set) carrying positive
  // Farkas weight; they form an infeasible subsystem on their own.
  std::vector<std::size_t> conflict;
};

// Maximizes eps subject to sum_r c_r x_{slot_r} >= eps for every version,
// 0 <= x_1 <= ... <= x_m, sum of increments <= 1. Feasible iff eps* > 0.
inline Feasibility solve_feasibility(const CoefficientVector& c, int m,
                                     std::span<const Version> subset) {
  if (subset.empty()) {
    return {Assignment(std::vector<Rational>(static_cast<std::size_t>(m), 0)), {}};
  }
  // Columns: increments d_1..d_m (x_q = d_1 + ... + d_q), then eps.
  const std::size_t cols = static_cast<std::size_t>(m) + 1;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  a.reserve(subset.size() + 1);
  for (const auto& v : subset) {
    std::vector<Rational> row(cols, 0);
    for (int q = 1; q <= m; ++q) row[q - 1] = f_coeff(q, v, c);
    row[m] = 1;
    a.push_back(std::move(row));
    b.push_back(0);
  }
  std::vector<Rational> norm(cols, 1);
  norm[m] = 0;
  a.push_back(std::move(norm));
  b.push_back(1);
  std::vector<Rational> obj(cols, 0);
  obj[m] = 1;

  lp::Simplex simplex(std::move(a), std::move(b), std::move(obj));
  auto sol = simplex.solve();
  if (!sol) throw std::logic_error("margin LP unbounded");
  Feasibility out;
  if (sgn(sol->value) > 0) {
    std::vector<Rational> x(static_cast<std::size_t>(m));
    Rational acc = 0;
    for (int q = 0; q < m; ++q) {
      acc += sol->x[q];
      x[q] = acc;
    }
    out.witness = normalize(Assignment(std::move(x)));
  } else {
    for (std::size_t i = 0; i < subset.size(); ++i)
      if (sgn(sol->duals[i]) > 0) out.conflict.push_back(i);
  }
  return out;
}

inline std::optional<Assignment> check_subset_feasible(const CoefficientVector& c, int m,
                                                       std::span<const Version> subset) {
  return solve_feasibility(c, m, subset).witness;
}

namespace detail {

inline std::size_t count_satisfied(const CoefficientVector& c,
                                   std::span<const Version> versions,
                                   const Assignment& a) {
  std::size_t hits = 0;
  for (const auto& v : versions)
    if (strictly_satisfied(c, v, a)) ++hits;
  return hits;
}

inline Rational pow2_inv(int i) {
  Integer d = 1;
  d <<= i;
  return Rational(Integer(1), d);
}

// Starting points: step patterns and the two-scale dyadic pattern
// (zeros, a small copy of 1 - 2^-i, then 1 - 2^-i up to 1).
inline std::vector<Assignment> seed_assignments(int m) {
  std::vector<Assignment> seeds;
  for (int zeros = 0; zeros < m; ++zeros) {
    std::vector<Rational> x(static_cast<std::size_t>(m), 1);
    for (int i = 0; i < zeros; ++i) x[i] = 0;
    seeds.emplace_back(x);
  }
  const Rational eta = pow2_inv(12);
  for (int zeros = 0; zeros < m; ++zeros) {
    for (int low = 0; zeros + low < m; ++low) {
      const int high = m - zeros - low;
      std::vector<Rational> x;
      for (int i = 0; i < zeros; ++i) x.push_back(0);
      for (int i = 1; i <= low; ++i) x.push_back(eta * (1 - pow2_inv(i)));
      for (int i = 1; i < high; ++i) x.push_back(1 - pow2_inv(i));
      x.push_back(1);
      seeds.emplace_back(std::move(x));
    }
  }
  return seeds;
}

// Coordinate moves: x_q ranges over [x_{q-1}, x_{q+1}] and every version
// containing q flips exactly at one breakpoint, so all distinct outcomes
// are visited by the breakpoints, their midpoints and the interval ends.
class HillClimber {
 public:
  HillClimber(const CoefficientVector& c, int m, std::span<const Version> versions)
      : c_(c), m_(m), versions_(versions), touching_(static_cast<std::size_t>(m) + 1) {
    for (std::size_t t = 0; t < versions.size(); ++t)
      for (std::size_t r = 0; r < c.size(); ++r)
        touching_[versions[t].slots[r]].push_back({t, r});
  }

  // Returns the improved assignment; `count` is updated in place.
  Assignment climb(Assignment start, std::size_t& count,
                   std::chrono::steady_clock::time_point deadline) const {
    std::vector<Rational> x(start.values().begin(), start.values().end());
    count = count_satisfied(c_, versions_, Assignment(x));
    bool improved = true;
    while (improved && std::chrono::steady_clock::now() < deadline) {
      improved = false;
      for (int q = 1; q < m_; ++q) {
        if (sweep(x, q, count)) improved = true;
      }
    }
    return Assignment(std::move(x));
  }

 private:
  struct Touch {
    std::size_t version;
    std::size_t slot;
  };

  bool sweep(std::vector<Rational>& x, int q, std::size_t& count) const {
    const Rational lo = q > 1 ? x[q - 2] : Rational(0);
    const Rational hi = x[q];
    if (lo == hi) {
      if (x[q - 1] == lo) return false;
    }
    const auto& touch = touching_[q];
    std::vector<Rational> coef(touch.size()), rest(touch.size());
    std::vector<Rational> points{lo, hi};
    for (std::size_t k = 0; k < touch.size(); ++k) {
      const Version& v = versions_[touch[k].version];
      Rational other = 0;
      for (std::size_t r = 0; r < c_.size(); ++r)
        if (r != touch[k].slot) other += c_[r] * x[v.slots[r] - 1];
      coef[k] = c_[touch[k].slot];
      rest[k] = other;
      if (sgn(coef[k]) != 0) {
        Rational t = -other / coef[k];
        if (t > lo && t < hi) points.push_back(t);
      }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<Rational> candidates;
    for (std::size_t i = 0; i < points.size(); ++i) {
      candidates.push_back(points[i]);
      if (i + 1 < points.size()) candidates.push_back((points[i] + points[i + 1]) / 2);
    }
    // satisfied counts among touching versions, via a difference array
    std::vector<long> diff(candidates.size() + 1, 0);
    for (std::size_t k = 0; k < touch.size(); ++k) {
      if (sgn(coef[k]) == 0) {
        if (sgn(rest[k]) > 0) {
          diff[0] += 1;
          diff[candidates.size()] -= 1;
        }
        continue;
      }
      Rational t = -rest[k] / coef[k];
      if (sgn(coef[k]) > 0) {
        auto it = std::upper_bound(candidates.begin(), candidates.end(), t);
        diff[it - candidates.begin()] += 1;
        diff[candidates.size()] -= 1;
      } else {
        auto it = std::lower_bound(candidates.begin(), candidates.end(), t);
        diff[0] += 1;
        diff[it - candidates.begin()] -= 1;
      }
    }
    std::size_t current_local = 0;
    for (std::size_t k = 0; k < touch.size(); ++k)
      if (sgn(coef[k] * x[q - 1] + rest[k]) > 0) ++current_local;

    long running = 0, best = -1;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      running += diff[i];
      if (running > best) {
        best = running;
        best_idx = i;
      }
    }
    if (best <= static_cast<long>(current_local)) return false;
    x[q - 1] = candidates[best_idx];
    count = count - current_local + static_cast<std::size_t>(best);
    return true;
  }

  const CoefficientVector& c_;
  int m_;
  std::span<const Version> versions_;
  std::vector<std::vector<Touch>> touching_;
};

inline MfsResult make_result(const CoefficientVector& c, int m,
                             std::span<const Version> pruned, Assignment witness,
                             bool optimal) {
  MfsResult r;
  r.c = c;
  r.m = m;
  r.total_versions = version_count(c, m);
  for (const auto& v : pruned)
    (strictly_satisfied(c, v, witness) ? r.satisfied : r.violated).push_back(v);
  r.witness = std::move(witness);
  r.optimal = optimal;
  if (optimal) r.bound = r.satisfied_fraction();
  return r;
}

// Best assignment from seeds + coordinate hill climbing + (small instances)
// greedy LP augmentation.
inline Assignment heuristic_witness(const CoefficientVector& c, int m,
                                    std::span<const Version> pruned,
                                    const MfsOptions& options,
                                    std::chrono::steady_clock::time_point deadline) {
  HillClimber climber(c, m, pruned);
  Assignment best;
  std::size_t best_count = 0;
  bool have = false;
  auto seeds = seed_assignments(m);
  // Rank seeds first, climb from the best few.
  std::vector<std::pair<std::size_t, std::size_t>> ranked;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    ranked.push_back({count_satisfied(c, pruned, seeds[i]), i});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](auto a, auto b) { return a.first > b.first; });
  const std::size_t climbs = std::min<std::size_t>(ranked.size(), 8);
  for (std::size_t k = 0; k < climbs; ++k) {
    if (have && std::chrono::steady_clock::now() >= deadline) break;
    std::size_t count = 0;
    Assignment a = climber.climb(seeds[ranked[k].second], count, deadline);
    if (!have || count > best_count) {
      best = std::move(a);
      best_count = count;
      have = true;
    }
  }

  if (pruned.size() <= options.augment_limit) {
    std::vector<Version> chosen;
    for (const auto& v : pruned)
      if (strictly_satisfied(c, v, best)) chosen.push_back(v);
    for (const auto& v : pruned) {
      if (std::chrono::steady_clock::now() >= deadline) break;
      if (strictly_satisfied(c, v, best)) continue;
      chosen.push_back(v);
      auto f = solve_feasibility(c, m, chosen);
      if (f.witness) {
        best = *f.witness;
        chosen.clear();
        for (const auto& u : pruned)
          if (strictly_satisfied(c, u, best)) chosen.push_back(u);
      } else {
        chosen.pop_back();
      }
    }
  }
  return normalize(best);
}

// Depth-first include/exclude search over the pruned versions. Bounds:
// remaining versions minus a greedy packing of cached infeasible subsystems
// (each needs at least one more exclusion).
class BranchAndBound {
 public:
  BranchAndBound(const CoefficientVector& c, int m, std::span<const Version> versions,
                 std::uint64_t order_seed,
                 std::chrono::steady_clock::time_point deadline)
      : c_(c), m_(m), versions_(versions), state_(versions.size(), kUndecided),
        containing_(versions.size()), deadline_(deadline) {
    // Pairwise conflicts provable by the prefix-sum test seed the cache.
    std::vector<std::size_t> degree(versions.size(), 0);
    for (std::size_t i = 0; i < versions.size(); ++i) {
      for (std::size_t j = i + 1; j < versions.size(); ++j) {
        bool provable = true;
        for (int q = 1; q <= m && provable; ++q)
          provable = f_coeff(q, versions[i], c) + f_coeff(q, versions[j], c) >= 0;
        if (provable) {
          add_nogood({i, j});
          ++degree[i];
          ++degree[j];
        }
      }
    }
    order_.resize(versions.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (order_seed != 0) {
      std::mt19937_64 rng(order_seed);
      std::shuffle(order_.begin(), order_.end(), rng);
    } else {
      std::stable_sort(order_.begin(), order_.end(),
                       [&](auto a, auto b) { return degree[a] > degree[b]; });
    }
  }

  void offer(const Assignment& a) {
    std::size_t count = count_satisfied(c_, versions_, a);
    if (!have_best_ || count > best_count_) {
      best_count_ = count;
      best_ = a;
      have_best_ = true;
    }
  }

  // Returns true when the search completed (the incumbent is optimal).
  bool run() {
    if (!have_best_) offer(Assignment(std::vector<Rational>(static_cast<std::size_t>(m_), 0)));
    Assignment start = best_;
    dfs(0, 0, start);
    return !timed_out_;
  }

  const Assignment& best() const { return best_; }
  std::size_t nodes() const { return nodes_; }

 private:
  enum State : std::uint8_t { kUndecided, kIncluded, kExcluded };

  void add_nogood(std::vector<std::size_t> members) {
    if (nogoods_.size() >= kMaxNogoods) return;
    std::sort(members.begin(), members.end());
    const std::size_t id = nogoods_.size();
    for (auto t : members) containing_[t].push_back(id);
    nogoods_.push_back(std::move(members));
  }

  // Lower bound on exclusions still forced among undecided versions.
  std::size_t forced_exclusions() {
    marks_.assign(versions_.size(), 0);
    std::size_t forced = 0;
    for (const auto& ng : nogoods_) {
      bool usable = true;
      for (auto t : ng) {
        if (state_[t] == kExcluded || (state_[t] == kUndecided && marks_[t])) {
          usable = false;
          break;
        }
      }
      if (!usable) continue;
      for (auto t : ng)
        if (state_[t] == kUndecided) marks_[t] = 1;
      ++forced;
    }
    return forced;
  }

  bool blocked_by_nogood(std::size_t t) const {
    for (auto id : containing_[t]) {
      bool all_in = true;
      for (auto u : nogoods_[id])
        if (u != t && state_[u] != kIncluded) {
          all_in = false;
          break;
        }
      if (all_in) return true;
    }
    return false;
  }

  void dfs(std::size_t depth, std::size_t excluded, const Assignment& witness) {
    if (timed_out_) return;
    if ((++nodes_ & 63) == 0 && std::chrono::steady_clock::now() >= deadline_) {
      timed_out_ = true;
      return;
    }
    const std::size_t k = versions_.size();
    if (depth == k) return;
    if (k - excluded <= best_count_) return;
    if (k - excluded - forced_exclusions() <= best_count_) return;

    const std::size_t t = order_[depth];
    if (strictly_satisfied(c_, versions_[t], witness)) {
      state_[t] = kIncluded;
      dfs(depth + 1, excluded, witness);
    } else if (!blocked_by_nogood(t)) {
      std::vector<Version> chosen;
      std::vector<std::size_t> ids;
      for (std::size_t u = 0; u < k; ++u)
        if (state_[u] == kIncluded) {
          chosen.push_back(versions_[u]);
          ids.push_back(u);
        }
      chosen.push_back(versions_[t]);
      ids.push_back(t);
      Feasibility f = solve_feasibility(c_, m_, chosen);
      if (f.witness) {
        offer(*f.witness);
        state_[t] = kIncluded;
        dfs(depth + 1, excluded, *f.witness);
      } else {
        std::vector<std::size_t> members;
        for (auto pos : f.conflict) members.push_back(ids[pos]);
        if (!members.empty()) add_nogood(std::move(members));
      }
    }
    state_[t] = kExcluded;
    dfs(depth + 1, excluded + 1, witness);
    state_[t] = kUndecided;
  }

  static constexpr std::size_t kMaxNogoods = 50000;

  const CoefficientVector& c_;
  int m_;
  std::span<const Version> versions_;
  std::vector<State> state_;
  std::vector<std::vector<std::size_t>> nogoods_;
  std::vector<std::vector<std::size_t>> containing_;
  std::vector<std::size_t> order_;
  std::vector<std::uint8_t> marks_;
  std::chrono::steady_clock::time_point deadline_;
  Assignment best_;
  std::size_t best_count_ = 0;
  bool have_best_ = false;
  bool timed_out_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace detail

// Exact mode proves optimality by exhausting the branch tree (optimal=true,
// bound set); on budget exhaustion, or in heuristic mode, the best witness
// found is returned with optimal=false and no bound.
inline MfsResult solve_mfs(const CoefficientVector& c, int m, const MfsOptions& options = {}) {
  const VersionSet vs = pruned_versions(c, m);
  const auto deadline = std::chrono::steady_clock::now() + options.time_budget;
  std::span<const Version> pruned = vs.pruned();
  Assignment seed = detail::heuristic_witness(c, m, pruned, options, deadline);
  if (options.mode == MfsMode::kHeuristic)
    return detail::make_result(c, m, pruned, seed, false);

  detail::BranchAndBound search(c, m, pruned, options.order_seed, deadline);
  search.offer(seed);
  bool complete = search.run();
  return detail::make_result(c, m, pruned, search.best(), complete);
}

// Exact bounds for m_from..m_to; throws BudgetExceeded when any solve is
// not proven optimal.
inline std::vector<Rational> bound_sequence(const CoefficientVector& c, int m_from,
                                            int m_to, const MfsOptions& options = {}) {
  std::vector<Rational> out;
  for (int m = m_from; m <= m_to; ++m) {
    MfsOptions exact = options;
    exact.mode = MfsMode::kExact;
    MfsResult r = solve_mfs(c, m, exact);
    if (!r.optimal)
      throw BudgetExceeded("exact MFS at m = " + std::to_string(m) +
                           " did not finish within the time budget");
    if (!out.empty() && *r.bound > out.back())
      throw std::logic_error("bound sequence increased at m = " + std::to_string(m));
    out.push_back(*r.bound);
  }
  return out;
}

// Recounts a witness over the pruned versions (optimal = false, no bound).
inline MfsResult evaluate_witness(const CoefficientVector& c, const Assignment& witness) {
  const int m = static_cast<int>(witness.m());
  const VersionSet vs = pruned_versions(c, m);
  return detail::make_result(c, m, vs.pruned(), witness, false);
}

// Empty when the satisfied/violated split is exactly what the witness
// induces on the pruned versions and the bound (if any) matches it.
// Optimality itself is not re-checked.
inline std::string check_mfs_result(const MfsResult& r) {
  if (r.m < static_cast<int>(r.c.size())) return "m is smaller than n";
  if (static_cast<int>(r.witness.m()) != r.m)
    return "witness has " + std::to_string(r.witness.m()) + " entries, expected " +
           std::to_string(r.m);
  MfsResult recount = detail::make_result(r.c, r.m, pruned_versions(r.c, r.m).pruned(),
                                          r.witness, r.optimal);
  auto sorted = [](std::vector<Version> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(r.satisfied) != recount.satisfied)
    return "satisfied list differs from the witness recount (" +
           std::to_string(r.satisfied.size()) + " listed, " +
           std::to_string(recount.satisfied.size()) + " recounted)";
  if (sorted(r.violated) != recount.violated)
    return "violated list differs from the witness recount";
  if (r.total_versions != recount.total_versions) return "total_versions is wrong";
  if (r.bound && *r.bound != recount.satisfied_fraction())
    return "bound does not equal satisfied / total";
  if (r.optimal && !r.bound) return "optimal result without a bound";
  return {};
}

}  // namespace iidsup
