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

// Versions of a strict linear inequality: the instances
// sum_r c_r x_{slot_r} > 0 for injective slot maps [n] -> [m], stored once
// per orbit of the permutations that swap equal coefficients.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iidsup/core.hpp"

namespace iidsup {

// 1-based variable indices, one per coefficient position.
struct Version {
  std::vector<int> slots;

  friend auto operator<=>(const Version&, const Version&) = default;
  friend bool operator==(const Version&, const Version&) = default;
};

inline std::string to_string(const Version& v) {
  std::string out = "(";
  for (std::size_t r = 0; r < v.slots.size(); ++r) {
    if (r) out += ",";
    out += std::to_string(v.slots[r]);
  }
  return out + ")";
}

// Sorts slots within each block of equal coefficients.
inline Version canonicalize(const CoefficientVector& c, Version v) {
  const std::size_t n = c.size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = r + 1; s < n; ++s) {
      if (c[r] == c[s] && v.slots[s] < v.slots[r]) std::swap(v.slots[r], v.slots[s]);
    }
  }
  return v;
}

// True when `v` is a canonical injective version over [m].
inline bool is_valid_version(const CoefficientVector& c, int m, const Version& v) {
  if (v.slots.size() != c.size()) return false;
  for (std::size_t r = 0; r < v.slots.size(); ++r) {
    if (v.slots[r] < 1 || v.slots[r] > m) return false;
    for (std::size_t s = r + 1; s < v.slots.size(); ++s) {
      if (v.slots[r] == v.slots[s]) return false;
      if (c[r] == c[s] && v.slots[s] < v.slots[r]) return false;
    }
  }
  return true;
}

// sum_r c_r x_{slot_r}
inline Rational evaluate(const CoefficientVector& c, const Version& v,
                         std::span<const Rational> x) {
  Rational total = 0;
  for (std::size_t r = 0; r < c.size(); ++r) total += c[r] * x[v.slots[r] - 1];
  return total;
}

inline bool strictly_satisfied(const CoefficientVector& c, const Version& v,
                               const Assignment& a) {
  return sgn(evaluate(c, v, a.values())) > 0;
}

// Coefficient F(q, v) = -sum_r c_r [q <= slot_r], i.e. the
// aggregate weight that x_q, ..., x_m carry in the violated form
// -sum_r c_r x_{slot_r} >= 0. A system whose F-sums are all >= 0 cannot be
// jointly satisfied by any 0 <= x_1 <= ... <= x_m.
inline long f_coeff(int q, const Version& v, const CoefficientVector& c) {
  long total = 0;
  for (std::size_t r = 0; r < c.size(); ++r)
    if (q <= v.slots[r]) total -= c[r];
  return total;
}

// Number of canonical versions, m!/(m-n)! / prod(multiplicity!).
inline Integer version_count(const CoefficientVector& c, int m) {
  const int n = static_cast<int>(c.size());
  if (m < n) return 0;
  Integer count = 1;
  for (int i = 0; i < n; ++i) count *= m - i;
  std::map<long, int> multiplicity;
  for (long v : c.values()) ++multiplicity[v];
  for (const auto& [value, k] : multiplicity) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    count /= f;
  }
  return count;
}

class VersionSet {
 public:
  VersionSet() = default;
  VersionSet(CoefficientVector c, int m, std::vector<Version> all,
             std::vector<Version> pruned)
      : c_(std::move(c)), m_(m), all_(std::move(all)), pruned_(std::move(pruned)) {}

  const CoefficientVector& coefficients() const { return c_; }
  int m() const { return m_; }
  const std::vector<Version>& all() const& { return all_; }
  std::vector<Version> all() && { return std::move(all_); }
  const std::vector<Version>& pruned() const& { return pruned_; }
  std::vector<Version> pruned() && { return std::move(pruned_); }

  // Position of `v` in pruned(), if present.
  std::optional<std::size_t> pruned_index(const Version& v) const {
    auto it = std::lower_bound(pruned_.begin(), pruned_.end(), v);
    if (it == pruned_.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - pruned_.begin());
  }

  std::vector<Version> dropped() const {
    std::vector<Version> out;
    std::set_difference(all_.begin(), all_.end(), pruned_.begin(), pruned_.end(),
                        std::back_inserter(out));
    return out;
  }

 private:
  CoefficientVector c_;
  int m_ = 0;
  std::vector<Version> all_;
  std::vector<Version> pruned_;
};

// Single-version prefix-sum test: true when v alone is provably violated by
// every ordered assignment.
inline bool ordering_excludes(const CoefficientVector& c, int m, const Version& v) {
  for (int q = 1; q <= m; ++q)
    if (f_coeff(q, v, c) < 0) return false;
  return true;
}

// All canonical versions in lexicographic order; `pruned` is left equal to
// `all` until prune_ordered runs.
inline VersionSet enumerate_versions(const CoefficientVector& c, int m) {
  const int n = static_cast<int>(c.size());
  if (m < n)
    throw InvalidArgument("m = " + std::to_string(m) + " is smaller than n = " +
                          std::to_string(n));
  // previous position holding the same coefficient, or -1
  std::vector<int> block_prev(n, -1);
  for (int r = 0; r < n; ++r)
    for (int s = r - 1; s >= 0; --s)
      if (c[s] == c[r]) {
        block_prev[r] = s;
        break;
      }

  std::vector<Version> all;
  Version current{std::vector<int>(n, 0)};
  std::vector<bool> used(m + 1, false);
  auto recurse = [&](auto&& self, int r) -> void {
    if (r == n) {
      all.push_back(current);
      return;
    }
    int start = block_prev[r] >= 0 ? current.slots[block_prev[r]] + 1 : 1;
    for (int s = start; s <= m; ++s) {
      if (used[s]) continue;
      used[s] = true;
      current.slots[r] = s;
      self(self, r + 1);
      used[s] = false;
    }
  };
  recurse(recurse, 0);
  std::sort(all.begin(), all.end());
  std::vector<Version> pruned = all;
  return VersionSet(c, m, std::move(all), std::move(pruned));
}

// Drops the versions that ordering_excludes() rules out on their own.
inline VersionSet prune_ordered(const VersionSet& vs) {
  std::vector<Version> kept;
  for (const auto& v : vs.all())
    if (!ordering_excludes(vs.coefficients(), vs.m(), v)) kept.push_back(v);
  return VersionSet(vs.coefficients(), vs.m(), vs.all(), std::move(kept));
}

inline VersionSet pruned_versions(const CoefficientVector& c, int m) {
  return prune_ordered(enumerate_versions(c, m));
}

// Integer coefficients proportional to the event
// (1/n) sum_{i<=n} X_i > (alpha/m_inner) sum_{i<=m_inner} X_i, cleared of
// denominators and reduced by their gcd.
inline CoefficientVector general_family(int n, int m_inner, const Rational& alpha) {
  if (m_inner < 1 || n <= m_inner)
    throw InvalidArgument("general family needs n > m_inner >= 1");
  if (alpha <= 0) throw InvalidArgument("alpha must be positive");
  Rational head = Rational(Integer(1), Integer(n)) - alpha / m_inner;
  Rational tail = Rational(Integer(1), Integer(n));
  head.canonicalize();
  Integer lcm;
  mpz_lcm(lcm.get_mpz_t(), head.get_den_mpz_t(), tail.get_den_mpz_t());
  Integer h = head.get_num() * (lcm / head.get_den());
  Integer t = tail.get_num() * (lcm / tail.get_den());
  Integer g;
  mpz_gcd(g.get_mpz_t(), h.get_mpz_t(), t.get_mpz_t());
  if (g != 0) {
    h /= g;
    t /= g;
  }
  if (!h.fits_slong_p() || !t.fits_slong_p())
    throw InvalidArgument("general family coefficients overflow");
  std::vector<long> c;
  for (int i = 0; i < m_inner; ++i) c.push_back(h.get_si());
  for (int i = m_inner; i < n; ++i) c.push_back(t.get_si());
  return CoefficientVector(std::move(c));
}

}  // namespace iidsup
