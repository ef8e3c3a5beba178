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

// Packing certificates for maximum feasible subsystems.
//
// Summing the versions of a system in their violated form gives
// sum_q a_q x_q with suffix sums S_q = a_q + ... + a_m = sum_t F(q, t), and
// sum_q a_q x_q = sum_q S_q (x_q - x_{q-1}). If every S_q >= 0 the strict
// system is jointly unsatisfiable under 0 <= x_1 <= ... <= x_m. A
// certificate assigns every violated version u a private set of satisfied
// versions such that {u} plus that set passes this test; every assignment
// then misses at least one version per system, so at most |satisfied| of
// the pruned versions can hold at once.

#pragma once

#include <algorithm>
#include <chrono>
#include <random>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iidsup/core.hpp"
#include "iidsup/mfs.hpp"
#include "iidsup/versions.hpp"

namespace iidsup {

struct PrefixProfile {
  std::vector<long> a;  // aggregate coefficient of x_q, q = 1..m
  std::vector<long> s;  // S_q = a_q + ... + a_m

  bool passes() const {
    return std::all_of(s.begin(), s.end(), [](long v) { return v >= 0; });
  }
};

inline PrefixProfile prefix_profile(std::span<const Version> system,
                                    const CoefficientVector& c, int m) {
  PrefixProfile p;
  p.s.assign(static_cast<std::size_t>(m), 0);
  p.a.assign(static_cast<std::size_t>(m), 0);
  for (const auto& v : system)
    for (int q = 1; q <= m; ++q) p.s[q - 1] += f_coeff(q, v, c);
  for (int q = 1; q <= m; ++q)
    p.a[q - 1] = p.s[q - 1] - (q < m ? p.s[q] : 0);
  return p;
}

// The profile when it proves infeasibility; nullopt otherwise (which says
// nothing about feasibility: uniform weights are sufficient, not necessary).
inline std::optional<PrefixProfile> verify_system_infeasible(
    std::span<const Version> system, const CoefficientVector& c, int m) {
  if (system.empty()) return std::nullopt;
  PrefixProfile p = prefix_profile(system, c, m);
  if (!p.passes()) return std::nullopt;
  return p;
}

struct Certificate {
  CoefficientVector c;
  int m = 0;
  std::vector<Version> satisfied;
  std::vector<Version> violated;
  // packing[u] lists indices into `satisfied` supporting violated[u].
  std::vector<std::vector<std::size_t>> packing;

  std::vector<Version> system(std::size_t u) const {
    std::vector<Version> out{violated[u]};
    for (auto t : packing[u]) out.push_back(satisfied[t]);
    return out;
  }
};

struct CertificateCheck {
  std::optional<Rational> bound;  // proven upper bound on success
  std::string rejection;          // first failed check otherwise

  explicit operator bool() const { return bound.has_value(); }
};

inline CertificateCheck verify_certificate(const Certificate& cert) {
  auto reject = [](std::string why) { return CertificateCheck{std::nullopt, std::move(why)}; };
  const auto& c = cert.c;
  const int m = cert.m;
  if (c.size() < 2) return reject("structure: coefficient vector missing");
  if (m < static_cast<int>(c.size()))
    return reject("structure: m = " + std::to_string(m) + " is smaller than n");

  for (std::size_t i = 0; i < cert.satisfied.size(); ++i)
    if (!is_valid_version(c, m, cert.satisfied[i]))
      return reject("structure: satisfied[" + std::to_string(i) + "] = " +
                    to_string(cert.satisfied[i]) + " is not a canonical version");
  for (std::size_t i = 0; i < cert.violated.size(); ++i)
    if (!is_valid_version(c, m, cert.violated[i]))
      return reject("structure: violated[" + std::to_string(i) + "] = " +
                    to_string(cert.violated[i]) + " is not a canonical version");

  // (1) satisfied and violated partition the pruned versions
  std::vector<Version> all = cert.satisfied;
  all.insert(all.end(), cert.violated.begin(), cert.violated.end());
  std::sort(all.begin(), all.end());
  if (auto dup = std::adjacent_find(all.begin(), all.end()); dup != all.end())
    return reject("partition: version " + to_string(*dup) + " listed twice");
  const VersionSet vs = pruned_versions(c, m);
  if (all != vs.pruned()) {
    std::vector<Version> missing, extra;
    std::set_difference(vs.pruned().begin(), vs.pruned().end(), all.begin(), all.end(),
                        std::back_inserter(missing));
    std::set_difference(all.begin(), all.end(), vs.pruned().begin(), vs.pruned().end(),
                        std::back_inserter(extra));
    if (!extra.empty())
      return reject("partition: version " + to_string(extra.front()) +
                    " is not in the pruned set");
    return reject("partition: pruned version " + to_string(missing.front()) +
                  " is neither satisfied nor violated");
  }

  // (2) one system per violated version, pairwise disjoint supports
  if (cert.packing.size() != cert.violated.size())
    return reject("packing: " + std::to_string(cert.packing.size()) + " systems for " +
                  std::to_string(cert.violated.size()) + " violated versions");
  std::vector<long> owner(cert.satisfied.size(), -1);
  for (std::size_t u = 0; u < cert.packing.size(); ++u) {
    for (auto t : cert.packing[u]) {
      if (t >= cert.satisfied.size())
        return reject("packing: system " + std::to_string(u) + " references satisfied[" +
                      std::to_string(t) + "], out of range");
      if (owner[t] >= 0)
        return reject("disjointness: satisfied[" + std::to_string(t) + "] = " +
                      to_string(cert.satisfied[t]) + " supports systems " +
                      std::to_string(owner[t]) + " and " + std::to_string(u));
      owner[t] = static_cast<long>(u);
    }
  }

  // (3) every system passes the prefix-sum test
  for (std::size_t u = 0; u < cert.packing.size(); ++u) {
    auto sys = cert.system(u);
    PrefixProfile p = prefix_profile(sys, c, m);
    for (int q = 1; q <= m; ++q)
      if (p.s[q - 1] < 0)
        return reject("profile: system " + std::to_string(u) + " (violated " +
                      to_string(cert.violated[u]) + ") has S_" + std::to_string(q) +
                      " = " + std::to_string(p.s[q - 1]) + " < 0");
  }

  Rational bound(Integer(static_cast<unsigned long>(cert.satisfied.size())),
                 version_count(c, m));
  bound.canonicalize();
  return {bound, {}};
}

struct CertificateSearchOptions {
  std::size_t max_system_size = 6;  // supporting versions per system
  std::chrono::milliseconds time_budget{std::chrono::minutes(1)};
  std::size_t branch_width = 48;    // candidates tried per extension step
};

struct CertificateSearch {
  std::optional<Certificate> certificate;
  std::size_t packed = 0;  // deepest number of systems packed simultaneously
  std::size_t total = 0;
  bool timed_out = false;
};

namespace detail {

// Packing search. Each violated version gets a list of candidate supports
// (all single supporters, then small sets grown greedily toward the worst
// prefix deficit); versions are placed most-constrained first and conflicts
// are repaired by displacing current owners.
class PackingSearch {
 public:
  PackingSearch(const MfsResult& result, const CertificateSearchOptions& options)
      : r_(result), opt_(options),
        deadline_(std::chrono::steady_clock::now() + options.time_budget) {
    const int m = r_.m;
    auto fvec = [&](const Version& v) {
      std::vector<long> f(static_cast<std::size_t>(m));
      for (int q = 1; q <= m; ++q) f[q - 1] = f_coeff(q, v, r_.c);
      return f;
    };
    for (const auto& v : r_.satisfied) fs_.push_back(fvec(v));
    for (const auto& v : r_.violated) fu_.push_back(fvec(v));
    used_.assign(r_.satisfied.size(), 0);
    occurrences_.assign(r_.satisfied.size(), {});
    const std::size_t nu = r_.violated.size();
    cands_.assign(nu, {});
    blocked_.assign(nu, {});
    available_.assign(nu, 0);
    assigned_.assign(nu, kNone);
    demand_.assign(r_.satisfied.size(), 0);
  }

  CertificateSearch run() {
    CertificateSearch out;
    out.total = r_.violated.size();
    for (std::size_t u = 0; u < r_.violated.size() && !expired(); ++u)
      generate(u, kInitialCandidates);
    for (std::size_t u = 0; u < cands_.size(); ++u)
      for (const auto& cand : cands_[u])
        for (auto t : cand) ++demand_[t];
    for (auto& list : cands_) {
      // smaller supports first, then the least contested supporters
      std::stable_sort(list.begin(), list.end(), [&](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return contest(a) < contest(b);
      });
    }
    for (std::size_t u = 0; u < cands_.size(); ++u) index_candidates(u, 0);
    bool ok = !timed_out_ && repair();
    out.packed = best_depth_;
    out.timed_out = timed_out_;
    if (ok) {
      Certificate cert;
      cert.c = r_.c;
      cert.m = r_.m;
      cert.satisfied = r_.satisfied;
      cert.violated = r_.violated;
      cert.packing.resize(r_.violated.size());
      for (std::size_t u = 0; u < cert.packing.size(); ++u) {
        cert.packing[u] = cands_[u][assigned_[u]];
        std::sort(cert.packing[u].begin(), cert.packing[u].end());
      }
      if (verify_certificate(cert)) out.certificate = std::move(cert);
    }
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  static constexpr std::size_t kInitialCandidates = 64;
  static constexpr std::size_t kNodeBudget = 20000;

  long contest(const std::vector<std::size_t>& cand) const {
    long total = 0;
    for (auto t : cand) total += demand_[t];
    return total;
  }

  bool expired() {
    if (!timed_out_ && (++ticks_ & 255) == 0 &&
        std::chrono::steady_clock::now() >= deadline_)
      timed_out_ = true;
    return timed_out_;
  }

  // Appends up to `limit` new supports for u that avoid used supporters.
  void generate(std::size_t u, std::size_t limit) {
    std::set<std::vector<std::size_t>> seen(cands_[u].begin(), cands_[u].end());
    std::size_t added = 0;
    const auto& fu = fu_[u];
    auto passes = [](const std::vector<long>& s) {
      return std::all_of(s.begin(), s.end(), [](long v) { return v >= 0; });
    };
    std::vector<long> sum(fu.size());
    // singles: all of them
    for (std::size_t t = 0; t < fs_.size() && added < limit; ++t) {
      if (used_[t]) continue;
      for (std::size_t q = 0; q < fu.size(); ++q) sum[q] = fu[q] + fs_[t][q];
      if (passes(sum) && seen.insert({t}).second) {
        cands_[u].push_back({t});
        ++added;
      }
    }
    if (added >= limit || passes(fu)) {
      if (passes(fu) && seen.insert(std::vector<std::size_t>{}).second)
        cands_[u].push_back({});
      return;
    }
    std::vector<std::size_t> chosen;
    std::size_t depth_limit = 2;
    std::size_t nodes = 0;
    auto grow = [&](auto&& self, const std::vector<long>& cur) -> void {
      if (added >= limit || nodes >= kNodeBudget || expired()) return;
      ++nodes;
      std::size_t worst = cur.size();
      for (std::size_t q = 0; q < cur.size(); ++q)
        if (cur[q] < 0 && (worst == cur.size() || cur[q] < cur[worst])) worst = q;
      if (worst == cur.size()) {
        std::vector<std::size_t> key = chosen;
        std::sort(key.begin(), key.end());
        if (key.size() > 1 && seen.insert(key).second) {
          cands_[u].push_back(key);
          ++added;
        }
        return;
      }
      if (chosen.size() >= depth_limit) return;
      std::vector<std::pair<long, std::size_t>> options;
      for (std::size_t t = 0; t < fs_.size(); ++t) {
        if (used_[t] || fs_[t][worst] <= 0) continue;
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
        long d = 0;
        for (std::size_t q = 0; q < cur.size(); ++q) {
          long v = cur[q] + fs_[t][q];
          if (v < 0) d -= v;
        }
        options.push_back({d, t});
      }
      std::stable_sort(options.begin(), options.end());
      if (options.size() > opt_.branch_width) options.resize(opt_.branch_width);
      std::vector<long> next(cur.size());
      for (const auto& [d, t] : options) {
        for (std::size_t q = 0; q < cur.size(); ++q) next[q] = cur[q] + fs_[t][q];
        chosen.push_back(t);
        self(self, next);
        chosen.pop_back();
        if (added >= limit) return;
      }
    };
    for (; depth_limit <= opt_.max_system_size && added == 0; ++depth_limit) {
      nodes = 0;
      grow(grow, fu);
    }
  }

  // Registers candidates of u from position `from` on.
  void index_candidates(std::size_t u, std::size_t from) {
    blocked_[u].resize(cands_[u].size(), 0);
    for (std::size_t ci = from; ci < cands_[u].size(); ++ci) {
      std::size_t b = 0;
      for (auto t : cands_[u][ci]) {
        occurrences_[t].push_back({u, ci});
        if (used_[t]) ++b;
      }
      blocked_[u][ci] = b;
      if (b == 0) ++available_[u];
    }
  }

  void set_used(const std::vector<std::size_t>& cand, bool on) {
    for (auto t : cand) {
      used_[t] = on ? 1 : 0;
      for (const auto& [u, ci] : occurrences_[t]) {
        if (on) {
          if (blocked_[u][ci]++ == 0) --available_[u];
        } else {
          if (--blocked_[u][ci] == 0) ++available_[u];
        }
      }
    }
  }

  void take(std::size_t u, std::size_t ci) {
    assigned_[u] = ci;
    for (auto t : cands_[u][ci]) owner_[t] = u;
    set_used(cands_[u][ci], true);
  }

  void release(std::size_t u) {
    for (auto t : cands_[u][assigned_[u]]) owner_[t] = kNone;
    set_used(cands_[u][assigned_[u]], false);
    assigned_[u] = kNone;
  }

  // Min-conflicts repair: an unplaced version takes a free support when one
  // exists, otherwise the support whose current owners are fewest and least
  // recently displaced, and those owners go back on the queue.
  bool repair() {
    owner_.assign(r_.satisfied.size(), kNone);
    std::mt19937_64 rng(0x5eed);
    std::vector<std::size_t> last_moved(assigned_.size(), 0);
    std::size_t placed = 0;
    for (std::size_t step = 1;; ++step) {
      if (expired()) return false;
      std::size_t u = kNone;
      for (std::size_t v = 0; v < assigned_.size(); ++v) {
        if (assigned_[v] != kNone) continue;
        if (u == kNone || available_[v] < available_[u]) u = v;
      }
      if (u == kNone) return true;
      if (available_[u] == 0 && cands_[u].size() < 4 * kInitialCandidates) {
        const std::size_t before = cands_[u].size();
        generate(u, kInitialCandidates);
        index_candidates(u, before);
      }
      std::size_t pick = kNone;
      if (available_[u] > 0) {
        for (std::size_t ci = 0; ci < cands_[u].size(); ++ci)
          if (blocked_[u][ci] == 0) {
            pick = ci;
            break;
          }
      } else {
        double best = 0;
        std::uniform_real_distribution<double> jitter(0.0, 0.5);
        for (std::size_t ci = 0; ci < cands_[u].size(); ++ci) {
          std::vector<std::size_t> owners;
          for (auto t : cands_[u][ci])
            if (owner_[t] != kNone) owners.push_back(owner_[t]);
          std::sort(owners.begin(), owners.end());
          owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
          double cost = static_cast<double>(owners.size()) + jitter(rng);
          for (auto w : owners)
            if (step - last_moved[w] < 8) cost += 4;
          if (pick == kNone || cost < best) {
            pick = ci;
            best = cost;
          }
        }
        if (pick == kNone) return false;
        std::vector<std::size_t> evict;
        for (auto t : cands_[u][pick])
          if (owner_[t] != kNone) evict.push_back(owner_[t]);
        std::sort(evict.begin(), evict.end());
        evict.erase(std::unique(evict.begin(), evict.end()), evict.end());
        for (auto w : evict) {
          release(w);
          last_moved[w] = step;
          --placed;
        }
      }
      take(u, pick);
      last_moved[u] = step;
      best_depth_ = std::max(best_depth_, ++placed);
    }
  }

  const MfsResult& r_;
  CertificateSearchOptions opt_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::vector<long>> fs_, fu_;
  std::vector<std::uint8_t> used_;
  std::vector<std::vector<std::vector<std::size_t>>> cands_;
  std::vector<std::vector<std::size_t>> blocked_;
  std::vector<std::size_t> available_;
  std::vector<std::size_t> assigned_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> occurrences_;
  std::vector<long> demand_;
  std::vector<std::size_t> owner_;
  std::size_t best_depth_ = 0;
  std::size_t ticks_ = 0;
  bool timed_out_ = false;
};

}  // namespace detail

// Backtracking search for a disjoint packing. A miss is not a disproof of
// maximality.
inline CertificateSearch search_certificate(const MfsResult& result,
                                            const CertificateSearchOptions& options = {}) {
  return detail::PackingSearch(result, options).run();
}

// Human-checkable rendering: every system with its inequalities, a-vector
// and S-vector.
inline std::string render_audit(const Certificate& cert) {
  std::ostringstream out;
  auto term_list = [&](const Version& v) {
    std::ostringstream s;
    bool first = true;
    for (std::size_t r = 0; r < cert.c.size(); ++r) {
      long k = cert.c[r];
      if (k == 0) continue;
      if (first) {
        if (k < 0) s << "-";
      } else {
        s << (k < 0 ? " - " : " + ");
      }
      long mag = k < 0 ? -k : k;
      if (mag != 1) s << mag << " ";
      s << "x" << v.slots[r];
      first = false;
    }
    s << " > 0";
    return s.str();
  };
  auto join = [](const std::vector<long>& xs) {
    std::ostringstream s;
    s << "(";
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
    s << ")";
    return s.str();
  };
  out << "certificate m=" << cert.m << " satisfied=" << cert.satisfied.size()
      << " violated=" << cert.violated.size() << "\n";
  for (std::size_t u = 0; u < cert.violated.size(); ++u) {
    auto sys = cert.system(u);
    PrefixProfile p = prefix_profile(sys, cert.c, cert.m);
    out << "system " << u << "\n";
    out << "  [violated]  " << term_list(cert.violated[u]) << "\n";
    for (auto t : cert.packing[u])
      out << "  [satisfied] " << term_list(cert.satisfied[t]) << "\n";
    out << "  a = " << join(p.a) << "\n";
    out << "  S = " << join(p.s) << (p.passes() ? "  >= 0" : "  FAILS") << "\n";
  }
  return out.str();
}

}  // namespace iidsup
