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

#include "iidsup/certify.hpp"
#include "iidsup/io.hpp"
#include "iidsup/mfs.hpp"
#include "support/brute_force.hpp"

namespace iidsup {
namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

const CoefficientVector kAverage4({-1, -1, -1, 2});
const CoefficientVector kAverage3({1, 1, -2});

std::vector<long> raw(const CoefficientVector& c) { return {c.values().begin(), c.values().end()}; }

std::vector<std::vector<int>> slots_of(const std::vector<Version>& vs) {
  std::vector<std::vector<int>> out;
  for (const auto& v : vs) out.push_back(v.slots);
  return out;
}

brute::PlainCertificate plain(const Certificate& cert) {
  return {raw(cert.c), cert.m, slots_of(cert.satisfied), slots_of(cert.violated), cert.packing};
}

const Certificate& fixture() {
  static const Certificate cert =
      io::certificate_from(io::read_file(std::string(IIDSUP_FIXTURES) + "/cert_m15.json"));
  return cert;
}

const Certificate& certificate_m6() {
  static const Certificate cert = [] {
    auto found = search_certificate(solve_mfs(kAverage4, 6));
    if (!found.certificate) throw std::runtime_error("no certificate at m = 6");
    return *found.certificate;
  }();
  return cert;
}

TEST(PrefixProfile, FourVersionSystem) {
  std::vector<Version> system{{{3, 4, 5, 6}}, {{1, 2, 5, 3}}, {{1, 3, 6, 4}}, {{2, 4, 6, 5}}};
  auto p = verify_system_infeasible(system, kAverage4, 6);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->s, (std::vector<long>{4, 2, 0, 0, 0, 0}));
  EXPECT_TRUE(brute::system_impossible(raw(kAverage4), 6, slots_of(system)));
}

TEST(PrefixProfile, TwoVersionSystem) {
  std::vector<Version> system{{{3, 4, 6, 5}}, {{1, 2, 6, 3}}};
  auto p = verify_system_infeasible(system, kAverage4, 6);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->s, (std::vector<long>{2, 1, 0, 1, 0, 2}));
  long tail = 0;
  for (int i = 5; i >= 0; --i) EXPECT_EQ(p->s[i], tail += p->a[i]);
}

TEST(PrefixProfile, SatisfiableSingletonIsNotProvable) {
  std::vector<Version> single{{{1, 2, 3, 4}}};
  EXPECT_FALSE(verify_system_infeasible(single, kAverage4, 4).has_value());
  EXPECT_FALSE(verify_system_infeasible({}, kAverage4, 4).has_value());
}

TEST(PrefixProfile, AgreesWithPlainTailSums) {
  std::mt19937_64 rng(41);
  const auto pruned = pruned_versions(kAverage4, 7).pruned();
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Version> system;
    std::size_t size = 1 + rng() % 5;
    for (std::size_t i = 0; i < size; ++i) system.push_back(pruned[rng() % pruned.size()]);
    EXPECT_EQ(verify_system_infeasible(system, kAverage4, 7).has_value(),
              brute::system_impossible(raw(kAverage4), 7, slots_of(system)));
  }
}

TEST(PrefixProfile, PassingSystemsAreInfeasible) {
  std::mt19937_64 rng(42);
  const auto pruned = pruned_versions(kAverage4, 6).pruned();
  int proven = 0;
  for (int trial = 0; trial < 50000 && proven < 100; ++trial) {
    std::vector<Version> system;
    std::size_t size = 1 + rng() % 4;
    for (std::size_t i = 0; i < size; ++i) system.push_back(pruned[rng() % pruned.size()]);
    if (!verify_system_infeasible(system, kAverage4, 6)) continue;
    ++proven;
    EXPECT_FALSE(check_subset_feasible(kAverage4, 6, system).has_value());
  }
  EXPECT_GT(proven, 10);
}

TEST(SearchCertificate, ProvesSevenFifteenthsAtSix) {
  const auto& cert = certificate_m6();
  auto check = verify_certificate(cert);
  ASSERT_TRUE(check) << check.rejection;
  EXPECT_EQ(*check.bound, q(28, 60));
  EXPECT_EQ(brute::verify(plain(cert)), std::optional<Rational>(q(7, 15)));
  EXPECT_NE(render_audit(cert).find("S"), std::string::npos);
}

TEST(SearchCertificate, BeatTheAverageNeedsNoSystems) {
  auto r = solve_mfs(kAverage3, 3);
  ASSERT_TRUE(r.violated.empty());
  auto found = search_certificate(r);
  ASSERT_TRUE(found.certificate.has_value());
  EXPECT_TRUE(found.certificate->packing.empty());
  auto check = verify_certificate(*found.certificate);
  ASSERT_TRUE(check) << check.rejection;
  EXPECT_EQ(*check.bound, q(2, 3));
}

TEST(SearchCertificate, BeatTheAverageAtFour) {
  auto found = search_certificate(solve_mfs(kAverage3, 4));
  ASSERT_TRUE(found.certificate.has_value());
  auto check = verify_certificate(*found.certificate);
  ASSERT_TRUE(check) << check.rejection;
  EXPECT_EQ(*check.bound, q(2, 3));
  for (std::size_t u = 0; u < found.certificate->violated.size(); ++u) {
    auto p = prefix_profile(found.certificate->system(u), kAverage3, 4);
    EXPECT_TRUE(p.passes());
  }
}

TEST(VerifyCertificate, LargeFixture) {
  auto check = verify_certificate(fixture());
  ASSERT_TRUE(check) << check.rejection;
  EXPECT_EQ(*check.bound, q(2304, 5460));
  EXPECT_EQ(fixture().satisfied.size(), 2304u);
}

TEST(VerifyCertificate, RejectsSharedSupport) {
  auto cert = certificate_m6();
  ASSERT_GE(cert.packing.size(), 2u);
  std::size_t donor = cert.packing[0].empty() ? 1 : 0;
  ASSERT_FALSE(cert.packing[donor].empty());
  cert.packing[1 - donor].push_back(cert.packing[donor].front());
  auto check = verify_certificate(cert);
  EXPECT_FALSE(check);
  EXPECT_NE(check.rejection.find("disjointness"), std::string::npos) << check.rejection;
}

TEST(VerifyCertificate, RejectsDroppedSystem) {
  auto cert = certificate_m6();
  cert.packing.pop_back();
  auto check = verify_certificate(cert);
  EXPECT_FALSE(check);
  EXPECT_NE(check.rejection.find("packing"), std::string::npos) << check.rejection;
}

TEST(VerifyCertificate, RejectsNegativePrefixSum) {
  auto cert = certificate_m6();
  for (auto& support : cert.packing) support.clear();
  auto check = verify_certificate(cert);
  EXPECT_FALSE(check);
  EXPECT_NE(check.rejection.find("profile"), std::string::npos) << check.rejection;
}

TEST(VerifyCertificate, RejectsBrokenPartition) {
  auto cert = certificate_m6();
  cert.satisfied.push_back(cert.violated.front());
  EXPECT_FALSE(verify_certificate(cert));
  auto missing = certificate_m6();
  missing.violated.erase(missing.violated.begin());
  missing.packing.erase(missing.packing.begin());
  EXPECT_FALSE(verify_certificate(missing));
  auto bad = certificate_m6();
  bad.satisfied.front() = Version{{1, 1, 2, 3}};
  EXPECT_FALSE(verify_certificate(bad));
}

TEST(VerifyCertificate, AgreesWithPlainCheckerUnderMutation) {
  std::mt19937_64 rng(43);
  const Certificate& base = fixture();
  for (int trial = 0; trial < 24; ++trial) {
    Certificate cert = base;
    switch (trial % 6) {
      case 0: {  // move a support version to another system
        std::size_t a = rng() % cert.packing.size(), b = rng() % cert.packing.size();
        if (!cert.packing[a].empty()) {
          cert.packing[b].push_back(cert.packing[a].back());
          cert.packing[a].pop_back();
        }
        break;
      }
      case 1: {  // duplicate a support index
        std::size_t a = rng() % cert.packing.size(), b = rng() % cert.packing.size();
        if (!cert.packing[a].empty()) cert.packing[b].push_back(cert.packing[a].front());
        break;
      }
      case 2:  // strip one system
        cert.packing[rng() % cert.packing.size()].clear();
        break;
      case 3: {  // swap a satisfied and a violated version
        std::size_t t = rng() % cert.satisfied.size(), u = rng() % cert.violated.size();
        std::swap(cert.satisfied[t], cert.violated[u]);
        break;
      }
      case 4: {  // point at an unused satisfied version
        std::size_t a = rng() % cert.packing.size();
        if (!cert.packing[a].empty()) cert.packing[a].back() = rng() % cert.satisfied.size();
        break;
      }
      default:  // unchanged
        break;
    }
    auto ours = verify_certificate(cert);
    auto theirs = brute::verify(plain(cert));
    EXPECT_EQ(ours.bound, theirs) << "trial " << trial << ": " << ours.rejection;
  }
}

}  // namespace
}  // namespace iidsup
