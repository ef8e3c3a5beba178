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
#include "iidsup/lower.hpp"
#include "iidsup/mfs.hpp"
#include "support/brute_force.hpp"

namespace iidsup {
namespace {

using io::Json;

Rational q(long num, long den = 1) { return make_rational(num, den); }

const CoefficientVector kAverage4({-1, -1, -1, 2});

// Location prefix of a SchemaError message.
std::string location_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::SchemaError& e) {
    std::string what = e.what();
    return what.substr(0, what.find(':'));
  }
  return "<no error>";
}

TEST(Io, RationalEncoding) {
  EXPECT_EQ(io::to_json(q(6, 8)), Json("3/4"));
  EXPECT_EQ(io::to_json(q(-2)), Json("-2"));
  EXPECT_EQ(io::rational_from(Json("10/4"), "/x"), q(5, 2));
  EXPECT_EQ(io::rational_from(Json(7), "/x"), q(7));
  EXPECT_EQ(location_of([] { io::rational_from(Json(0.5), "/x"); }), "/x");
  EXPECT_EQ(location_of([] { io::rational_from(Json("1/0"), "/y"); }), "/y");
}

TEST(Io, DistributionRoundTrip) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    auto mu = brute::random_distribution(rng, 6, 30);
    auto text = io::distribution_document(mu).dump();
    EXPECT_EQ(io::distribution_document_from(io::parse_text(text, "mem")), mu);
  }
}

TEST(Io, MfsResultRoundTrip) {
  for (int m = 4; m <= 6; ++m) {
    auto r = solve_mfs(kAverage4, m);
    auto back = io::mfs_result_from(io::parse_text(io::to_json(r).dump(2), "mem"));
    EXPECT_EQ(check_mfs_result(back), "");
    EXPECT_EQ(back.bound, r.bound);
    EXPECT_EQ(back.witness, r.witness);
    EXPECT_EQ(back.satisfied, r.satisfied);
    EXPECT_EQ(back.violated, r.violated);
    EXPECT_EQ(back.optimal, r.optimal);
    EXPECT_EQ(io::to_json(back), io::to_json(r));
  }
}

TEST(Io, CertificateRoundTrip) {
  auto found = search_certificate(solve_mfs(kAverage4, 6));
  ASSERT_TRUE(found.certificate);
  const auto& cert = *found.certificate;
  auto j = io::to_json(cert);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_TRUE(j["packing"].is_object());
  auto back = io::certificate_from(io::parse_text(j.dump(), "mem"));
  EXPECT_EQ(back.packing, cert.packing);
  EXPECT_EQ(verify_certificate(back).bound, std::optional<Rational>(q(7, 15)));
  EXPECT_EQ(io::to_json(back), j);
}

TEST(Io, CertificatePackingAsArray) {
  auto found = search_certificate(solve_mfs(kAverage4, 6));
  ASSERT_TRUE(found.certificate);
  auto j = io::to_json(*found.certificate);
  Json packing = Json::array();
  for (const auto& support : found.certificate->packing) packing.push_back(support);
  j["packing"] = packing;
  EXPECT_EQ(io::certificate_from(j).packing, found.certificate->packing);
}

TEST(Io, BoostReportRoundTrip) {
  DiscreteDistribution mu({0, 5, 9}, {q(1, 2), q(1, 6), q(1, 3)});
  auto r = boost_ratio(kAverage4, mu);
  auto back = io::boost_report_from(io::parse_text(io::to_json(r).dump(), "mem"));
  EXPECT_EQ(back.ratio, q(208, 567));
  EXPECT_EQ(back.p, r.p);
  EXPECT_EQ(back.q, r.q);
  EXPECT_EQ(back.base, mu);
  EXPECT_EQ(boost_ratio(kAverage4, back.base).ratio, back.ratio);
}

TEST(Io, RejectsUnknownSchemaVersion) {
  auto j = io::distribution_document(DiscreteDistribution::point_mass(1));
  j["schema_version"] = 2;
  EXPECT_EQ(location_of([&] { io::distribution_document_from(j); }), "/schema_version");
  j.erase("schema_version");
  EXPECT_EQ(location_of([&] { io::distribution_document_from(j); }), "/");
  j["schema_version"] = "1";
  EXPECT_EQ(location_of([&] { io::distribution_document_from(j); }), "/schema_version");
}

TEST(Io, RejectsWrongKind) {
  auto j = io::distribution_document(DiscreteDistribution::point_mass(1));
  EXPECT_EQ(location_of([&] { io::certificate_from(j); }), "/kind");
}

TEST(Io, MalformedTextReportsPosition) {
  try {
    io::parse_text("{\"a\": [1, 2,, 3]}", "input.json");
    FAIL();
  } catch (const io::SchemaError& e) {
    std::string what = e.what();
    EXPECT_EQ(what.rfind("input.json: ", 0), 0u) << what;
    EXPECT_NE(what.find("column"), std::string::npos) << what;
  }
  EXPECT_EQ(location_of([] { io::read_file("/nonexistent/cert.json"); }), "/nonexistent/cert.json");
}

TEST(Io, FieldLocations) {
  auto found = search_certificate(solve_mfs(kAverage4, 6));
  auto j = io::to_json(*found.certificate);
  auto bad = j;
  bad["satisfied"][3][1] = "two";
  EXPECT_EQ(location_of([&] { io::certificate_from(bad); }), "/satisfied/3/1");
  bad = j;
  bad["packing"]["x"] = Json::array();
  EXPECT_EQ(location_of([&] { io::certificate_from(bad); }), "/packing/x");
  bad = j;
  bad["packing"]["0"].push_back(-1);
  EXPECT_EQ(location_of([&] { io::certificate_from(bad); }).rfind("/packing/0/", 0), 0u);
  bad = j;
  bad.erase("violated");
  EXPECT_EQ(location_of([&] { io::certificate_from(bad); }), "/");
  bad = j;
  bad["c"] = Json::array({1, 1});
  EXPECT_EQ(location_of([&] { io::certificate_from(bad); }), "/c");
  auto r = io::to_json(solve_mfs(kAverage4, 5));
  r["witness"]["x"][0] = "1/0";
  EXPECT_EQ(location_of([&] { io::mfs_result_from(r); }), "/witness/x/0");
  r = io::to_json(solve_mfs(kAverage4, 5));
  r["total_versions"] = "7";
  EXPECT_EQ(location_of([&] { io::mfs_result_from(r); }), "/total_versions");
}

TEST(Io, VersionSetDocument) {
  auto j = io::to_json(pruned_versions(kAverage4, 6));
  EXPECT_EQ(j["kind"], "version_set");
  EXPECT_EQ(j["total"], 60);
  EXPECT_EQ(j["pruned_count"], 30);
  EXPECT_EQ(j["pruned"][0], Json::array({1, 2, 3, 4}));
}

}  // namespace
}  // namespace iidsup
