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

// JSON documents. Every file is an object with "schema_version" and "kind";
// rationals are strings ("p/q", integers or exact decimals), versions are
// arrays of 1-based slots.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iidsup/certify.hpp"
#include "iidsup/core.hpp"
#include "iidsup/lower.hpp"
#include "iidsup/mfs.hpp"
#include "iidsup/versions.hpp"

namespace iidsup::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Malformed or mistyped input; what() starts with the location.
class SchemaError : public InvalidArgument {
 public:
  SchemaError(const std::string& where, const std::string& what)
      : InvalidArgument((where.empty() ? std::string("/") : where) + ": " + what) {}
};

inline Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    auto pos = msg.find("parse error");
    throw SchemaError(source, pos == std::string::npos ? msg : msg.substr(pos));
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

namespace detail {

inline const Json& member(const Json& j, const char* key, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at, std::string("missing field \"") + key + "\"");
  return *it;
}

inline const Json& array_at(const Json& j, const std::string& at) {
  if (!j.is_array()) throw SchemaError(at, "expected an array");
  return j;
}

inline long integer_at(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) throw SchemaError(at, "expected an integer");
  return j.get<long>();
}

inline bool bool_at(const Json& j, const std::string& at) {
  if (!j.is_boolean()) throw SchemaError(at, "expected true or false");
  return j.get<bool>();
}

}  // namespace detail

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from(const Json& j, const std::string& at) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (!j.is_string()) throw SchemaError(at, "expected a rational string such as \"3/4\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw SchemaError(at, e.what());
  }
}

inline std::vector<Rational> rationals_from(const Json& j, const std::string& at) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < detail::array_at(j, at).size(); ++i)
    out.push_back(rational_from(j[i], at + "/" + std::to_string(i)));
  return out;
}

inline Json to_json(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

inline Json to_json(const CoefficientVector& c) {
  Json out = Json::array();
  for (long v : c.values()) out.push_back(v);
  return out;
}

inline CoefficientVector coefficients_from(const Json& j, const std::string& at) {
  std::vector<long> c;
  for (std::size_t i = 0; i < detail::array_at(j, at).size(); ++i)
    c.push_back(detail::integer_at(j[i], at + "/" + std::to_string(i)));
  try {
    return CoefficientVector(std::move(c));
  } catch (const InvalidArgument& e) {
    throw SchemaError(at, e.what());
  }
}

inline Json to_json(const DiscreteDistribution& mu) {
  return Json{{"atoms", to_json(mu.atoms())}, {"weights", to_json(mu.weights())}};
}

inline DiscreteDistribution distribution_from(const Json& j, const std::string& at) {
  auto atoms = rationals_from(detail::member(j, "atoms", at), at + "/atoms");
  auto weights = rationals_from(detail::member(j, "weights", at), at + "/weights");
  try {
    return DiscreteDistribution(std::move(atoms), std::move(weights));
  } catch (const InvalidArgument& e) {
    throw SchemaError(at, e.what());
  }
}

inline Json to_json(const Assignment& a) {
  return Json{{"m", a.m()}, {"x", to_json(a.values())}};
}

inline Assignment assignment_from(const Json& j, const std::string& at) {
  long m = detail::integer_at(detail::member(j, "m", at), at + "/m");
  auto x = rationals_from(detail::member(j, "x", at), at + "/x");
  if (static_cast<long>(x.size()) != m)
    throw SchemaError(at + "/x", "has " + std::to_string(x.size()) + " entries, m = " +
                                     std::to_string(m));
  try {
    return Assignment(std::move(x));
  } catch (const InvalidArgument& e) {
    throw SchemaError(at, e.what());
  }
}

inline Json to_json(const Version& v) { return Json(v.slots); }

inline Json to_json(std::span<const Version> vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

inline std::vector<Version> versions_from(const Json& j, const std::string& at) {
  std::vector<Version> out;
  for (std::size_t i = 0; i < detail::array_at(j, at).size(); ++i) {
    const std::string here = at + "/" + std::to_string(i);
    Version v;
    for (std::size_t r = 0; r < detail::array_at(j[i], here).size(); ++r)
      v.slots.push_back(
          static_cast<int>(detail::integer_at(j[i][r], here + "/" + std::to_string(r))));
    out.push_back(std::move(v));
  }
  return out;
}

// Wraps a body with the header fields.
inline Json document(const std::string& kind, const Json& body) {
  Json out{{"schema_version", kSchemaVersion}, {"kind", kind}};
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

inline void check_header(const Json& j, const std::string& kind) {
  long version = detail::integer_at(detail::member(j, "schema_version", ""), "/schema_version");
  if (version != kSchemaVersion)
    throw SchemaError("/schema_version", "unsupported schema version " +
                                             std::to_string(version) + " (this build reads " +
                                             std::to_string(kSchemaVersion) + ")");
  const Json& k = detail::member(j, "kind", "");
  if (!k.is_string() || k.get<std::string>() != kind)
    throw SchemaError("/kind", "expected \"" + kind + "\", found " + k.dump());
}

inline Json to_json(const VersionSet& vs) {
  return document("version_set", Json{{"c", to_json(vs.coefficients())},
                                      {"m", vs.m()},
                                      {"total", vs.all().size()},
                                      {"pruned_count", vs.pruned().size()},
                                      {"all", to_json(std::span(vs.all()))},
                                      {"pruned", to_json(std::span(vs.pruned()))}});
}

inline Json to_json(const MfsResult& r) {
  return document("mfs_result",
                  Json{{"c", to_json(r.c)},
                       {"m", r.m},
                       {"witness", to_json(r.witness)},
                       {"optimal", r.optimal},
                       {"bound", r.bound ? Json(to_string(*r.bound)) : Json(nullptr)},
                       {"total_versions", r.total_versions.get_str()},
                       {"satisfied", to_json(std::span(r.satisfied))},
                       {"violated", to_json(std::span(r.violated))}});
}

inline MfsResult mfs_result_from(const Json& j) {
  check_header(j, "mfs_result");
  MfsResult r;
  r.c = coefficients_from(detail::member(j, "c", ""), "/c");
  r.m = static_cast<int>(detail::integer_at(detail::member(j, "m", ""), "/m"));
  r.witness = assignment_from(detail::member(j, "witness", ""), "/witness");
  r.optimal = detail::bool_at(detail::member(j, "optimal", ""), "/optimal");
  const Json& bound = detail::member(j, "bound", "");
  if (!bound.is_null()) r.bound = rational_from(bound, "/bound");
  r.total_versions = version_count(r.c, r.m);
  if (auto it = j.find("total_versions"); it != j.end())
    if (rational_from(*it, "/total_versions") != Rational(r.total_versions))
      throw SchemaError("/total_versions", "does not match c and m");
  r.satisfied = versions_from(detail::member(j, "satisfied", ""), "/satisfied");
  r.violated = versions_from(detail::member(j, "violated", ""), "/violated");
  return r;
}

inline Json to_json(const Certificate& cert) {
  Json packing = Json::object();
  for (std::size_t u = 0; u < cert.packing.size(); ++u)
    packing[std::to_string(u)] = cert.packing[u];
  return document("certificate",
                  Json{{"c", to_json(cert.c)},
                       {"m", cert.m},
                       {"satisfied_count", cert.satisfied.size()},
                       {"total_versions", version_count(cert.c, cert.m).get_str()},
                       {"satisfied", to_json(std::span(cert.satisfied))},
                       {"violated", to_json(std::span(cert.violated))},
                       {"packing", packing}});
}

inline Certificate certificate_from(const Json& j) {
  check_header(j, "certificate");
  Certificate cert;
  cert.c = coefficients_from(detail::member(j, "c", ""), "/c");
  cert.m = static_cast<int>(detail::integer_at(detail::member(j, "m", ""), "/m"));
  cert.satisfied = versions_from(detail::member(j, "satisfied", ""), "/satisfied");
  cert.violated = versions_from(detail::member(j, "violated", ""), "/violated");
  // An object keyed by violated index; a plain array in violated order is
  // also accepted.
  const Json& packing = detail::member(j, "packing", "");
  if (!packing.is_object() && !packing.is_array())
    throw SchemaError("/packing", "expected an object keyed by violated index");
  auto support_from = [](const Json& list, const std::string& here) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < detail::array_at(list, here).size(); ++i) {
      long t = detail::integer_at(list[i], here + "/" + std::to_string(i));
      if (t < 0) throw SchemaError(here + "/" + std::to_string(i), "negative index");
      support.push_back(static_cast<std::size_t>(t));
    }
    return support;
  };
  if (packing.is_array()) {
    for (std::size_t u = 0; u < packing.size(); ++u)
      cert.packing.push_back(support_from(packing[u], "/packing/" + std::to_string(u)));
    return cert;
  }
  std::vector<std::optional<std::vector<std::size_t>>> slots(packing.size());
  for (auto it = packing.begin(); it != packing.end(); ++it) {
    const std::string here = "/packing/" + it.key();
    std::size_t used = 0;
    unsigned long u = 0;
    try {
      u = std::stoul(it.key(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != it.key().size() || it.key()[0] == '-')
      throw SchemaError(here, "key is not a violated index");
    if (u >= slots.size())
      throw SchemaError(here, "violated index out of range (" + std::to_string(slots.size()) +
                                  " systems listed)");
    if (slots[u]) throw SchemaError(here, "violated index listed twice");
    slots[u] = support_from(it.value(), here);
  }
  for (auto& support : slots) cert.packing.push_back(std::move(*support));
  return cert;
}

inline Json to_json(const BoostReport& r) {
  return document("boost_report", Json{{"p", to_json(r.p)},
                                       {"q", to_json(r.q)},
                                       {"ratio", to_json(r.ratio)},
                                       {"ratio_decimal", r.ratio.get_d()},
                                       {"base", to_json(r.base)}});
}

inline BoostReport boost_report_from(const Json& j) {
  check_header(j, "boost_report");
  BoostReport r;
  r.p = rational_from(detail::member(j, "p", ""), "/p");
  r.q = rational_from(detail::member(j, "q", ""), "/q");
  r.ratio = rational_from(detail::member(j, "ratio", ""), "/ratio");
  r.base = distribution_from(detail::member(j, "base", ""), "/base");
  return r;
}

inline Json distribution_document(const DiscreteDistribution& mu) {
  return document("distribution", to_json(mu));
}

inline DiscreteDistribution distribution_document_from(const Json& j) {
  check_header(j, "distribution");
  return distribution_from(j, "");
}

}  // namespace iidsup::io
