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

// Command-line front end. Exit codes: 0 success, 1 verification rejection,
// 2 usage or input error, 3 budget exhaustion.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iidsup/certify.hpp"
#include "iidsup/core.hpp"
#include "iidsup/games.hpp"
#include "iidsup/io.hpp"
#include "iidsup/lower.hpp"
#include "iidsup/mfs.hpp"
#include "iidsup/oracle.hpp"
#include "iidsup/versions.hpp"

namespace iidsup::cli {

enum ExitCode : int { kOk = 0, kRejected = 1, kUsage = 2, kBudget = 3 };

inline constexpr const char* kBudgetEnv = "IIDSUP_BUDGET";
inline constexpr const char* kTimeBudgetEnv = "IIDSUP_TIME_BUDGET";

using io::Json;

namespace detail {

inline std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::vector<Rational> rational_list(const std::string& text, const std::string& flag) {
  std::vector<Rational> out;
  for (const auto& item : split(text)) {
    try {
      out.push_back(parse_rational(item));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(flag + ": " + e.what());
    }
  }
  return out;
}

inline std::uint64_t env_budget() {
  if (const char* v = std::getenv(kBudgetEnv)) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string(kBudgetEnv) + " is not a positive integer");
    }
  }
  return OracleOptions{}.budget;
}

inline double env_time_budget(double fallback) {
  if (const char* v = std::getenv(kTimeBudgetEnv)) {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string(kTimeBudgetEnv) + " is not a number of seconds");
    }
  }
  return fallback;
}

inline std::chrono::milliseconds seconds(double s) {
  return std::chrono::milliseconds(static_cast<long long>(std::llround(s * 1000)));
}

// Shared state for one invocation.
struct Context {
  std::ostream& out;
  std::ostream& err;
  int workers = 1;
  std::uint64_t budget = OracleOptions{}.budget;
  std::string out_path;

  OracleOptions oracle() const { return {budget, workers}; }

  void emit(const Json& doc) const {
    if (out_path.empty()) {
      out << doc.dump(2) << "\n";
      return;
    }
    write_file(out_path, doc);
  }

  static void write_file(const std::string& path, const Json& doc) {
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write " + path);
    f << doc.dump(2) << "\n";
  }
};

// Coefficients for "sum c_i X_i > 0". A positive sum (or --less) reads the
// vector as the reversed event sum c_i X_i < 0.
inline CoefficientVector coefficients(const std::string& text, bool less, std::ostream& err) {
  std::vector<long> c;
  for (const auto& item : split(text)) {
    try {
      std::size_t used = 0;
      c.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("--c: '" + item + "' is not an integer");
    }
  }
  long sum = 0;
  for (long v : c) sum += v;
  if (less || sum > 0) {
    if (!less)
      err << "note: coefficient sum is positive; reading --c as the event sum c_i X_i < 0\n";
    for (auto& v : c) v = -v;
  }
  return CoefficientVector(std::move(c));
}

struct DistributionFlags {
  std::string dist_path, atoms, weights, values;

  void attach(CLI::App* app) {
    app->add_option("--dist", dist_path, "distribution JSON file");
    app->add_option("--atoms", atoms, "comma-separated atoms");
    app->add_option("--weights", weights, "comma-separated weights (with --atoms)");
    app->add_option("--values", values, "comma-separated faces of a uniform die");
  }

  bool given() const { return !dist_path.empty() || !atoms.empty() || !values.empty(); }

  DiscreteDistribution get() const {
    if (!dist_path.empty()) return io::distribution_document_from(io::read_file(dist_path));
    if (!atoms.empty()) {
      auto a = rational_list(atoms, "--atoms");
      auto w = rational_list(weights, "--weights");
      return DiscreteDistribution(std::move(a), std::move(w));
    }
    if (!values.empty()) return DiscreteDistribution::uniform(rational_list(values, "--values"));
    throw InvalidArgument("give a distribution with --dist, --atoms/--weights or --values");
  }
};

inline Json rational_row(const Rational& r) {
  return Json{{"exact", to_string(r)}, {"decimal", r.get_d()}};
}

// Reference table: recomputed from scratch and compared with the stored
// expectations.
struct ReportRow {
  std::string id;
  std::string expected;   // exact rational, or decimal with tolerance
  double tolerance = -1;  // negative: exact comparison
  std::string relation = "==";  // "==" or ">="
  std::function<Rational()> compute;
};

inline std::vector<ReportRow> report_rows(const OracleOptions& oracle,
                                          const std::string& cert_path) {
  const CoefficientVector c4({-1, -1, -1, 2});
  const DiscreteDistribution mu({0, 5, 9}, {Rational(1, 2), Rational(1, 6), Rational(1, 3)});
  auto powers = [](int m) {
    std::vector<Rational> v;
    for (int i = 0; i < m; ++i) v.push_back(Rational(Integer(1) << i));
    return v;
  };
  std::vector<ReportRow> rows{
      {"dice_uniform_1_2_4", "13/27", -1, "==",
       [=] { return dice_game(DiscreteDistribution::uniform(powers(3)), oracle); }},
      {"dice_uniform_1_2_4_8", "17/32", -1, "==",
       [=] { return dice_game(DiscreteDistribution::uniform(powers(4)), oracle); }},
      {"card_powers_m3_to_m8_min", "2/3", -1, "==",
       [=] {
         Rational lowest = 1;
         for (int m = 3; m <= 8; ++m) lowest = std::min(lowest, card_game(powers(m), oracle));
         return lowest;
       }},
      {"two_sided_value", "0.3849001794597505", 1e-9, "==",
       [] { return two_sided_optimal().value; }},
      {"two_sided_argmax", "0.4226497308103742", 1e-9, "==",
       [] { return two_sided_optimal().p; }},
      {"prob_strict_0_5_9", "26/81", -1, "==", [=] { return prob_strict(c4, mu, oracle); }},
      {"prob_equal_0_5_9", "1/8", -1, "==", [=] { return prob_equal(c4, mu, oracle); }},
      {"boost_ratio_0_5_9", "208/567", -1, "==",
       [=] { return boost_ratio(c4, mu, oracle).ratio; }},
      {"bernoulli_boost_ratio", "0.343", 1e-3, "==",
       [=] { return bernoulli_optimum(c4).report.ratio; }},
      {"bernoulli_argmax", "0.404", 1e-3, "==", [=] { return bernoulli_optimum(c4).p; }},
      {"ascent_0_9_13_15_16", "0.381", 2e-3, "==",
       [=] { return ascend_weights(c4, {0, 9, 13, 15, 16}, 2000, 0, oracle).report.ratio; }},
      {"dyadic_weighted_61", "0.398", 2e-3, "==",
       [=] {
         return boost_ratio(c4, family_dyadic_weighted(61, parse_rational("0.0546388")), oracle)
             .ratio;
       }},
      {"dyadic_3_lower", "4/15", -1, ">=",
       [=] { return boost_ratio(c4, family_dyadic(3), oracle).ratio; }},
      {"dyadic_5_lower", "8/25", -1, ">=",
       [=] { return boost_ratio(c4, family_dyadic(5), oracle).ratio; }},
      {"dyadic_8_lower", "7/20", -1, ">=",
       [=] { return boost_ratio(c4, family_dyadic(8), oracle).ratio; }},
      {"pruned_versions_m6", "30", -1, "==",
       [=] { return Rational(Integer(static_cast<unsigned long>(pruned_versions(c4, 6).pruned().size()))); }},
      {"pruned_versions_m15", "2730", -1, "==",
       [=] { return Rational(Integer(static_cast<unsigned long>(pruned_versions(c4, 15).pruned().size()))); }},
      {"mfs_bound_m4", "1/2", -1, "==", [=] { return *solve_mfs(c4, 4).bound; }},
      {"mfs_bound_m6", "7/15", -1, "==", [=] { return *solve_mfs(c4, 6).bound; }},
  };
  if (!cert_path.empty())
    rows.push_back({"certificate_m15_bound", "2304/5460", -1, "==", [cert_path] {
                      auto check = verify_certificate(io::certificate_from(io::read_file(cert_path)));
                      if (!check) throw InvalidArgument("certificate rejected: " + check.rejection);
                      return *check.bound;
                    }});
  return rows;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Exact tools for sup P[sum c_i X_i > 0] over iid nonnegative X_i", "iidsup"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Context ctx{out, err, 1, OracleOptions{}.budget, {}};
  app.add_option("--workers", ctx.workers, "worker threads for enumeration and simulation")
      ->check(CLI::PositiveNumber);
  std::optional<std::uint64_t> budget_flag;
  app.add_option("--budget", budget_flag,
                 std::string("oracle tuple budget (default from ") + kBudgetEnv + ")");
  app.add_option("--out", ctx.out_path, "write JSON here instead of standard output");

  std::string c_text;
  bool less = false;
  auto add_c = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--c", c_text, "integer coefficients, e.g. 1,1,-2");
    if (required) opt->required();
    sub->add_flag("--less", less, "read --c as the event sum c_i X_i < 0");
  };
  auto coeffs = [&] { return detail::coefficients(c_text, less, err); };
  double time_budget = 0;
  auto add_time = [&](CLI::App* sub, double fallback) {
    time_budget = fallback;
    sub->add_option("--time-budget", time_budget,
                    std::string("seconds (default from ") + kTimeBudgetEnv + ")");
  };
  std::function<int()> action;

  // versions
  int m = 0;
  bool show_all = false;
  auto* versions = app.add_subcommand("versions", "enumerate and prune versions");
  add_c(versions);
  versions->add_option("--m", m, "number of variables")->required();
  versions->add_flag("--all", show_all, "also list unpruned versions");
  versions->callback([&] {
    action = [&] {
      auto doc = io::to_json(pruned_versions(coeffs(), m));
      if (!show_all) doc.erase("all");
      ctx.emit(doc);
      return kOk;
    };
  });

  // prob
  detail::DistributionFlags dist;
  bool without_replacement = false;
  auto* prob = app.add_subcommand("prob", "exact event probabilities");
  add_c(prob);
  dist.attach(prob);
  prob->add_flag("--without-replacement", without_replacement,
                 "draw distinct --values without replacement");
  prob->callback([&] {
    action = [&] {
      auto c = coeffs();
      Json body{{"c", io::to_json(c)}};
      if (without_replacement) {
        if (dist.values.empty()) throw InvalidArgument("--without-replacement needs --values");
        auto values = detail::rational_list(dist.values, "--values");
        body["values"] = io::to_json(values);
        body["strict"] = io::to_json(prob_strict_without_replacement(c, values, ctx.oracle()));
      } else {
        auto mu = dist.get();
        auto e = event_probabilities(c, mu, ctx.oracle());
        body["distribution"] = io::to_json(mu);
        body["strict"] = io::to_json(e.strict);
        body["equal"] = io::to_json(e.equal);
      }
      ctx.emit(io::document("probabilities", body));
      return kOk;
    };
  });

  // upper-bound
  bool exact = false, heuristic = false, certify_flag = false;
  std::string cert_out;
  std::optional<std::uint64_t> order_seed;
  auto* upper = app.add_subcommand("upper-bound", "maximum feasible subsystem bound");
  add_c(upper);
  upper->add_option("--m", m, "number of variables")->required();
  upper->add_flag("--exact", exact, "prove optimality (default)");
  upper->add_flag("--heuristic", heuristic, "best witness only");
  upper->add_flag("--certify", certify_flag, "also search for a packing certificate");
  upper->add_option("--cert-out", cert_out, "certificate path (default cert_m<m>.json)");
  upper->add_option("--seed", order_seed, "shuffle the branching order");
  add_time(upper, 600);
  upper->callback([&] {
    action = [&] {
      if (exact && heuristic) throw InvalidArgument("--exact and --heuristic are exclusive");
      MfsOptions opts;
      opts.mode = heuristic ? MfsMode::kHeuristic : MfsMode::kExact;
      opts.time_budget = detail::seconds(detail::env_time_budget(time_budget));
      opts.order_seed = order_seed.value_or(0);
      MfsResult r = solve_mfs(coeffs(), m, opts);
      Json doc = io::to_json(r);
      int code = (!heuristic && !r.optimal) ? kBudget : kOk;
      if (certify_flag) {
        CertificateSearchOptions copts;
        copts.time_budget = opts.time_budget;
        auto found = search_certificate(r, copts);
        const std::string path = cert_out.empty() ? "cert_m" + std::to_string(m) + ".json" : cert_out;
        doc["certificate"] = Json{{"found", found.certificate.has_value()},
                                  {"packed", found.packed},
                                  {"needed", found.total}};
        if (found.certificate) {
          detail::Context::write_file(path, io::to_json(*found.certificate));
          doc["certificate"]["path"] = path;
          doc["certificate"]["bound"] = to_string(*verify_certificate(*found.certificate).bound);
        } else if (code == kOk) {
          code = kBudget;
        }
      }
      ctx.emit(doc);
      if (code == kBudget) err << "budget exhausted before the search completed\n";
      return code;
    };
  });

  // certify
  std::string result_path, witness_text;
  std::size_t max_system = CertificateSearchOptions{}.max_system_size;
  bool audit = false;
  auto* certify = app.add_subcommand("certify", "search a packing certificate");
  certify->add_option("--result", result_path, "mfs_result JSON");
  add_c(certify, false);
  certify->add_option("--witness", witness_text, "comma-separated x_1..x_m (with --c)");
  certify->add_option("--max-system-size", max_system, "supporting versions per system");
  certify->add_flag("--audit", audit, "print the systems as inequalities on stderr");
  add_time(certify, 600);
  certify->callback([&] {
    action = [&] {
      MfsResult r;
      if (!result_path.empty()) {
        r = io::mfs_result_from(io::read_file(result_path));
        if (auto why = check_mfs_result(r); !why.empty())
          throw InvalidArgument(result_path + ": " + why);
      } else if (!c_text.empty() && !witness_text.empty()) {
        r = evaluate_witness(coeffs(), Assignment(detail::rational_list(witness_text, "--witness")));
      } else {
        throw InvalidArgument("give --result, or --c with --witness");
      }
      CertificateSearchOptions opts;
      opts.max_system_size = max_system;
      opts.time_budget = detail::seconds(detail::env_time_budget(time_budget));
      auto found = search_certificate(r, opts);
      if (!found.certificate) {
        ctx.emit(io::document("certificate_search", Json{{"found", false},
                                                         {"packed", found.packed},
                                                         {"needed", found.total},
                                                         {"timed_out", found.timed_out}}));
        err << "no certificate: packed " << found.packed << " of " << found.total << "\n";
        return found.timed_out ? kBudget : kRejected;
      }
      if (audit) err << render_audit(*found.certificate);
      ctx.emit(io::to_json(*found.certificate));
      return kOk;
    };
  });

  // verify
  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "check a certificate or an MFS result");
  verify->add_option("--cert", cert_path, "certificate JSON");
  verify->add_option("--result", result_path, "mfs_result JSON");
  verify->callback([&] {
    action = [&] {
      if (cert_path.empty() == result_path.empty())
        throw InvalidArgument("give exactly one of --cert or --result");
      if (!cert_path.empty()) {
        Certificate cert = io::certificate_from(io::read_file(cert_path));
        auto check = verify_certificate(cert);
        Json body{{"valid", check.bound.has_value()}};
        if (check) {
          const Integer total = version_count(cert.c, cert.m);
          body["bound"] = to_string(*check.bound);
          body["fraction"] = std::to_string(cert.satisfied.size()) + "/" + total.get_str();
          body["decimal"] = check.bound->get_d();
        } else {
          body["rejection"] = check.rejection;
          err << "rejected: " << check.rejection << "\n";
        }
        ctx.emit(io::document("verification", body));
        return check ? kOk : kRejected;
      }
      MfsResult r = io::mfs_result_from(io::read_file(result_path));
      std::string why = check_mfs_result(r);
      Json body{{"valid", why.empty()},
                {"satisfied", r.satisfied.size()},
                {"fraction", std::to_string(r.satisfied.size()) + "/" + r.total_versions.get_str()},
                {"optimal_claimed", r.optimal}};
      if (!why.empty()) {
        body["rejection"] = why;
        err << "rejected: " << why << "\n";
      }
      ctx.emit(io::document("verification", body));
      return why.empty() ? kOk : kRejected;
    };
  });

  // lower-bound
  std::string family = "ascent", support_text, q_text;
  int big_n = 8, steps = 2000;
  std::optional<std::uint64_t> seed;
  auto* lower = app.add_subcommand("lower-bound", "constructive lower bounds");
  add_c(lower);
  lower->add_option("--family", family, "ascent | bernoulli | dyadic | dyadic-weighted")
      ->check(CLI::IsMember({"ascent", "bernoulli", "dyadic", "dyadic-weighted"}));
  lower->add_option("--support", support_text, "atoms for ascent");
  lower->add_option("--N", big_n, "dyadic family size");
  lower->add_option("--q", q_text, "extra-atom mass for dyadic-weighted");
  lower->add_option("--steps", steps, "ascent steps");
  lower->add_option("--seed", seed, "ascent start (0 = uniform)");
  lower->callback([&] {
    action = [&] {
      auto c = coeffs();
      Json doc;
      if (family == "ascent") {
        if (!seed) throw InvalidArgument("ascent is randomized; pass --seed");
        auto res = ascend_weights(c, detail::rational_list(support_text, "--support"), steps,
                                  *seed, ctx.oracle());
        doc = io::to_json(res.report);
        doc["accepted_steps"] = res.trace.size() - 1;
      } else if (family == "bernoulli") {
        auto res = bernoulli_optimum(c);
        doc = io::to_json(res.report);
        doc["p"] = io::to_json(res.report.p);
        doc["mass_at_one"] = io::to_json(res.p);
      } else if (family == "dyadic") {
        doc = io::to_json(boost_ratio(c, family_dyadic(big_n), ctx.oracle()));
      } else {
        doc = io::to_json(
            boost_ratio(c, family_dyadic_weighted(big_n, parse_rational(q_text)), ctx.oracle()));
      }
      doc["c"] = io::to_json(c);
      ctx.emit(doc);
      return kOk;
    };
  });

  // boost
  int k = 1;
  std::string eta_text = "auto", boosted_out;
  auto* boost = app.add_subcommand("boost", "boost ratio and boosted distributions");
  add_c(boost);
  dist.attach(boost);
  boost->add_option("--k", k, "levels of the boosted law");
  boost->add_option("--eta", eta_text, "level scale, or auto");
  boost->add_option("--boosted-out", boosted_out, "write the boosted distribution here");
  boost->callback([&] {
    action = [&] {
      auto c = coeffs();
      auto mu = dist.get();
      BoostReport report = boost_ratio(c, mu, ctx.oracle());
      Json doc = io::to_json(report);
      doc["c"] = io::to_json(c);
      if (k > 1) {
        std::optional<Rational> eta;
        if (eta_text != "auto") eta = parse_rational(eta_text);
        Boosted b = build_boosted(c, mu, k, eta);
        if (b.eta_warning)
          err << "warning: eta " << to_string(b.eta) << " is not below "
              << to_string(eta_limit(c, b.distribution)) << "; the series bound may fail\n";
        Rational pk = prob_strict(c, b.distribution, ctx.oracle());
        Rational series = 0, qj = 1;
        for (int j = 0; j < k; ++j, qj *= report.q) series += report.p * qj;
        doc["boosted"] = Json{{"k", k},
                              {"eta", to_string(b.eta)},
                              {"eta_warning", b.eta_warning},
                              {"support_size", b.distribution.size()},
                              {"prob_strict", to_string(pk)},
                              {"series_bound", to_string(series)},
                              {"meets_series_bound", pk >= series}};
        if (!boosted_out.empty())
          detail::Context::write_file(boosted_out, io::distribution_document(b.distribution));
      }
      ctx.emit(doc);
      return kOk;
    };
  });

  // game
  std::string variant = "dice";
  std::uint64_t trials = 0;
  int resolution = 40;
  auto* game = app.add_subcommand("game", "beat-the-average calculators");
  game->add_option("--variant", variant, "card | dice | bring-your-own | two-sided | three-sided")
      ->check(CLI::IsMember({"card", "dice", "bring-your-own", "two-sided", "three-sided"}));
  dist.attach(game);
  game->add_option("--trials", trials, "Monte Carlo trials (needs --seed)");
  game->add_option("--seed", seed, "Monte Carlo seed");
  game->add_option("--resolution", resolution, "grid resolution for three-sided");
  game->callback([&] {
    action = [&] {
      Json body{{"variant", variant}};
      if (variant == "two-sided") {
        auto t = two_sided_optimal();
        body["p"] = detail::rational_row(t.p);
        body["value"] = detail::rational_row(t.value);
        ctx.emit(io::document("game", body));
        return kOk;
      }
      if (variant == "three-sided") {
        auto t = three_sided_grid(resolution);
        body["die"] = io::to_json(t.die);
        body["value"] = detail::rational_row(t.value);
        ctx.emit(io::document("game", body));
        return kOk;
      }
      DiscreteDistribution die;
      GameVariant kind = GameVariant::kDice;
      if (variant == "card") {
        if (dist.values.empty()) throw InvalidArgument("card game needs --values");
        auto values = detail::rational_list(dist.values, "--values");
        body["values"] = io::to_json(values);
        body["probability"] = detail::rational_row(card_game(values, ctx.oracle()));
        die = DiscreteDistribution::uniform(values);
        kind = GameVariant::kCard;
      } else {
        if (variant == "dice" && dist.values.empty()) throw InvalidArgument("dice game needs --values");
        die = dist.get();
        body["die"] = io::to_json(die);
        body["probability"] = detail::rational_row(dice_game(die, ctx.oracle()));
        bool uniform = std::all_of(die.weights().begin(), die.weights().end(),
                                   [&](const Rational& w) { return w == die.weight(0); });
        if (uniform) {
          auto d = dice_decomposition(die);
          body["decomposition"] = Json{{"e1", to_string(d.e1)}, {"e2", to_string(d.e2)},
                                       {"e3", to_string(d.e3)}, {"win", to_string(d.win)}};
        }
      }
      if (trials > 0) {
        if (!seed) throw InvalidArgument("Monte Carlo is randomized; pass --seed");
        auto mc = monte_carlo(kind, die, trials, *seed, ctx.workers);
        body["monte_carlo"] = Json{{"trials", mc.trials}, {"wins", mc.wins},
                                   {"estimate", mc.estimate}, {"interval", {mc.low, mc.high}},
                                   {"seed", *seed}};
      }
      ctx.emit(io::document("game", body));
      return kOk;
    };
  });

  // sweep-fair
  std::string grid_text;
  int lower_n = 8;
  auto* sweep = app.add_subcommand("sweep-fair", "bracket the fair threshold c*");
  sweep->add_option("--grid", grid_text, "comma-separated c* values in [2, 3]")->required();
  sweep->add_option("--m", m, "variables for the exact upper bound")->required();
  sweep->add_option("--N", lower_n, "dyadic family size for the lower bound");
  sweep->add_option("--steps", steps, "ascent steps for the lower bound");
  add_time(sweep, 600);
  sweep->callback([&] {
    action = [&] {
      Json rows = Json::array();
      std::optional<Rational> below, above;  // largest c* with upper < 1/2, smallest with lower > 1/2
      const Rational half(1, 2);
      int code = kOk;
      for (const auto& cs : detail::rational_list(grid_text, "--grid")) {
        if (cs < 2 || cs > 3) throw InvalidArgument("--grid: c* = " + to_string(cs) + " is outside [2, 3]");
        const long p = cs.get_num().get_si(), q = cs.get_den().get_si();
        CoefficientVector c({-q, -q, -q, p});
        MfsOptions opts;
        opts.time_budget = detail::seconds(detail::env_time_budget(time_budget));
        MfsResult ub = solve_mfs(c, m, opts);
        if (!ub.optimal) code = kBudget;
        Rational upper = ub.optimal ? *ub.bound : Rational(1);
        const DiscreteDistribution dyadic = family_dyadic(lower_n);
        BoostReport best = boost_ratio(c, dyadic, ctx.oracle());
        std::string source = "dyadic N=" + std::to_string(lower_n);
        auto consider = [&](const BoostReport& r, const std::string& name) {
          if (r.ratio > best.ratio) {
            best = r;
            source = name;
          }
        };
        consider(bernoulli_optimum(c).report, "bernoulli");
        std::vector<Rational> support(dyadic.atoms().begin(), dyadic.atoms().end());
        consider(ascend_weights(c, support, steps, 0, ctx.oracle()).report, "ascent on dyadic support");
        if (upper < half && (!below || cs > *below)) below = cs;
        if (best.ratio > half && (!above || cs < *above)) above = cs;
        rows.push_back(Json{{"c_star", to_string(cs)},
                            {"c", io::to_json(c)},
                            {"upper", to_string(upper)},
                            {"upper_optimal", ub.optimal},
                            {"lower", to_string(best.ratio)},
                            {"lower_decimal", best.ratio.get_d()},
                            {"lower_source", source},
                            {"half_inside", best.ratio <= half && half <= upper}});
      }
      Json bracket = Json{{"low", below ? Json(to_string(*below)) : Json(nullptr)},
                          {"high", above ? Json(to_string(*above)) : Json(nullptr)}};
      ctx.emit(io::document("fair_sweep", Json{{"m", m}, {"rows", rows}, {"c_star_bracket", bracket}}));
      return code;
    };
  });

  // report
  std::string report_cert;
  auto* report = app.add_subcommand("report", "recompute the reference values and diff them");
  report->add_option("--cert", report_cert, "also verify this m=15 certificate");
  report->callback([&] {
    action = [&] {
      Json rows = Json::array();
      bool all_ok = true;
      for (const auto& row : detail::report_rows(ctx.oracle(), report_cert)) {
        Rational got = row.compute();
        Rational want = parse_rational(row.expected);
        bool ok;
        if (row.tolerance >= 0) ok = std::abs(got.get_d() - want.get_d()) <= row.tolerance;
        else if (row.relation == ">=") ok = got >= want;
        else ok = got == want;
        all_ok = all_ok && ok;
        Json r{{"id", row.id}, {"expected", row.expected}, {"relation", row.relation},
               {"computed", to_string(got)}, {"computed_decimal", got.get_d()}, {"ok", ok}};
        if (row.tolerance >= 0) r["tolerance"] = row.tolerance;
        rows.push_back(r);
      }
      ctx.emit(io::document("report", Json{{"all_match", all_ok}, {"rows", rows}}));
      return all_ok ? kOk : kRejected;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    ctx.budget = budget_flag ? *budget_flag : detail::env_budget();
    return action ? action() : kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const io::SchemaError& e) {
    err << "malformed input at " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace iidsup::cli
