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

// Exact-arithmetic value types shared by every other header: rationals,
// coefficient vectors, finitely supported distributions and ordered
// assignments.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iidsup {

using Rational = mpq_class;
using Integer = mpz_class;

// Precondition or input-format violation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact computation would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "p/q", an integer, or a decimal literal such as "-0.0546388" or
// "2e-5" into an exact rational. Decimal input is expanded exactly, never
// through a binary float.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw InvalidArgument("not a rational number: '" + std::string(text) +
                          "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string num(text.substr(0, slash));
    std::string den(text.substr(slash + 1));
    if (num.empty() || den.empty()) fail();
    Rational r;
    Integer n, d;
    if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) fail();
    if (d == 0) throw InvalidArgument("zero denominator in '" +
                                      std::string(text) + "'");
    r = Rational(n, d);
    r.canonicalize();
    return r;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') fail();
    ++pos;
    std::string exp_text(text.substr(pos));
    if (exp_text.empty()) fail();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != exp_text.size() || e > 4096 || e < -4096) fail();
    exponent += e;
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(
                                          exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(mantissa, scale)
                            : Rational(Integer(mantissa * scale));
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational make_rational(long num, long den = 1) {
  Rational r{Integer(num), Integer(den)};
  r.canonicalize();
  return r;
}

// Integer coefficients c_1..c_n of the event sum_i c_i X_i > 0 over
// nonnegative X_i. Requires n >= 2, sum c_i <= 0 and some c_i > 0.
class CoefficientVector {
 public:
  CoefficientVector() = default;

  explicit CoefficientVector(std::vector<long> c) : c_(std::move(c)) {
    if (c_.size() < 2)
      throw InvalidArgument("coefficient vector needs at least two entries");
    long sum = 0;
    bool positive = false;
    for (long v : c_) {
      sum += v;
      positive = positive || v > 0;
    }
    if (sum > 0)
      throw InvalidArgument(
          "coefficients sum to " + std::to_string(sum) +
          " > 0; the strict event then holds deterministically (use the "
          "reversed event instead)");
    if (!positive)
      throw InvalidArgument(
          "no positive coefficient; the strict event is impossible for "
          "nonnegative variables");
  }

  // The event sum_i d_i X_i < 0, i.e. coefficients -d.
  static CoefficientVector less_than(std::vector<long> d) {
    for (long& v : d) v = -v;
    return CoefficientVector(std::move(d));
  }

  std::size_t size() const { return c_.size(); }
  long operator[](std::size_t i) const { return c_[i]; }
  std::span<const long> values() const& { return c_; }
  std::span<const long> values() const&& = delete;
  long sum() const { return std::accumulate(c_.begin(), c_.end(), 0L); }
  long abs_sum() const {
    long s = 0;
    for (long v : c_) s += v < 0 ? -v : v;
    return s;
  }

  friend bool operator==(const CoefficientVector&,
                         const CoefficientVector&) = default;

 private:
  std::vector<long> c_;
};

// Finitely supported probability measure on the nonnegative rationals.
// Atoms are strictly increasing; weights are positive and sum to one.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  // Accepts atoms in any order; repeated atoms have their weights merged.
  DiscreteDistribution(std::vector<Rational> atoms,
                       std::vector<Rational> weights) {
    if (atoms.size() != weights.size())
      throw InvalidArgument("atoms and weights differ in length");
    if (atoms.empty()) throw InvalidArgument("distribution has no atoms");
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return atoms[a] < atoms[b];
    });
    Rational total = 0;
    for (std::size_t idx : order) {
      if (atoms[idx] < 0) throw InvalidArgument("negative atom " + to_string(atoms[idx]));
      if (weights[idx] <= 0)
        throw InvalidArgument("non-positive weight " + to_string(weights[idx]));
      total += weights[idx];
      if (!atoms_.empty() && atoms_.back() == atoms[idx]) {
        weights_.back() += weights[idx];
      } else {
        atoms_.push_back(atoms[idx]);
        weights_.push_back(weights[idx]);
      }
    }
    if (total != 1)
      throw InvalidArgument("weights sum to " + to_string(total) + ", not 1");
  }

  static DiscreteDistribution uniform(std::span<const Rational> values) {
    std::vector<Rational> atoms(values.begin(), values.end());
    std::vector<Rational> weights(
        atoms.size(),
        Rational(Integer(1), Integer(static_cast<unsigned long>(
                                 std::max<std::size_t>(atoms.size(), 1)))));
    return DiscreteDistribution(std::move(atoms), std::move(weights));
  }

  static DiscreteDistribution point_mass(const Rational& a) {
    return DiscreteDistribution({a}, {Rational(1)});
  }

  std::size_t size() const { return atoms_.size(); }
  std::span<const Rational> atoms() const& { return atoms_; }
  std::span<const Rational> atoms() const&& = delete;
  std::span<const Rational> weights() const& { return weights_; }
  std::span<const Rational> weights() const&& = delete;
  const Rational& atom(std::size_t i) const { return atoms_[i]; }
  const Rational& weight(std::size_t i) const { return weights_[i]; }

  // Same weights, every atom multiplied by `factor` > 0.
  DiscreteDistribution scaled(const Rational& factor) const {
    if (factor <= 0) throw InvalidArgument("scale factor must be positive");
    std::vector<Rational> atoms;
    atoms.reserve(atoms_.size());
    for (const auto& a : atoms_) atoms.push_back(a * factor);
    return DiscreteDistribution(std::move(atoms), weights_);
  }

  friend bool operator==(const DiscreteDistribution&,
                         const DiscreteDistribution&) = default;

 private:
  std::vector<Rational> atoms_;
  std::vector<Rational> weights_;
};

// Values x_1 <= ... <= x_m, all nonnegative.
class Assignment {
 public:
  Assignment() = default;

  explicit Assignment(std::vector<Rational> x) : x_(std::move(x)) {
    if (x_.empty()) throw InvalidArgument("assignment must have m >= 1");
    if (x_.front() < 0) throw InvalidArgument("assignment has a negative entry");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (x_[i] < x_[i - 1])
        throw InvalidArgument("assignment is not nondecreasing at index " +
                              std::to_string(i + 1));
  }

  std::size_t m() const { return x_.size(); }
  std::span<const Rational> values() const& { return x_; }
  std::span<const Rational> values() const&& = delete;
  // 1-based, matching version slots.
  const Rational& at(std::size_t index) const { return x_[index - 1]; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Rational> x_;
};

// Rescales so that x_m = 1; the all-zero assignment is a fixed point.
inline Assignment normalize(const Assignment& a) {
  const Rational& top = a.values().back();
  if (top == 0) return a;
  std::vector<Rational> x;
  x.reserve(a.m());
  for (const auto& v : a.values()) x.push_back(v / top);
  return Assignment(std::move(x));
}

}  // namespace iidsup
