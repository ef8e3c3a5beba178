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

// Dense exact-rational primal simplex for
//
//   maximize  obj . x   subject to  A x <= b,  x >= 0,  with b >= 0,
//
// so the slack basis is feasible and no phase one is needed. Bland's rule
// (smallest variable index) guarantees termination on degenerate problems.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "iidsup/core.hpp"

namespace iidsup::lp {

struct Solution {
  Rational value;
  std::vector<Rational> x;      // primal, one per column
  std::vector<Rational> duals;  // one per row, all >= 0
};

class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
          std::vector<Rational> obj)
      : rows_(a.size()), cols_(obj.size()), t_(std::move(a)), rhs_(std::move(b)),
        z_(std::move(obj)) {
    if (rhs_.size() != rows_) throw InvalidArgument("lp: rhs size mismatch");
    for (const auto& row : t_)
      if (row.size() != cols_) throw InvalidArgument("lp: ragged constraint matrix");
    for (const auto& v : rhs_)
      if (v < 0) throw InvalidArgument("lp: negative right-hand side");
    nonbasic_.resize(cols_);
    basic_.resize(rows_);
    for (std::size_t j = 0; j < cols_; ++j) nonbasic_[j] = j;
    for (std::size_t i = 0; i < rows_; ++i) basic_[i] = cols_ + i;
  }

  // Returns nullopt when the objective is unbounded.
  std::optional<Solution> solve() {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(z_[j]) > 0 && (enter == cols_ || nonbasic_[j] < nonbasic_[enter]))
          enter = j;
      if (enter == cols_) break;

      std::size_t leave = rows_;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        Rational ratio = rhs_[i] / t_[i][enter];
        if (leave == rows_ || ratio < best_ratio ||
            (ratio == best_ratio && basic_[i] < basic_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return std::nullopt;
      pivot(leave, enter);
    }

    Solution s;
    s.value = value_;
    s.x.assign(cols_, 0);
    s.duals.assign(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basic_[i] < cols_) s.x[basic_[i]] = rhs_[i];
    for (std::size_t j = 0; j < cols_; ++j)
      if (nonbasic_[j] >= cols_) s.duals[nonbasic_[j] - cols_] = -z_[j];
    return s;
  }

 private:
  void pivot(std::size_t r, std::size_t e) {
    const Rational inv = 1 / t_[r][e];
    for (std::size_t j = 0; j < cols_; ++j)
      if (j != e) t_[r][j] *= inv;
    rhs_[r] *= inv;
    t_[r][e] = inv;

    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || sgn(t_[i][e]) == 0) continue;
      const Rational f = t_[i][e];
      for (std::size_t j = 0; j < cols_; ++j)
        if (j != e && sgn(t_[r][j]) != 0) t_[i][j] -= f * t_[r][j];
      rhs_[i] -= f * rhs_[r];
      t_[i][e] = -f * inv;
    }
    if (sgn(z_[e]) != 0) {
      const Rational f = z_[e];
      for (std::size_t j = 0; j < cols_; ++j)
        if (j != e && sgn(t_[r][j]) != 0) z_[j] -= f * t_[r][j];
      value_ += f * rhs_[r];
      z_[e] = -f * inv;
    }
    std::swap(basic_[r], nonbasic_[e]);
  }

  std::size_t rows_, cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::vector<Rational> z_;
  Rational value_ = 0;
  std::vector<std::size_t> nonbasic_;
  std::vector<std::size_t> basic_;
};

}  // namespace iidsup::lp
