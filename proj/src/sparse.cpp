/*
 * Copyright 2026 The polads Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "polads/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace polads {

SparseVector SparseVector::FromPairs(std::size_t dim,
                                     std::vector<std::pair<ColumnId, double>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out(dim);
  std::size_t i = 0;
  while (i < pairs.size()) {
    const ColumnId col = pairs[i].first;
    double sum = 0.0;
    for (; i < pairs.size() && pairs[i].first == col; ++i) sum += pairs[i].second;
    if (sum != 0.0) out.PushBack(col, sum);
  }
  return out;
}

SparseVector SparseVector::FromDense(std::span<const double> dense) {
  SparseVector out(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) out.PushBack(static_cast<ColumnId>(i), dense[i]);
  }
  return out;
}

double SparseVector::Get(ColumnId col) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), col);
  if (it == indices_.end() || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - indices_.begin())];
}

double SparseVector::L2Norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

void SparseVector::Scale(double factor) {
  for (double& v : values_) v *= factor;
}

void SparseVector::PushBack(ColumnId col, double value) {
  assert(col < dim_);
  assert(indices_.empty() || indices_.back() < col);
  if (value == 0.0) return;
  indices_.push_back(col);
  values_.push_back(value);
}

SparseVector SparseVector::Concat(const SparseVector& other) const {
  SparseVector out(dim_ + other.dim_);
  out.indices_.reserve(nnz() + other.nnz());
  out.values_.reserve(nnz() + other.nnz());
  out.indices_ = indices_;
  out.values_ = values_;
  const auto offset = static_cast<ColumnId>(dim_);
  for (std::size_t i = 0; i < other.nnz(); ++i) {
    out.indices_.push_back(other.indices_[i] + offset);
    out.values_.push_back(other.values_[i]);
  }
  return out;
}

std::vector<double> SparseVector::ToDense() const {
  std::vector<double> dense(dim_, 0.0);
  for (std::size_t i = 0; i < indices_.size(); ++i) dense[indices_[i]] = values_[i];
  return dense;
}

}  // namespace polads
