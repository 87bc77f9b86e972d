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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace polads {

using ColumnId = std::uint32_t;

// Sparse row vector: strictly increasing column ids, no stored zeros.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dim) : dim_(dim) {}

  // Builds from unordered (column, value) pairs. Duplicate columns are summed
  // and entries that end up zero are dropped.
  static SparseVector FromPairs(std::size_t dim,
                                std::vector<std::pair<ColumnId, double>> pairs);

  // Builds from a dense row, dropping zeros.
  static SparseVector FromDense(std::span<const double> dense);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  std::span<const ColumnId> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }

  // Value at column `col`, 0 when not stored.
  double Get(ColumnId col) const;

  double L2Norm() const;
  void Scale(double factor);

  // Appends an entry; `col` must exceed every stored column and be < dim.
  void PushBack(ColumnId col, double value);

  // Concatenation [this | other] with other's columns shifted by dim().
  SparseVector Concat(const SparseVector& other) const;

  std::vector<double> ToDense() const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<ColumnId> indices_;
  std::vector<double> values_;
};

// Row-major collection of equally wide sparse rows.
struct SparseMatrix {
  std::size_t cols = 0;
  std::vector<SparseVector> rows;

  std::size_t size() const { return rows.size(); }
};

}  // namespace polads
