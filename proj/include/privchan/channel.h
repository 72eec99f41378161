//
// Copyright 2026 The Privchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVCHAN_CHANNEL_H_
#define PRIVCHAN_CHANNEL_H_

#include <cstddef>
#include <vector>

#include "privchan/matrix.h"
#include "privchan/universe.h"

namespace privchan {

// A total query function f: X -> Y with Y = {0, ..., output_size - 1}.
class QueryTable {
 public:
  // Throws DimensionError if the table length differs from the universe
  // size, IndexError if an entry is outside [0, output_size), and
  // DomainError if output_size is zero.
  QueryTable(RecordUniverse universe, std::size_t output_size,
             std::vector<std::size_t> table);

  const RecordUniverse& universe() const { return universe_; }
  std::size_t output_size() const { return output_size_; }
  std::size_t operator()(std::size_t joint_index) const {
    return table_[joint_index];
  }
  const std::vector<std::size_t>& table() const { return table_; }

 private:
  RecordUniverse universe_;
  std::size_t output_size_;
  std::vector<std::size_t> table_;
};

// Per-column diagnostics of a candidate transition matrix.
struct ValidationReport {
  std::vector<double> column_sum_deviation;  // |sum - 1| per column
  double min_entry = 0.0;
  double max_deviation = 0.0;
  bool ok = false;
};

// Computes the report without throwing.
ValidationReport InspectColumns(const Matrix& kernel);

// Throws NonStochasticError naming the first offending column.
void CheckColumnStochastic(const Matrix& kernel);

// A privacy channel p(y|x): |Y| rows, one column per dataset in joint index
// order. Construction enforces column stochasticity.
class ChannelMatrix {
 public:
  ChannelMatrix(RecordUniverse universe, Matrix entries);

  const RecordUniverse& universe() const { return universe_; }
  std::size_t output_size() const { return entries_.rows(); }
  std::size_t datasets() const { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }
  double operator()(std::size_t y, std::size_t x) const {
    return entries_(y, x);
  }

 private:
  RecordUniverse universe_;
  Matrix entries_;
};

// Returns the report; throws NonStochasticError when the channel would not
// pass (only reachable for matrices built outside ChannelMatrix).
ValidationReport ValidateChannel(const ChannelMatrix& channel);

}  // namespace privchan

#endif  // PRIVCHAN_CHANNEL_H_
