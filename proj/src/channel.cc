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

#include "privchan/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "privchan/distribution.h"
#include "privchan/errors.h"

namespace privchan {

QueryTable::QueryTable(RecordUniverse universe, std::size_t output_size,
                       std::vector<std::size_t> table)
    : universe_(std::move(universe)),
      output_size_(output_size),
      table_(std::move(table)) {
  if (output_size_ == 0) throw DomainError("query output size must be >= 1");
  if (table_.size() != universe_.size()) {
    throw DimensionError("query table has " + std::to_string(table_.size()) +
                         " entries, universe has " +
                         std::to_string(universe_.size()) + " datasets");
  }
  for (std::size_t x = 0; x < table_.size(); ++x) {
    if (table_[x] >= output_size_) {
      throw IndexError("query table entry " + std::to_string(x) +
                       " is outside the output alphabet");
    }
  }
}

ValidationReport InspectColumns(const Matrix& kernel) {
  ValidationReport report;
  report.min_entry = std::numeric_limits<double>::infinity();
  report.column_sum_deviation.resize(kernel.cols());
  bool finite = kernel.rows() > 0 && kernel.cols() > 0;
  for (std::size_t c = 0; c < kernel.cols(); ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < kernel.rows(); ++r) {
      const double v = kernel(r, c);
      if (!std::isfinite(v)) finite = false;
      report.min_entry = std::min(report.min_entry, v);
      total += v;
    }
    report.column_sum_deviation[c] = std::abs(total - 1.0);
    report.max_deviation =
        std::max(report.max_deviation, report.column_sum_deviation[c]);
  }
  report.ok = finite && report.min_entry >= 0.0 &&
              report.max_deviation <= kStochasticTolerance;
  return report;
}

void CheckColumnStochastic(const Matrix& kernel) {
  if (kernel.rows() == 0 || kernel.cols() == 0) {
    throw NonStochasticError("transition matrix is empty");
  }
  for (std::size_t c = 0; c < kernel.cols(); ++c) {
    CheckStochastic(kernel.column(c), "column " + std::to_string(c));
  }
}

ChannelMatrix::ChannelMatrix(RecordUniverse universe, Matrix entries)
    : universe_(std::move(universe)), entries_(std::move(entries)) {
  if (entries_.cols() != universe_.size()) {
    throw DimensionError("channel has " + std::to_string(entries_.cols()) +
                         " columns, universe has " +
                         std::to_string(universe_.size()) + " datasets");
  }
  CheckColumnStochastic(entries_);
}

ValidationReport ValidateChannel(const ChannelMatrix& channel) {
  CheckColumnStochastic(channel.entries());
  return InspectColumns(channel.entries());
}

}  // namespace privchan
