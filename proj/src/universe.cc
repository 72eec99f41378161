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

#include "privchan/universe.h"

#include <limits>
#include <string>

#include "privchan/errors.h"

namespace privchan {

RecordUniverse::RecordUniverse(std::vector<std::size_t> sizes)
    : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw DomainError("universe needs at least one record");
  strides_.reserve(sizes_.size());
  for (std::size_t s : sizes_) {
    if (s == 0) throw DomainError("record alphabet sizes must be positive");
    if (total_ > std::numeric_limits<std::size_t>::max() / s) {
      throw DomainError("joint universe size overflows the index range");
    }
    strides_.push_back(total_);
    total_ *= s;
  }
}

std::size_t RecordUniverse::size_of(std::size_t individual) const {
  if (individual >= sizes_.size()) {
    throw IndexError("individual " + std::to_string(individual) +
                     " out of range");
  }
  return sizes_[individual];
}

std::size_t RecordUniverse::stride(std::size_t individual) const {
  size_of(individual);
  return strides_[individual];
}

std::size_t RecordUniverse::complement_size(std::size_t individual) const {
  return total_ / size_of(individual);
}

std::size_t RecordUniverse::Encode(std::span<const std::size_t> coords) const {
  if (coords.size() != sizes_.size()) {
    throw IndexError("expected " + std::to_string(sizes_.size()) +
                     " coordinates, got " + std::to_string(coords.size()));
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= sizes_[i]) {
      throw IndexError("coordinate " + std::to_string(i) + " = " +
                       std::to_string(coords[i]) + " out of range [0, " +
                       std::to_string(sizes_[i]) + ")");
    }
    index += coords[i] * strides_[i];
  }
  return index;
}

std::vector<std::size_t> RecordUniverse::Decode(std::size_t index) const {
  if (index >= total_) {
    throw IndexError("joint index " + std::to_string(index) + " out of range");
  }
  std::vector<std::size_t> coords(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    coords[i] = index % sizes_[i];
    index /= sizes_[i];
  }
  return coords;
}

std::size_t RecordUniverse::Combine(std::size_t individual, std::size_t value,
                                    std::size_t complement) const {
  if (value >= size_of(individual)) {
    throw IndexError("record value out of range");
  }
  if (complement >= complement_size(individual)) {
    throw IndexError("complement index out of range");
  }
  // Below the target coordinate the complement's radix matches the joint
  // radix; above it, every stride is scaled by |X_i|.
  const std::size_t low_span = strides_[individual];
  const std::size_t low = complement % low_span;
  const std::size_t high = complement / low_span;
  return low + value * low_span + high * low_span * sizes_[individual];
}

}  // namespace privchan
