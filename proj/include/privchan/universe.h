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

#ifndef PRIVCHAN_UNIVERSE_H_
#define PRIVCHAN_UNIVERSE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace privchan {

// The dataset space X = X_1 x ... x X_n, one finite alphabet per individual.
//
// Datasets are addressed by a joint index in [0, size()) using mixed-radix
// encoding with the first coordinate varying fastest. For sizes (3, 2) the
// joint order is (0,0), (1,0), (2,0), (0,1), (1,1), (2,1).
class RecordUniverse {
 public:
  // Throws DomainError if `sizes` is empty, has a zero entry, or the joint
  // size overflows std::size_t.
  explicit RecordUniverse(std::vector<std::size_t> sizes);

  std::size_t individuals() const { return sizes_.size(); }
  std::size_t size() const { return total_; }
  std::size_t size_of(std::size_t individual) const;
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  // Size of the complement space X_(i) = prod_{k != i} |X_k|.
  std::size_t complement_size(std::size_t individual) const;

  std::size_t Encode(std::span<const std::size_t> coords) const;
  std::vector<std::size_t> Decode(std::size_t index) const;

  // Joint index of the dataset whose i-th record is `value` and whose other
  // records are given by `complement`, itself a mixed-radix index over the
  // remaining coordinates in their original order (first fastest).
  std::size_t Combine(std::size_t individual, std::size_t value,
                      std::size_t complement) const;

  // Stride of coordinate i in the joint index.
  std::size_t stride(std::size_t individual) const;

  friend bool operator==(const RecordUniverse&,
                         const RecordUniverse&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

// Free-function spellings of the index codec.
inline std::size_t EncodeIndex(const RecordUniverse& universe,
                               std::span<const std::size_t> coords) {
  return universe.Encode(coords);
}
inline std::vector<std::size_t> DecodeIndex(const RecordUniverse& universe,
                                            std::size_t index) {
  return universe.Decode(index);
}

}  // namespace privchan

#endif  // PRIVCHAN_UNIVERSE_H_
