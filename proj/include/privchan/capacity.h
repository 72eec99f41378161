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

#ifndef PRIVCHAN_CAPACITY_H_
#define PRIVCHAN_CAPACITY_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "privchan/channel.h"
#include "privchan/distribution.h"
#include "privchan/errors.h"
#include "privchan/matrix.h"

namespace privchan {

inline constexpr double kDefaultCapacityTolerance = 1e-10;
inline constexpr int kDefaultMaxIterations = 100000;
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// A degenerate conditional p(x_(i) | x_i): for each value j of record i,
// choices[j] is the complement index (see RecordUniverse::Combine) that the
// adversary pins the other records to.
struct SelectionMap {
  std::size_t individual = 0;
  std::vector<std::size_t> choices;

  friend bool operator==(const SelectionMap&, const SelectionMap&) = default;
};

// p(y | x_i): |Y| rows and |X_i| columns, column stochastic.
class ReducedChannel {
 public:
  explicit ReducedChannel(Matrix kernel);

  const Matrix& kernel() const { return kernel_; }
  std::size_t input_size() const { return kernel_.cols(); }
  std::size_t output_size() const { return kernel_.rows(); }

 private:
  Matrix kernel_;
};

struct CapacityResult {
  double value = 0.0;  // nats; a lower bound on the capacity
  Distribution optimizer;
  double gap = 0.0;  // upper bound minus `value` at termination
  int iterations = 0;

  double value_in(InfoUnit unit) const { return FromNats(value, unit); }
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, CapacityResult partial)
      : Error(message), partial_(std::move(partial)) {}
  const CapacityResult& partial() const { return partial_; }

 private:
  CapacityResult partial_;
};

struct SolverOptions {
  double tol = kDefaultCapacityTolerance;  // nats
  int max_iter = kDefaultMaxIterations;
};

// Channel capacity max_p I(p, kernel) by Blahut-Arimoto from the uniform
// input. Stops once max_j D(W_j || q) - log sum_j p_j exp(D(W_j || q)) is at
// most `tol`; the capacity then lies in [value, value + gap]. Throws
// ConvergenceError (carrying the last iterate) after `max_iter` iterations.
CapacityResult BlahutArimoto(const Matrix& kernel,
                             const SolverOptions& options = {});
CapacityResult BlahutArimoto(const ReducedChannel& kernel,
                             const SolverOptions& options = {});

// Column j of the result is the channel column of the dataset with
// x_i = j and x_(i) = selection.choices[j].
ReducedChannel ReduceChannel(const ChannelMatrix& channel,
                             const SelectionMap& selection);

// |X_(i)|^|X_i|, saturating at UINT64_MAX.
std::uint64_t SelectionCount(const RecordUniverse& universe,
                             std::size_t individual);

struct SelectionEnumeration {
  std::vector<SelectionMap> members;  // one per distinct reduced channel
  std::uint64_t total = 0;            // selections covered before dedup
};

// All selections for individual i in lexicographic order of `choices`
// (choices[0] most significant), keeping the first selection of each
// distinct reduced channel. Entries are compared after rounding to 1e-12.
// Throws IndexError for a bad individual and EnumerationTooLargeError when
// SelectionCount exceeds `cap`.
SelectionEnumeration EnumerateSelections(
    const ChannelMatrix& channel, std::size_t individual,
    std::uint64_t cap = kDefaultEnumerationCap);

struct IndividualMaximum {
  std::size_t individual = 0;
  double value = 0.0;  // nats
  SelectionMap selection;
  CapacityResult solution;
  std::uint64_t evaluated = 0;
  std::uint64_t distinct = 0;
};

struct IndividualCapacityReport {
  double value = 0.0;  // nats
  std::size_t individual = 0;
  SelectionMap selection;
  CapacityResult solution;
  std::vector<IndividualMaximum> per_individual;
  std::uint64_t evaluated = 0;
  std::uint64_t distinct = 0;

  double value_in(InfoUnit unit) const { return FromNats(value, unit); }
};

struct CapacityOptions {
  SolverOptions solver;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

// C_1 = max_i max_{S_i} max_{p(x_i)} I(X_i; Y). Ties go to the smaller
// individual, then to the lexicographically smaller selection.
IndividualCapacityReport IndividualChannelCapacity(
    const ChannelMatrix& channel, const CapacityOptions& options = {});

struct OracleOptions {
  int samples = 1000;
  std::uint64_t seed = 0;
  // Also evaluate every degenerate kernel when there are at most `samples`.
  bool include_corners = true;
  SolverOptions solver;
};

// Running maximum of the capacity of p(y|x_i) = sum_c p(y|x_i, c) K(c|x_i)
// over sampled kernels K with simplex-uniform columns. Shares only the
// capacity solver with IndividualChannelCapacity.
double BruteForceCapacityOracle(const ChannelMatrix& channel,
                                std::size_t individual,
                                const OracleOptions& options);

}  // namespace privchan

#endif  // PRIVCHAN_CAPACITY_H_
