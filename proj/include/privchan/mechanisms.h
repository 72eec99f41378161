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

#ifndef PRIVCHAN_MECHANISMS_H_
#define PRIVCHAN_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "privchan/capacity.h"
#include "privchan/channel.h"
#include "privchan/distribution.h"
#include "privchan/matrix.h"

namespace privchan {

// ---------------------------------------------------------------------------
// Randomized response

// Binary query answer flipped with probability p. p must lie in (0, 1);
// `allow_endpoints` admits p = 0 and p = 1 (deterministic channels).
// Throws DomainError when the query is not binary or p is out of range.
ChannelMatrix RandomizedResponseChannel(const QueryTable& query, double p,
                                        bool allow_endpoints = false);

struct RrCalibration {
  double p_star = 0.0;  // in [0, 0.5]
  // Any p in the open interval (lower, upper) keeps C_1 <= epsilon.
  double lower = 0.0;
  double upper = 1.0;
};

// Solves H(p) = log 2 - epsilon for p in [0, 1/2]. Throws DomainError for
// epsilon <= 0.
RrCalibration RrCalibrate(double epsilon, InfoUnit unit = InfoUnit::kNats);

// ---------------------------------------------------------------------------
// Data-independent channels

// True iff every column is a permutation of the first (sorted columns agree
// entrywise within 1e-9).
bool IsDataIndependent(const ChannelMatrix& channel);

// log |Y| - H(Z) with Z any column. Throws DomainError unless the channel is
// data independent.
double DataIndependentCapacityBound(const ChannelMatrix& channel,
                                    InfoUnit unit = InfoUnit::kNats);

// First (individual, selection) in enumeration order whose reduced channel
// has constant row sums, i.e. produces the uniform output under the
// uniform input. Throws DomainError for a data-dependent channel.
std::optional<SelectionMap> FindWeaklySymmetricWitness(
    const ChannelMatrix& channel,
    std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Exponential channel

// d(y, y'): the cost of representing y by y'. Entries must be nonnegative;
// symmetry and a zero diagonal are not required.
class DistortionTable {
 public:
  explicit DistortionTable(Matrix costs);
  // d(y, y') = |y - y'| on Y = {0, ..., k - 1}.
  static DistortionTable AbsoluteDifference(std::size_t k);

  std::size_t size() const { return costs_.rows(); }
  double operator()(std::size_t y, std::size_t y_prime) const {
    return costs_(y, y_prime);
  }
  const Matrix& costs() const { return costs_; }

 private:
  Matrix costs_;
};

// ranks[x][y] = position of y when Y is sorted by d(y, f(x)) ascending, ties
// broken by the smaller output index.
struct RankOrdering {
  std::vector<std::vector<std::size_t>> ranks;
};

RankOrdering ComputeRankOrdering(const QueryTable& query,
                                 const DistortionTable& distortion);

// p(y|x) = exp(-rank_x(y) / N) / alpha with alpha = sum_{i<k} exp(-i / N).
ChannelMatrix ExponentialChannel(const QueryTable& query,
                                 const DistortionTable& distortion,
                                 double noise);

// Closed-form entropy (nats) of the k-point distribution proportional to
// exp(-lambda i), i = 0..k-1. Uses the second-order series
// log k - lambda^2 (k^2 - 1) / 24 below lambda = 1e-6.
double ExponentialEntropy(std::size_t k, double lambda);

// Largest lambda with ExponentialEntropy(k, lambda) >= log k - epsilon.
// Returns +infinity when epsilon >= log k (every lambda is admissible).
double ExponentialCalibrate(double epsilon, std::size_t k);

// ---------------------------------------------------------------------------
// Gaussian channel

// Smallest admissible variance T^2 / (exp(2 epsilon) - 1).
double GaussianCalibrate(double epsilon, double range_bound);

// (1/2) log(1 + T^2 / N), in nats.
double GaussianCapacityBound(double range_bound, double variance);

struct GaussianSpec {
  double range_bound = 1.0;  // T
  double variance = 1.0;     // N
};

struct OutputGrid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::size_t cells() const;
};

inline constexpr double kGridTailTolerance = 1e-6;

// Output cell masses of N(f(x), variance) on [lo, hi] split into cells of
// width `step` (the last cell absorbs any remainder). Mass below lo and above
// hi is folded into the boundary cells. Throws GridError when a column loses
// more than kGridTailTolerance to the tails and DomainError when a value
// exceeds the range bound.
ChannelMatrix DiscretizeGaussian(const GaussianSpec& spec,
                                 const RecordUniverse& universe,
                                 const std::vector<double>& values,
                                 const OutputGrid& grid);

// ---------------------------------------------------------------------------
// Noise-scale comparison

struct NoiseScaleReport {
  double laplace = 0.0;           // delta_f / epsilon_dp (DP regime)
  double gaussian_mechanism = 0.0;  // sqrt(2 ln(1.25/delta')) delta_f / eps
  double privacy_channel = 0.0;   // T / sqrt(exp(2(eps_ip + delta)) - 1)
};

NoiseScaleReport CompareNoiseScales(double epsilon_dp, double delta_prime,
                                    double sensitivity, double range_bound,
                                    double epsilon_ip, double delta_balance);

}  // namespace privchan

#endif  // PRIVCHAN_MECHANISMS_H_
