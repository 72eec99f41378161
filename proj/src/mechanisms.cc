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

#include "privchan/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "privchan/errors.h"
#include "privchan/information.h"

namespace privchan {
namespace {

constexpr double kEntryTolerance = 1e-9;

double BinaryEntropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double StandardNormalCdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

ChannelMatrix RandomizedResponseChannel(const QueryTable& query, double p,
                                        bool allow_endpoints) {
  if (query.output_size() != 2) {
    throw DomainError("randomized response needs a binary query, got |Y| = " +
                      std::to_string(query.output_size()));
  }
  const bool inside = allow_endpoints ? (p >= 0.0 && p <= 1.0)
                                      : (p > 0.0 && p < 1.0);
  if (!inside) {
    throw DomainError("flip probability " + std::to_string(p) +
                      (allow_endpoints ? " outside [0, 1]" : " outside (0, 1)"));
  }
  const RecordUniverse& u = query.universe();
  Matrix m(2, u.size());
  for (std::size_t x = 0; x < u.size(); ++x) {
    const std::size_t f = query(x);
    m(f, x) = 1.0 - p;
    m(1 - f, x) = p;
  }
  return ChannelMatrix(u, std::move(m));
}

RrCalibration RrCalibrate(double epsilon, InfoUnit unit) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double eps = ToNats(epsilon, unit);
  RrCalibration out;
  if (eps >= std::numbers::ln2) return out;
  const double target = std::numbers::ln2 - eps;
  // H is increasing on [0, 1/2].
  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (BinaryEntropy(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // hi satisfies H(hi) >= target.
  out.p_star = hi;
  out.lower = hi;
  out.upper = 1.0 - hi;
  return out;
}

bool IsDataIndependent(const ChannelMatrix& channel) {
  const Matrix& m = channel.entries();
  std::vector<double> reference = m.column(0);
  std::sort(reference.begin(), reference.end());
  for (std::size_t x = 1; x < channel.datasets(); ++x) {
    std::vector<double> col = m.column(x);
    std::sort(col.begin(), col.end());
    for (std::size_t y = 0; y < col.size(); ++y) {
      if (std::abs(col[y] - reference[y]) > kEntryTolerance) return false;
    }
  }
  return true;
}

double DataIndependentCapacityBound(const ChannelMatrix& channel,
                                    InfoUnit unit) {
  if (!IsDataIndependent(channel)) {
    throw DomainError("channel is not data independent");
  }
  const double log_k = std::log(static_cast<double>(channel.output_size()));
  const double h =
      Entropy(Distribution::Normalized(channel.entries().column(0)));
  return FromNats(std::max(log_k - h, 0.0), unit);
}

std::optional<SelectionMap> FindWeaklySymmetricWitness(
    const ChannelMatrix& channel, std::uint64_t enumeration_cap) {
  if (!IsDataIndependent(channel)) {
    throw DomainError("weak symmetry is defined for data-independent channels");
  }
  for (std::size_t i = 0; i < channel.universe().individuals(); ++i) {
    for (const SelectionMap& s :
         EnumerateSelections(channel, i, enumeration_cap).members) {
      const ReducedChannel reduced = ReduceChannel(channel, s);
      const Matrix& k = reduced.kernel();
      const std::span<const double> first = k.row(0);
      const double target = std::accumulate(first.begin(), first.end(), 0.0);
      bool constant = true;
      for (std::size_t y = 1; y < k.rows() && constant; ++y) {
        const auto row = k.row(y);
        constant = std::abs(std::accumulate(row.begin(), row.end(), 0.0) -
                            target) <= kEntryTolerance;
      }
      if (constant) return s;
    }
  }
  return std::nullopt;
}

DistortionTable::DistortionTable(Matrix costs) : costs_(std::move(costs)) {
  if (costs_.rows() != costs_.cols() || costs_.rows() == 0) {
    throw DimensionError("distortion table must be square and non-empty");
  }
  for (double v : costs_.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("distortion entries must be nonnegative and finite");
    }
  }
}

DistortionTable DistortionTable::AbsoluteDifference(std::size_t k) {
  Matrix m(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      m(a, b) = a > b ? static_cast<double>(a - b) : static_cast<double>(b - a);
    }
  }
  return DistortionTable(std::move(m));
}

RankOrdering ComputeRankOrdering(const QueryTable& query,
                                 const DistortionTable& distortion) {
  const std::size_t k = query.output_size();
  if (distortion.size() != k) {
    throw DimensionError("distortion table is " +
                         std::to_string(distortion.size()) + "x" +
                         std::to_string(distortion.size()) + ", |Y| = " +
                         std::to_string(k));
  }
  RankOrdering out;
  out.ranks.reserve(query.universe().size());
  std::vector<std::size_t> order(k);
  for (std::size_t x = 0; x < query.universe().size(); ++x) {
    const std::size_t fx = query(x);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return distortion(a, fx) < distortion(b, fx);
                     });
    std::vector<std::size_t> rank(k);
    for (std::size_t j = 0; j < k; ++j) rank[order[j]] = j;
    out.ranks.push_back(std::move(rank));
  }
  return out;
}

ChannelMatrix ExponentialChannel(const QueryTable& query,
                                 const DistortionTable& distortion,
                                 double noise) {
  RequirePositive(noise, "N");
  const RankOrdering ranking = ComputeRankOrdering(query, distortion);
  const std::size_t k = query.output_size();
  std::vector<double> profile(k);
  double alpha = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    profile[i] = std::exp(-static_cast<double>(i) / noise);
    alpha += profile[i];
  }
  for (double& v : profile) v /= alpha;
  Matrix m(k, query.universe().size());
  for (std::size_t x = 0; x < m.cols(); ++x) {
    for (std::size_t y = 0; y < k; ++y) m(y, x) = profile[ranking.ranks[x][y]];
  }
  return ChannelMatrix(query.universe(), std::move(m));
}

double ExponentialEntropy(std::size_t k, double lambda) {
  if (k == 0) throw DomainError("k must be >= 1");
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (k == 1) return 0.0;
  const double kd = static_cast<double>(k);
  if (lambda < 1e-6) {
    return std::log(kd) - lambda * lambda * (kd * kd - 1.0) / 24.0;
  }
  const double k_lambda = kd * lambda;
  const double log_alpha =
      std::log(-std::expm1(-k_lambda)) - std::log(-std::expm1(-lambda));
  const double tail =
      std::isinf(std::expm1(k_lambda)) ? 0.0 : k_lambda / std::expm1(k_lambda);
  return std::max(log_alpha + lambda / std::expm1(lambda) - tail, 0.0);
}

double ExponentialCalibrate(double epsilon, std::size_t k) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (k < 2) throw DomainError("k must be >= 2");
  const double log_k = std::log(static_cast<double>(k));
  if (epsilon >= log_k) return std::numeric_limits<double>::infinity();
  const double target = log_k - epsilon;
  double lo = 0.0;
  double hi = 1.0;
  while (ExponentialEntropy(k, hi) >= target) hi *= 2.0;
  // Bisect to adjacent doubles; lo always satisfies the bound.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (ExponentialEntropy(k, mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double GaussianCalibrate(double epsilon, double range_bound) {
  RequirePositive(epsilon, "epsilon");
  RequirePositive(range_bound, "T");
  return range_bound * range_bound / std::expm1(2.0 * epsilon);
}

double GaussianCapacityBound(double range_bound, double variance) {
  RequirePositive(range_bound, "T");
  RequirePositive(variance, "N");
  return 0.5 * std::log1p(range_bound * range_bound / variance);
}

std::size_t OutputGrid::cells() const {
  if (!(step > 0.0) || !(hi > lo)) return 0;
  const double span = (hi - lo) / step;
  return std::max<std::size_t>(1, static_cast<std::size_t>(span + 1e-9));
}

ChannelMatrix DiscretizeGaussian(const GaussianSpec& spec,
                                 const RecordUniverse& universe,
                                 const std::vector<double>& values,
                                 const OutputGrid& grid) {
  RequirePositive(spec.range_bound, "T");
  RequirePositive(spec.variance, "N");
  if (!(grid.step > 0.0) || !(grid.hi > grid.lo)) {
    throw GridError("grid needs lo < hi and a positive step");
  }
  if (values.size() != universe.size()) {
    throw DimensionError("expected " + std::to_string(universe.size()) +
                         " query values, got " + std::to_string(values.size()));
  }
  const double sigma = std::sqrt(spec.variance);
  const std::size_t cells = grid.cells();
  std::vector<double> edges(cells + 1);
  for (std::size_t c = 0; c < cells; ++c) {
    edges[c] = grid.lo + static_cast<double>(c) * grid.step;
  }
  edges[cells] = grid.hi;

  Matrix m(cells, universe.size());
  std::vector<double> cdf(cells + 1);
  for (std::size_t x = 0; x < universe.size(); ++x) {
    const double mean = values[x];
    if (!std::isfinite(mean) || std::abs(mean) > spec.range_bound) {
      throw DomainError("query value " + std::to_string(mean) +
                        " outside [-T, T]");
    }
    const double tail = StandardNormalCdf((grid.lo - mean) / sigma) +
                        StandardNormalCdf((mean - grid.hi) / sigma);
    if (tail > kGridTailTolerance) {
      throw GridError("grid [" + std::to_string(grid.lo) + ", " +
                      std::to_string(grid.hi) + "] leaves " +
                      std::to_string(tail) + " of the mass for mean " +
                      std::to_string(mean) + " outside");
    }
    // Tails fold into the boundary cells: the outer CDF values are pinned.
    cdf[0] = 0.0;
    cdf[cells] = 1.0;
    for (std::size_t c = 1; c < cells; ++c) {
      cdf[c] = StandardNormalCdf((edges[c] - mean) / sigma);
    }
    for (std::size_t c = 0; c < cells; ++c) {
      m(c, x) = std::max(cdf[c + 1] - cdf[c], 0.0);
    }
  }
  return ChannelMatrix(universe, std::move(m));
}

NoiseScaleReport CompareNoiseScales(double epsilon_dp, double delta_prime,
                                    double sensitivity, double range_bound,
                                    double epsilon_ip, double delta_balance) {
  RequirePositive(epsilon_dp, "epsilon_dp");
  RequirePositive(sensitivity, "delta_f");
  RequirePositive(range_bound, "T");
  RequirePositive(epsilon_ip, "epsilon_ip");
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw DomainError("delta' must lie in (0, 1)");
  }
  if (!(delta_balance >= 0.0) || !std::isfinite(delta_balance)) {
    throw DomainError("balance delta must be nonnegative");
  }
  NoiseScaleReport r;
  r.laplace = sensitivity / epsilon_dp;
  r.gaussian_mechanism =
      std::sqrt(2.0 * std::log(1.25 / delta_prime)) * sensitivity / epsilon_dp;
  r.privacy_channel =
      range_bound / std::sqrt(std::expm1(2.0 * (epsilon_ip + delta_balance)));
  return r;
}

}  // namespace privchan
