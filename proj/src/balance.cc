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

#include "privchan/balance.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "privchan/errors.h"
#include "sampling.h"

namespace privchan {
namespace {

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

// I(X_i; Y) as a function of the joint prior, with its gradient.
class RecordLeakage {
 public:
  RecordLeakage(const ChannelMatrix& channel, std::size_t individual)
      : channel_(channel),
        values_(channel.universe().size_of(individual)),
        record_of_(channel.datasets()),
        joint_(values_ * channel.output_size()),
        record_mass_(values_),
        output_mass_(channel.output_size()) {
    for (std::size_t x = 0; x < channel.datasets(); ++x) {
      record_of_[x] = channel.universe().Decode(x)[individual];
    }
  }

  double Value(std::span<const double> prior) {
    Accumulate(prior);
    const std::size_t k = channel_.output_size();
    double info = 0.0;
    for (std::size_t a = 0; a < values_; ++a) {
      for (std::size_t y = 0; y < k; ++y) {
        const double r = joint_[a * k + y];
        if (r > 0.0) info += r * std::log(r / (record_mass_[a] * output_mass_[y]));
      }
    }
    return std::max(info, 0.0);
  }

  // d I / d p(x) up to an additive constant; valid after Value(prior).
  void Gradient(std::vector<double>& grad) const {
    const std::size_t k = channel_.output_size();
    grad.assign(channel_.datasets(), 0.0);
    for (std::size_t x = 0; x < channel_.datasets(); ++x) {
      const std::size_t a = record_of_[x];
      double g = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        const double w = channel_(y, x);
        const double r = joint_[a * k + y];
        if (w > 0.0 && r > 0.0) {
          g += w * std::log(r / (record_mass_[a] * output_mass_[y]));
        }
      }
      grad[x] = g;
    }
  }

 private:
  void Accumulate(std::span<const double> prior) {
    const std::size_t k = channel_.output_size();
    std::fill(joint_.begin(), joint_.end(), 0.0);
    std::fill(record_mass_.begin(), record_mass_.end(), 0.0);
    std::fill(output_mass_.begin(), output_mass_.end(), 0.0);
    for (std::size_t x = 0; x < channel_.datasets(); ++x) {
      if (prior[x] <= 0.0) continue;
      const std::size_t a = record_of_[x];
      for (std::size_t y = 0; y < k; ++y) {
        joint_[a * k + y] += channel_(y, x) * prior[x];
      }
    }
    for (std::size_t a = 0; a < values_; ++a) {
      for (std::size_t y = 0; y < k; ++y) {
        record_mass_[a] += joint_[a * k + y];
        output_mass_[y] += joint_[a * k + y];
      }
    }
  }

  const ChannelMatrix& channel_;
  std::size_t values_;
  std::vector<std::size_t> record_of_;
  std::vector<double> joint_;  // p(x_i = a, y), row a
  std::vector<double> record_mass_;
  std::vector<double> output_mass_;
};

// Smallest mix toward uniform restoring H >= floor. Entropy is concave and
// maximal at uniform, so it is non-decreasing along the segment.
void MixToEntropyFloor(std::vector<double>& p, double floor) {
  if (Entropy(p) >= floor) return;
  const double u = 1.0 / static_cast<double>(p.size());
  std::vector<double> trial(p.size());
  auto mixed = [&](double t) {
    for (std::size_t x = 0; x < p.size(); ++x) trial[x] = (1 - t) * p[x] + t * u;
    return Entropy(trial);
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mixed(mid) >= floor) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  mixed(hi);
  p = trial;
}

double Ascend(RecordLeakage& leakage, std::vector<double> p, double floor,
              int max_steps) {
  MixToEntropyFloor(p, floor);
  double value = leakage.Value(p);
  std::vector<double> grad;
  std::vector<double> next(p.size());
  double step = 1.0;
  for (int it = 0; it < max_steps && step > 1e-12; ++it) {
    leakage.Gradient(grad);
    const double g_max = *std::max_element(grad.begin(), grad.end());
    double total = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      next[x] = p[x] * std::exp(step * (grad[x] - g_max));
      total += next[x];
    }
    for (double& v : next) v /= total;
    MixToEntropyFloor(next, floor);
    const double candidate = leakage.Value(next);
    if (candidate > value) {
      const double gain = candidate - value;
      p.swap(next);
      value = candidate;
      step = std::min(step * 1.5, 1e6);
      if (gain < 1e-15) break;
    } else {
      step *= 0.5;
      leakage.Value(p);  // restore cached marginals for the gradient
    }
  }
  return value;
}

}  // namespace

double RestrictedCapacityLowerBound(const ChannelMatrix& channel,
                                    std::size_t individual, double b,
                                    const RestrictedSearchOptions& options) {
  if (individual >= channel.universe().individuals()) {
    throw IndexError("individual out of range");
  }
  const std::size_t size = channel.datasets();
  const double max_entropy = std::log(static_cast<double>(size));
  if (!(b >= 0.0) || b > max_entropy + 1e-12) {
    throw DomainError("entropy floor " + std::to_string(b) +
                      " outside [0, log |X|] = [0, " +
                      std::to_string(max_entropy) + "]");
  }
  if (options.restarts < 1) throw DomainError("restarts must be >= 1");

  RecordLeakage leakage(channel, individual);
  const std::vector<double> uniform(size, 1.0 / static_cast<double>(size));
  if (b >= max_entropy - 1e-12) return leakage.Value(uniform);

  double best = Ascend(leakage, uniform, b, options.max_steps);
  internal::Rng rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    // Low concentration spreads the starts toward different faces.
    auto start = internal::SampleSimplex(rng, size, 0.5);
    for (double& v : start) v = std::max(v, 1e-12);
    best = std::max(best, Ascend(leakage, std::move(start), b,
                                 options.max_steps));
  }
  return best;
}

BalanceReport BalanceDeltaBound(const ChannelMatrix& channel,
                                std::span<const double> b_grid,
                                const RestrictedSearchOptions& search,
                                const CapacityOptions& capacity) {
  const double max_entropy =
      std::log(static_cast<double>(channel.datasets()));
  for (std::size_t k = 0; k < b_grid.size(); ++k) {
    if (!(b_grid[k] >= 0.0) || b_grid[k] > max_entropy + 1e-12) {
      throw DomainError("b-grid value " + std::to_string(b_grid[k]) +
                        " outside [0, log |X|]");
    }
    if (k > 0 && b_grid[k] < b_grid[k - 1]) {
      throw DomainError("b-grid must be sorted ascending");
    }
  }

  BalanceReport report;
  report.capacity = IndividualChannelCapacity(channel, capacity).value;
  double envelope = 0.0;
  for (double b : b_grid) {
    BalancePoint point;
    point.b = b;
    for (std::size_t i = 0; i < channel.universe().individuals(); ++i) {
      point.restricted_lower_bound =
          std::max(point.restricted_lower_bound,
                   RestrictedCapacityLowerBound(channel, i, b, search));
    }
    point.delta =
        std::max(report.capacity - point.restricted_lower_bound, 0.0);
    if (b == 0.0) {
      const bool agrees = std::abs(point.restricted_lower_bound -
                                   report.capacity) <= kZeroCrossCheckTolerance;
      report.zero_cross_check = agrees;
      if (agrees) point.delta = 0.0;
    }
    envelope = std::max(envelope, point.delta);
    point.envelope = envelope;
    report.points.push_back(point);
  }
  return report;
}

}  // namespace privchan
