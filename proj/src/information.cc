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

#include "privchan/information.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "privchan/errors.h"

namespace privchan {
namespace {

void CheckShapes(const Distribution& input, const Matrix& kernel) {
  if (input.size() != kernel.cols()) {
    throw DimensionError("input has " + std::to_string(input.size()) +
                         " symbols, kernel has " +
                         std::to_string(kernel.cols()) + " columns");
  }
}

std::vector<double> Marginal(const Distribution& input, const Matrix& kernel) {
  std::vector<double> out(kernel.rows(), 0.0);
  for (std::size_t y = 0; y < kernel.rows(); ++y) {
    double acc = 0.0;
    for (std::size_t x = 0; x < kernel.cols(); ++x) {
      acc += kernel(y, x) * input[x];
    }
    out[y] = acc;
  }
  return out;
}

}  // namespace

double Entropy(const Distribution& dist, InfoUnit unit) {
  double h = 0.0;
  for (double p : dist.weights()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return FromNats(std::max(h, 0.0), unit);
}

Distribution OutputDistribution(const Distribution& input,
                                const Matrix& kernel) {
  CheckShapes(input, kernel);
  CheckColumnStochastic(kernel);
  return Distribution(Marginal(input, kernel));
}

double MutualInformation(const Distribution& input, const Matrix& kernel,
                         InfoUnit unit) {
  CheckShapes(input, kernel);
  const std::vector<double> q = Marginal(input, kernel);
  double info = 0.0;
  for (std::size_t x = 0; x < kernel.cols(); ++x) {
    if (input[x] <= 0.0) continue;
    double kl = 0.0;
    for (std::size_t y = 0; y < kernel.rows(); ++y) {
      const double w = kernel(y, x);
      // q[y] >= input[x] * w > 0 whenever this term is live.
      if (w > 0.0) kl += w * std::log(w / q[y]);
    }
    info += input[x] * kl;
  }
  return FromNats(std::max(info, 0.0), unit);
}

double MaxMutualInformation(const Distribution& input, const Matrix& kernel,
                            InfoUnit unit) {
  CheckShapes(input, kernel);
  const std::vector<double> q = Marginal(input, kernel);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < kernel.cols(); ++x) {
    if (input[x] <= 0.0) continue;
    for (std::size_t y = 0; y < kernel.rows(); ++y) {
      if (q[y] <= 0.0) continue;
      const double w = kernel(y, x);
      if (w <= 0.0) continue;
      best = std::max(best, std::log(w / q[y]));
    }
  }
  return FromNats(best, unit);
}

double MaxMutualInformation(const Distribution& joint,
                            const ChannelMatrix& channel, InfoUnit unit) {
  return MaxMutualInformation(joint, channel.entries(), unit);
}

}  // namespace privchan
