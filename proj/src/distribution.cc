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

#include "privchan/distribution.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "privchan/errors.h"

namespace privchan {

double FromNats(double nats, InfoUnit unit) {
  return unit == InfoUnit::kBits ? nats / std::numbers::ln2 : nats;
}

double ToNats(double value, InfoUnit unit) {
  return unit == InfoUnit::kBits ? value * std::numbers::ln2 : value;
}

std::string_view UnitName(InfoUnit unit) {
  return unit == InfoUnit::kBits ? "bits" : "nats";
}

InfoUnit ParseUnit(std::string_view name) {
  if (name == "nats") return InfoUnit::kNats;
  if (name == "bits") return InfoUnit::kBits;
  throw DomainError("unknown unit '" + std::string(name) +
                    "' (expected nats or bits)");
}

void CheckStochastic(std::span<const double> weights, std::string_view what) {
  if (weights.empty()) {
    throw NonStochasticError(std::string(what) + " is empty");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw NonStochasticError(std::string(what) + " has invalid entry " +
                               std::to_string(w) + " at index " +
                               std::to_string(i));
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw NonStochasticError(std::string(what) + " sums to " +
                             std::to_string(total));
  }
}

Distribution::Distribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  CheckStochastic(weights_, "distribution");
}

Distribution Distribution::Uniform(std::size_t size) {
  if (size == 0) throw DomainError("uniform distribution needs size >= 1");
  return Distribution(std::vector<double>(size, 1.0 / size));
}

Distribution Distribution::PointMass(std::size_t size, std::size_t at) {
  if (at >= size) throw IndexError("point mass outside the alphabet");
  std::vector<double> w(size, 0.0);
  w[at] = 1.0;
  return Distribution(std::move(w));
}

Distribution Distribution::Normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw NonStochasticError("cannot normalize a negative weight");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw NonStochasticError("cannot normalize a zero vector");
  }
  for (double& w : weights) w /= total;
  return Distribution(std::move(weights));
}

}  // namespace privchan
