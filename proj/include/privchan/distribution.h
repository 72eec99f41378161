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

#ifndef PRIVCHAN_DISTRIBUTION_H_
#define PRIVCHAN_DISTRIBUTION_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace privchan {

// Tolerance on the total mass of a probability vector.
inline constexpr double kStochasticTolerance = 1e-9;

// Information is computed in nats; bits are a presentation choice.
enum class InfoUnit { kNats, kBits };

double FromNats(double nats, InfoUnit unit);
double ToNats(double value, InfoUnit unit);
std::string_view UnitName(InfoUnit unit);
// Accepts "nats" or "bits"; throws DomainError otherwise.
InfoUnit ParseUnit(std::string_view name);

// A probability vector over a finite alphabet. Construction validates the
// weights and never rescales them; use Normalized() to renormalize.
class Distribution {
 public:
  // Throws NonStochasticError on a negative or non-finite weight or a total
  // outside 1 +- kStochasticTolerance.
  explicit Distribution(std::vector<double> weights);
  // The point mass on a one-symbol alphabet.
  Distribution() : weights_{1.0} {}

  static Distribution Uniform(std::size_t size);
  static Distribution PointMass(std::size_t size, std::size_t at);
  // Divides by the total. Throws NonStochasticError if any weight is
  // negative or the total is not positive.
  static Distribution Normalized(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Checks a raw probability vector, naming `what` in the error message.
void CheckStochastic(std::span<const double> weights, std::string_view what);

}  // namespace privchan

#endif  // PRIVCHAN_DISTRIBUTION_H_
