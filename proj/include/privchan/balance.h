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

#ifndef PRIVCHAN_BALANCE_H_
#define PRIVCHAN_BALANCE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "privchan/capacity.h"
#include "privchan/channel.h"

namespace privchan {

struct RestrictedSearchOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_steps = 4000;
};

// Lower bound on max { I(X_i; Y) : H(X) >= b } over joint priors X, found by
// exponentiated-gradient ascent on the joint simplex. Iterates that fall
// below the entropy floor are mixed toward the uniform prior until they are
// feasible again. Starts from the uniform prior and `restarts` seeded random
// interior priors. `b` is in nats; throws DomainError outside [0, log |X|].
//
// This is a local search: the value is attained by some feasible prior and is
// therefore a lower bound, never the exact restricted capacity.
double RestrictedCapacityLowerBound(const ChannelMatrix& channel,
                                    std::size_t individual, double b,
                                    const RestrictedSearchOptions& options = {});

struct BalancePoint {
  double b = 0.0;
  double restricted_lower_bound = 0.0;  // max over individuals
  double delta = 0.0;                   // C_1 minus the lower bound
  double envelope = 0.0;                // running max of `delta`
};

struct BalanceReport {
  double capacity = 0.0;  // C_1 in nats
  std::vector<BalancePoint> points;
  // Set when the grid contains b = 0: whether the search reproduced C_1
  // within kZeroCrossCheckTolerance there.
  std::optional<bool> zero_cross_check;
};

inline constexpr double kZeroCrossCheckTolerance = 1e-4;

// Upper-bound estimates of the balance function delta(b) = C_1 - C_1^b on an
// ascending grid. delta at b = 0 is reported as exactly 0 once the b = 0
// search agrees with C_1.
BalanceReport BalanceDeltaBound(const ChannelMatrix& channel,
                                std::span<const double> b_grid,
                                const RestrictedSearchOptions& search = {},
                                const CapacityOptions& capacity = {});

}  // namespace privchan

#endif  // PRIVCHAN_BALANCE_H_
