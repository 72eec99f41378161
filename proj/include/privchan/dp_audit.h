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

#ifndef PRIVCHAN_DP_AUDIT_H_
#define PRIVCHAN_DP_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "privchan/channel.h"

namespace privchan {

// Datasets x and x_prime differ only in record `individual`, and
// p(y|x) / p(y|x_prime) = exp(epsilon_star).
struct DpWitness {
  std::size_t output = 0;
  std::size_t dataset = 0;
  std::size_t neighbor = 0;
  std::size_t individual = 0;
};

struct DpAuditReport {
  double epsilon_star = 0.0;  // nats; +infinity for a zero/nonzero pair
  // Absent only when no two datasets differ in one record (every |X_i| = 1).
  std::optional<DpWitness> witness;
  double epsilon = 0.0;  // the tested budget, when checking
  bool pass = true;
};

// Smallest epsilon for which the channel is epsilon-DP: the largest
// log(a / b) between two entries of one row on a line parallel to some x_i
// axis. 0/0 pairs are skipped; a > 0 over b = 0 gives +infinity. The witness
// is the first maximizer in (individual, line, output, pair) order.
DpAuditReport DpEpsilon(const ChannelMatrix& channel);

// Passes iff DpEpsilon <= epsilon + 1e-12.
DpAuditReport CheckDp(const ChannelMatrix& channel, double epsilon);

struct ProductPriorCrossCheck {
  bool dp_passes = false;
  double epsilon = 0.0;
  int trials = 0;
  // Forward direction (DP holds): largest max_i I_inf(X_i; Y) seen over
  // sampled product priors, and how many exceeded epsilon + 1e-9.
  double max_sampled = 0.0;
  int violations = 0;
  // Converse direction (DP fails): largest I_inf found with two-point
  // marginals on the witness pair; +infinity when the witness ratio is.
  std::optional<double> converse_max;
  // False when the sampled evidence contradicts the DP verdict.
  bool consistent = true;
};

ProductPriorCrossCheck CrossCheckProductPriors(const ChannelMatrix& channel,
                                               double epsilon, int trials,
                                               std::uint64_t seed);

}  // namespace privchan

#endif  // PRIVCHAN_DP_AUDIT_H_
