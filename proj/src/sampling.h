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

#ifndef PRIVCHAN_SRC_SAMPLING_H_
#define PRIVCHAN_SRC_SAMPLING_H_

#include <cstddef>
#include <random>
#include <vector>

namespace privchan::internal {

using Rng = std::mt19937_64;

// Symmetric Dirichlet(concentration) draw; concentration 1 is uniform on the
// simplex.
inline std::vector<double> SampleSimplex(Rng& rng, std::size_t size,
                                         double concentration = 1.0) {
  std::vector<double> w(size);
  double total = 0.0;
  if (concentration == 1.0) {
    std::exponential_distribution<double> draw(1.0);
    for (double& v : w) total += (v = draw(rng));
  } else {
    std::gamma_distribution<double> draw(concentration, 1.0);
    for (double& v : w) total += (v = draw(rng));
  }
  if (!(total > 0.0)) {
    // All draws underflowed; fall back to uniform.
    for (double& v : w) v = 1.0 / static_cast<double>(size);
    return w;
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace privchan::internal

#endif  // PRIVCHAN_SRC_SAMPLING_H_
