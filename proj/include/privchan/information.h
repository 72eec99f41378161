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

#ifndef PRIVCHAN_INFORMATION_H_
#define PRIVCHAN_INFORMATION_H_

#include "privchan/channel.h"
#include "privchan/distribution.h"
#include "privchan/matrix.h"

namespace privchan {

// Shannon entropy with 0 log 0 = 0.
double Entropy(const Distribution& dist, InfoUnit unit = InfoUnit::kNats);

// p(y) = sum_x p(y|x) p(x). The kernel must be column stochastic with one
// column per input symbol; throws DimensionError otherwise.
Distribution OutputDistribution(const Distribution& input,
                                const Matrix& kernel);

// I(X;Y) = sum p(x) p(y|x) log(p(y|x) / p(y)). Terms with p(x) = 0 or
// p(y|x) = 0 contribute nothing.
double MutualInformation(const Distribution& input, const Matrix& kernel,
                         InfoUnit unit = InfoUnit::kNats);

// I_inf(X;Y) = max log(p(y|x) / p(y)) over x with p(x) > 0 and y with
// p(y) > 0. Returns -inf only for degenerate inputs where no pair qualifies,
// which cannot happen for a valid distribution and kernel.
double MaxMutualInformation(const Distribution& input, const Matrix& kernel,
                            InfoUnit unit = InfoUnit::kNats);

// Same quantity for a joint prior over a channel's datasets.
double MaxMutualInformation(const Distribution& joint,
                            const ChannelMatrix& channel,
                            InfoUnit unit = InfoUnit::kNats);

}  // namespace privchan

#endif  // PRIVCHAN_INFORMATION_H_
