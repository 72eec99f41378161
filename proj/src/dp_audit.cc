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

#include "privchan/dp_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "privchan/distribution.h"
#include "privchan/errors.h"
#include "privchan/information.h"
#include "sampling.h"

namespace privchan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double LogRatio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 0.0;
  if (b == 0.0) return kInf;
  if (a == 0.0) return -kInf;
  return std::log(a / b);
}

// max_i I_inf(X_i; Y) under the product prior with the given marginals.
double MaxRecordInformation(const ChannelMatrix& channel,
                            const std::vector<std::vector<double>>& marginals) {
  const RecordUniverse& u = channel.universe();
  double best = -kInf;
  for (std::size_t i = 0; i < u.individuals(); ++i) {
    Matrix kernel(channel.output_size(), u.size_of(i), 0.0);
    for (std::size_t x = 0; x < u.size(); ++x) {
      const auto coords = u.Decode(x);
      double weight = 1.0;
      for (std::size_t k = 0; k < coords.size(); ++k) {
        if (k != i) weight *= marginals[k][coords[k]];
      }
      if (weight == 0.0) continue;
      for (std::size_t y = 0; y < channel.output_size(); ++y) {
        kernel(y, coords[i]) += channel(y, x) * weight;
      }
    }
    best = std::max(best, MaxMutualInformation(Distribution(marginals[i]),
                                               kernel));
  }
  return best;
}

}  // namespace

DpAuditReport DpEpsilon(const ChannelMatrix& channel) {
  const RecordUniverse& u = channel.universe();
  DpAuditReport report;
  double best = -kInf;
  for (std::size_t i = 0; i < u.individuals(); ++i) {
    const std::size_t values = u.size_of(i);
    for (std::size_t line = 0; line < u.complement_size(i); ++line) {
      for (std::size_t y = 0; y < channel.output_size(); ++y) {
        for (std::size_t j = 0; j < values; ++j) {
          const std::size_t x = u.Combine(i, j, line);
          for (std::size_t k = 0; k < values; ++k) {
            if (k == j) continue;
            const std::size_t x_prime = u.Combine(i, k, line);
            const double r = LogRatio(channel(y, x), channel(y, x_prime));
            if (r > best) {
              best = r;
              report.witness = DpWitness{y, x, x_prime, i};
            }
          }
        }
      }
    }
  }
  report.epsilon_star = report.witness ? std::max(best, 0.0) : 0.0;
  report.epsilon = report.epsilon_star;
  return report;
}

DpAuditReport CheckDp(const ChannelMatrix& channel, double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be >= 0");
  DpAuditReport report = DpEpsilon(channel);
  report.epsilon = epsilon;
  report.pass = report.epsilon_star <= epsilon + 1e-12;
  return report;
}

ProductPriorCrossCheck CrossCheckProductPriors(const ChannelMatrix& channel,
                                               double epsilon, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  const RecordUniverse& u = channel.universe();
  const DpAuditReport audit = CheckDp(channel, epsilon);

  ProductPriorCrossCheck out;
  out.dp_passes = audit.pass;
  out.epsilon = epsilon;
  out.trials = trials;

  if (audit.pass) {
    internal::Rng rng(seed);
    std::vector<std::vector<double>> marginals(u.individuals());
    out.max_sampled = 0.0;
    for (int t = 0; t < trials; ++t) {
      for (std::size_t i = 0; i < u.individuals(); ++i) {
        marginals[i] = internal::SampleSimplex(rng, u.size_of(i));
        // Exact renormalization keeps Distribution's 1e-9 check quiet.
        double total = 0.0;
        for (double v : marginals[i]) total += v;
        for (double& v : marginals[i]) v /= total;
      }
      const double leak = MaxRecordInformation(channel, marginals);
      out.max_sampled = std::max(out.max_sampled, leak);
      if (leak > epsilon + 1e-9) ++out.violations;
    }
    out.consistent = out.violations == 0;
    return out;
  }

  // DP fails, so a witness exists.
  const DpWitness& w = *audit.witness;
  if (std::isinf(audit.epsilon_star)) {
    // p(y|x') = 0 < p(y|x): I_inf grows like log(1 / weight on x_i) as the
    // two-point marginal concentrates on x', without bound.
    out.converse_max = kInf;
    return out;
  }
  const auto here = u.Decode(w.dataset);
  const auto there = u.Decode(w.neighbor);
  std::vector<std::vector<double>> marginals(u.individuals());
  for (std::size_t k = 0; k < u.individuals(); ++k) {
    marginals[k].assign(u.size_of(k), 0.0);
    marginals[k][here[k]] = 1.0;
  }
  double best = -kInf;
  for (double weight = 0.5; weight >= 1e-12; weight *= 0.1) {
    auto& m = marginals[w.individual];
    std::fill(m.begin(), m.end(), 0.0);
    m[here[w.individual]] = weight;
    m[there[w.individual]] = 1.0 - weight;
    best = std::max(best, MaxRecordInformation(channel, marginals));
  }
  out.converse_max = best;
  out.consistent = best > epsilon;
  return out;
}

}  // namespace privchan
