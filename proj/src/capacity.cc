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

#include "privchan/capacity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "sampling.h"

namespace privchan {
namespace {

constexpr double kDedupQuantum = 1e-12;

std::vector<long long> ColumnKey(const Matrix& m, std::size_t col) {
  std::vector<long long> key(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    key[r] = std::llround(m(r, col) / kDedupQuantum);
  }
  return key;
}

// For each value j of record i, the complement indices whose channel column
// is the first occurrence of its (rounded) value within plane x_i = j.
std::vector<std::vector<std::size_t>> DistinctPlaneColumns(
    const ChannelMatrix& channel, std::size_t individual) {
  const RecordUniverse& u = channel.universe();
  const std::size_t values = u.size_of(individual);
  const std::size_t complements = u.complement_size(individual);
  std::vector<std::vector<std::size_t>> planes(values);
  for (std::size_t j = 0; j < values; ++j) {
    std::map<std::vector<long long>, std::size_t> seen;
    for (std::size_t c = 0; c < complements; ++c) {
      auto key = ColumnKey(channel.entries(), u.Combine(individual, j, c));
      if (seen.emplace(std::move(key), c).second) planes[j].push_back(c);
    }
  }
  return planes;
}

// Visits one selection per distinct reduced channel, in lexicographic order.
//
// A reduced channel is the tuple of its columns, and column j only depends
// on choices[j]. The lexicographically first selection realizing a tuple
// therefore picks, position by position, the first complement index whose
// column matches; and ordering tuples by that first selection is the same
// as walking the product of per-plane representatives lexicographically.
template <typename Visit>
void ForEachDistinctSelection(const ChannelMatrix& channel,
                              std::size_t individual, Visit&& visit) {
  const auto planes = DistinctPlaneColumns(channel, individual);
  const std::size_t values = planes.size();
  std::vector<std::size_t> cursor(values, 0);
  SelectionMap selection{individual, std::vector<std::size_t>(values)};
  while (true) {
    for (std::size_t j = 0; j < values; ++j) {
      selection.choices[j] = planes[j][cursor[j]];
    }
    visit(selection);
    // Odometer with position 0 most significant.
    std::size_t pos = values;
    while (pos > 0) {
      --pos;
      if (++cursor[pos] < planes[pos].size()) break;
      cursor[pos] = 0;
      if (pos == 0) return;
    }
  }
}

void CheckIndividual(const ChannelMatrix& channel, std::size_t individual) {
  if (individual >= channel.universe().individuals()) {
    throw IndexError("individual " + std::to_string(individual) +
                     " out of range for a universe of " +
                     std::to_string(channel.universe().individuals()));
  }
}

void CheckCap(const ChannelMatrix& channel, std::size_t individual,
              std::uint64_t cap) {
  const std::uint64_t count = SelectionCount(channel.universe(), individual);
  if (count > cap) {
    throw EnumerationTooLargeError(
        "individual " + std::to_string(individual) + " has " +
        (count == std::numeric_limits<std::uint64_t>::max()
             ? std::string("more than 2^64")
             : std::to_string(count)) +
        " selections, above the cap of " + std::to_string(cap));
  }
}

}  // namespace

ReducedChannel::ReducedChannel(Matrix kernel) : kernel_(std::move(kernel)) {
  CheckColumnStochastic(kernel_);
}

namespace {

// D(W_x || q) for every column, given sum_y W log W per column. Fills q.
std::vector<double> Divergences(const Matrix& kernel,
                                const std::vector<double>& neg_entropy,
                                const std::vector<double>& p,
                                std::vector<double>& q) {
  const std::size_t outputs = kernel.rows();
  const std::size_t inputs = kernel.cols();
  q.assign(outputs, 0.0);
  std::vector<double> log_q(outputs);
  for (std::size_t y = 0; y < outputs; ++y) {
    double acc = 0.0;
    for (std::size_t x = 0; x < inputs; ++x) acc += kernel(y, x) * p[x];
    q[y] = acc;
    log_q[y] = std::log(std::max(acc, std::numeric_limits<double>::min()));
  }
  std::vector<double> d(inputs);
  for (std::size_t x = 0; x < inputs; ++x) {
    double cross = 0.0;
    for (std::size_t y = 0; y < outputs; ++y) {
      cross += kernel(y, x) * log_q[y];
    }
    d[x] = neg_entropy[x] - cross;
  }
  return d;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Newton ascent on I(p) restricted to the support of `p`, dropping inputs
// whose mass reaches zero. Returns a certified result when the bracket
// [I(p), max_x D_x] closes to `tol`; otherwise nullopt. Blahut-Arimoto
// alone converges sublinearly when columns nearly coincide.
std::optional<CapacityResult> PolishOnSupport(
    const Matrix& kernel, const std::vector<double>& neg_entropy,
    std::vector<double> p, double tol) {
  const std::size_t inputs = kernel.cols();
  const std::size_t outputs = kernel.rows();
  for (double& v : p) {
    if (v < 1e-10) v = 0.0;
  }
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;

  std::vector<double> q;
  std::vector<double> d = Divergences(kernel, neg_entropy, p, q);
  double info = Dot(p, d);
  for (int step = 0; step < 50; ++step) {
    std::vector<std::size_t> active;
    for (std::size_t x = 0; x < inputs; ++x) {
      if (p[x] > 0.0) active.push_back(x);
    }
    const auto m = static_cast<Eigen::Index>(active.size());
    if (m < 2) break;
    // KKT system of the equality-constrained quadratic model.
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = a; b < m; ++b) {
        double h = 0.0;
        for (std::size_t y = 0; y < outputs; ++y) {
          if (q[y] > 0.0) {
            h -= kernel(y, active[a]) * kernel(y, active[b]) / q[y];
          }
        }
        kkt(a, b) = kkt(b, a) = h;
      }
      kkt(a, m) = kkt(m, a) = 1.0;
      rhs(a) = -d[active[a]];
    }
    // A small ridge turns flat directions (more inputs than outputs) into
    // long steps that run into the boundary and shrink the support.
    double ridge = 0.0;
    for (Eigen::Index a = 0; a < m; ++a) ridge = std::max(ridge, -kkt(a, a));
    for (Eigen::Index a = 0; a < m; ++a) kkt(a, a) -= 1e-9 * ridge;
    const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    std::vector<double> dir(inputs, 0.0);
    double t_max = 1.0;
    std::size_t blocking = inputs;
    for (Eigen::Index a = 0; a < m; ++a) {
      dir[active[a]] = sol(a);
      if (sol(a) < 0.0 && p[active[a]] / -sol(a) < t_max) {
        t_max = p[active[a]] / -sol(a);
        blocking = active[a];
      }
    }
    double t = t_max;
    bool moved = false;
    while (t > 1e-12) {
      std::vector<double> trial(inputs);
      for (std::size_t x = 0; x < inputs; ++x) {
        trial[x] = std::max(p[x] + t * dir[x], 0.0);
      }
      if (t == t_max && blocking < inputs) trial[blocking] = 0.0;
      const double s = std::accumulate(trial.begin(), trial.end(), 0.0);
      for (double& v : trial) v /= s;
      std::vector<double> trial_q;
      std::vector<double> trial_d =
          Divergences(kernel, neg_entropy, trial, trial_q);
      const double trial_info = Dot(trial, trial_d);
      if (trial_info >= info) {
        moved = trial_info > info || t == t_max;
        p = std::move(trial);
        q = std::move(trial_q);
        d = std::move(trial_d);
        info = trial_info;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  const double upper = *std::max_element(d.begin(), d.end());
  const double lower = std::max(info, 0.0);
  if (!(upper - lower <= tol)) return std::nullopt;
  CapacityResult result;
  result.value = lower;
  result.gap = std::max(upper - lower, 0.0);
  result.optimizer = Distribution::Normalized(std::move(p));
  return result;
}

}  // namespace

CapacityResult BlahutArimoto(const Matrix& kernel,
                             const SolverOptions& options) {
  CheckColumnStochastic(kernel);
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
  if (options.max_iter < 1) throw DomainError("max_iter must be >= 1");

  const std::size_t inputs = kernel.cols();

  // sum_y W log W per column, so each iteration needs only log q.
  std::vector<double> neg_entropy(inputs, 0.0);
  for (std::size_t x = 0; x < inputs; ++x) {
    for (std::size_t y = 0; y < kernel.rows(); ++y) {
      const double w = kernel(y, x);
      if (w > 0.0) neg_entropy[x] += w * std::log(w);
    }
  }

  std::vector<double> p(inputs, 1.0 / static_cast<double>(inputs));
  std::vector<double> q;
  CapacityResult result;
  int next_polish = 64;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const std::vector<double> divergence =
        Divergences(kernel, neg_entropy, p, q);
    const double d_max =
        *std::max_element(divergence.begin(), divergence.end());
    double scale = 0.0;
    for (std::size_t x = 0; x < inputs; ++x) {
      p[x] *= std::exp(divergence[x] - d_max);
      scale += p[x];
    }
    for (double& v : p) v /= scale;
    // log sum_x p_x exp(D_x) <= C <= D_max; the difference can dip below
    // zero by rounding.
    const double lower = d_max + std::log(scale);
    const double gap = std::max(d_max - lower, 0.0);

    result.value = std::max(lower, 0.0);
    result.gap = gap;
    result.iterations = iter;
    if (gap <= options.tol) {
      result.optimizer = Distribution::Normalized(p);
      return result;
    }
    if (iter == next_polish) {
      next_polish *= 2;
      if (auto polished = PolishOnSupport(kernel, neg_entropy, p, options.tol)) {
        polished->iterations = iter;
        return *std::move(polished);
      }
    }
  }
  result.optimizer = Distribution::Normalized(p);
  char gap_text[32];
  std::snprintf(gap_text, sizeof(gap_text), "%.3g", result.gap);
  char tol_text[32];
  std::snprintf(tol_text, sizeof(tol_text), "%.3g", options.tol);
  throw ConvergenceError(std::string("Blahut-Arimoto did not reach tolerance ") +
                             tol_text + " within " +
                             std::to_string(options.max_iter) +
                             " iterations (gap " + gap_text + ")",
                         std::move(result));
}

CapacityResult BlahutArimoto(const ReducedChannel& kernel,
                             const SolverOptions& options) {
  return BlahutArimoto(kernel.kernel(), options);
}

ReducedChannel ReduceChannel(const ChannelMatrix& channel,
                             const SelectionMap& selection) {
  CheckIndividual(channel, selection.individual);
  const RecordUniverse& u = channel.universe();
  const std::size_t values = u.size_of(selection.individual);
  if (selection.choices.size() != values) {
    throw IndexError("selection has " +
                     std::to_string(selection.choices.size()) +
                     " choices, record has " + std::to_string(values) +
                     " values");
  }
  Matrix kernel(channel.output_size(), values);
  for (std::size_t j = 0; j < values; ++j) {
    const std::size_t x =
        u.Combine(selection.individual, j, selection.choices[j]);
    for (std::size_t y = 0; y < channel.output_size(); ++y) {
      kernel(y, j) = channel(y, x);
    }
  }
  return ReducedChannel(std::move(kernel));
}

std::uint64_t SelectionCount(const RecordUniverse& universe,
                             std::size_t individual) {
  const std::uint64_t base = universe.complement_size(individual);
  const std::size_t exponent = universe.size_of(individual);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && count > kMax / base) return kMax;
    count *= base;
  }
  return count;
}

SelectionEnumeration EnumerateSelections(const ChannelMatrix& channel,
                                         std::size_t individual,
                                         std::uint64_t cap) {
  CheckIndividual(channel, individual);
  CheckCap(channel, individual, cap);
  SelectionEnumeration out;
  out.total = SelectionCount(channel.universe(), individual);
  ForEachDistinctSelection(channel, individual,
                           [&](const SelectionMap& s) {
                             out.members.push_back(s);
                           });
  return out;
}

IndividualCapacityReport IndividualChannelCapacity(
    const ChannelMatrix& channel, const CapacityOptions& options) {
  const std::size_t n = channel.universe().individuals();
  for (std::size_t i = 0; i < n; ++i) {
    CheckCap(channel, i, options.enumeration_cap);
  }

  IndividualCapacityReport report;
  bool have_best = false;
  for (std::size_t i = 0; i < n; ++i) {
    IndividualMaximum best_i;
    best_i.individual = i;
    best_i.evaluated = SelectionCount(channel.universe(), i);
    bool have_i = false;
    ForEachDistinctSelection(channel, i, [&](const SelectionMap& s) {
      ++best_i.distinct;
      CapacityResult r =
          BlahutArimoto(ReduceChannel(channel, s), options.solver);
      if (!have_i || r.value > best_i.value) {
        best_i.value = r.value;
        best_i.selection = s;
        best_i.solution = std::move(r);
        have_i = true;
      }
    });
    report.evaluated += best_i.evaluated;
    report.distinct += best_i.distinct;
    if (!have_best || best_i.value > report.value) {
      report.value = best_i.value;
      report.individual = i;
      report.selection = best_i.selection;
      report.solution = best_i.solution;
      have_best = true;
    }
    report.per_individual.push_back(std::move(best_i));
  }
  return report;
}

double BruteForceCapacityOracle(const ChannelMatrix& channel,
                                std::size_t individual,
                                const OracleOptions& options) {
  CheckIndividual(channel, individual);
  if (options.samples < 1) throw DomainError("samples must be >= 1");

  // Planes of the transition matrix indexed independently of
  // RecordUniverse::Combine: walk every dataset, split off x_i, and encode
  // the remaining coordinates in a universe of their own.
  const RecordUniverse& u = channel.universe();
  const std::size_t values = u.size_of(individual);
  std::vector<std::size_t> rest_sizes;
  for (std::size_t k = 0; k < u.individuals(); ++k) {
    if (k != individual) rest_sizes.push_back(u.sizes()[k]);
  }
  const std::size_t complements = u.size() / values;
  // plane[j](y, c) = p(y | x_i = j, x_(i) = c)
  std::vector<Matrix> plane(values, Matrix(channel.output_size(), complements));
  const RecordUniverse rest_universe =
      rest_sizes.empty() ? RecordUniverse({1}) : RecordUniverse(rest_sizes);
  std::vector<std::size_t> rest;
  for (std::size_t x = 0; x < u.size(); ++x) {
    const auto coords = u.Decode(x);
    rest.clear();
    for (std::size_t k = 0; k < coords.size(); ++k) {
      if (k != individual) rest.push_back(coords[k]);
    }
    const std::size_t c = rest.empty() ? 0 : rest_universe.Encode(rest);
    for (std::size_t y = 0; y < channel.output_size(); ++y) {
      plane[coords[individual]](y, c) = channel(y, x);
    }
  }

  // p(y | x_i = j) = sum_c plane[j](y, c) K(c | j)
  auto mixture = [&](const std::vector<std::vector<double>>& conditional) {
    Matrix kernel(channel.output_size(), values);
    for (std::size_t j = 0; j < values; ++j) {
      for (std::size_t y = 0; y < channel.output_size(); ++y) {
        double acc = 0.0;
        for (std::size_t c = 0; c < complements; ++c) {
          acc += plane[j](y, c) * conditional[j][c];
        }
        kernel(y, j) = acc;
      }
    }
    return kernel;
  };

  double best = 0.0;
  std::vector<std::vector<double>> conditional(
      values, std::vector<double>(complements, 0.0));

  const std::uint64_t corners = SelectionCount(u, individual);
  if (options.include_corners &&
      corners <= static_cast<std::uint64_t>(options.samples)) {
    std::vector<std::size_t> digit(values, 0);
    for (std::uint64_t k = 0; k < corners; ++k) {
      for (std::size_t j = 0; j < values; ++j) {
        std::fill(conditional[j].begin(), conditional[j].end(), 0.0);
        conditional[j][digit[j]] = 1.0;
      }
      best = std::max(best, BlahutArimoto(mixture(conditional),
                                          options.solver).value);
      for (std::size_t j = 0; j < values; ++j) {
        if (++digit[j] < complements) break;
        digit[j] = 0;
      }
    }
  }

  internal::Rng rng(options.seed);
  for (int s = 0; s < options.samples; ++s) {
    for (std::size_t j = 0; j < values; ++j) {
      conditional[j] = internal::SampleSimplex(rng, complements);
    }
    Matrix kernel = mixture(conditional);
    // Renormalize away rounding so the kernel passes the 1e-9 check.
    for (std::size_t j = 0; j < values; ++j) {
      double total = 0.0;
      for (std::size_t y = 0; y < kernel.rows(); ++y) total += kernel(y, j);
      for (std::size_t y = 0; y < kernel.rows(); ++y) kernel(y, j) /= total;
    }
    best = std::max(best, BlahutArimoto(kernel, options.solver).value);
  }
  return best;
}

}  // namespace privchan
