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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "privchan/balance.h"
#include "privchan/capacity.h"
#include "privchan/cli.h"
#include "privchan/dp_audit.h"
#include "privchan/io.h"
#include "privchan/mechanisms.h"
#include "testing/generators.h"

namespace privchan {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

const fs::path kFixtures = PRIVCHAN_FIXTURE_DIR;

// Values computed independently (closed forms evaluated in double precision
// outside this code base) and frozen here.
constexpr double kRrP25Bits = 0.18872187554086717;
constexpr double kRrPStarHalfBit = 0.11002786443835953;
constexpr double kExpEntropyK2L1 = 0.5822031088882179;
constexpr double kExpLambdaK4 = 1.1004811243463926;
constexpr double kGaussianNoise = 0.5819767068693265;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double BinaryEntropy(double p) {
  return -p * std::log(p) - (1 - p) * std::log1p(-p);
}

QueryTable MatchQuery() {
  return LoadQuery(kFixtures / "match_query.json").query;
}

std::vector<std::size_t> SmallSizes(Rng& rng) {
  return {testing::UniformSize(rng, 2, 3), testing::UniformSize(rng, 2, 3)};
}

Outcome OracleEquivalence() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst_excess = -1.0;
  double worst_shortfall = 0.0;
  double worst_sampled = -1.0;  // samples only, corners excluded
  for (int trial = 0; trial < 500; ++trial) {
    const ChannelMatrix ch =
        testing::RandomChannel(rng, SmallSizes(rng),
                               testing::UniformSize(rng, 2, 3));
    const IndividualCapacityReport report = IndividualChannelCapacity(ch);
    for (std::size_t i = 0; i < 2; ++i) {
      OracleOptions opts;
      opts.samples = 1000;
      opts.seed = static_cast<std::uint64_t>(trial) * 2 + i;
      const double oracle = BruteForceCapacityOracle(ch, i, opts);
      const double exact = report.per_individual[i].value;
      worst_excess = std::max(worst_excess, oracle - exact);
      worst_shortfall = std::max(worst_shortfall, exact - oracle);
      opts.include_corners = false;
      const double sampled = BruteForceCapacityOracle(ch, i, opts);
      worst_sampled = std::max(worst_sampled, sampled - exact);
    }
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  out.Require(worst_excess <= 1e-9, "oracle exceeds the selection maximum");
  out.Require(worst_shortfall <= 1e-6, "oracle falls short of the maximum");
  out.Require(worst_sampled <= 1e-9, "a sampled kernel exceeds the maximum");
  out.Require(seconds <= 300.0, "runtime above 5 minutes");
  out.detail = Fmt("500 channels, max excess %.3g (samples alone %.3g), max "
                   "shortfall %.3g, %.1fs",
                   worst_excess, worst_sampled, worst_shortfall, seconds) +
               (out.pass ? "" : " (" + out.detail + ")");
  return out;
}

Outcome RrAttainment() {
  Outcome out;
  double worst = 0.0;
  for (double p : {0.1, 0.25, 0.4}) {
    const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), p);
    const double c = IndividualChannelCapacity(ch).value;
    worst = std::max(worst, std::abs(c - (std::numbers::ln2 - BinaryEntropy(p))));
  }
  const double bits =
      IndividualChannelCapacity(RandomizedResponseChannel(MatchQuery(), 0.25))
          .value_in(InfoUnit::kBits);
  out.Require(worst <= 1e-6, "capacity differs from log 2 - H(p)");
  out.Require(std::abs(bits - kRrP25Bits) <= 1e-6, "p=0.25 value off");
  out.detail = Fmt("max |C - (log2 - H(p))| = %.3g nats; p=0.25 -> %.6f bits",
                   worst, bits);
  return out;
}

Outcome CalibrationRoundTrips() {
  Outcome out;
  const RrCalibration rr = RrCalibrate(0.5, InfoUnit::kBits);
  const double rr_cap =
      IndividualChannelCapacity(RandomizedResponseChannel(MatchQuery(), rr.p_star))
          .value_in(InfoUnit::kBits);
  out.Require(std::abs(rr.p_star - kRrPStarHalfBit) <= 1e-5, "rr p_star");
  out.Require(rr_cap <= 0.5 + 1e-9, "rr capacity above budget");

  const double lambda = ExponentialCalibrate(0.5, 4);
  const double exp_err =
      std::abs(ExponentialEntropy(4, lambda) - (std::log(4.0) - 0.5));
  out.Require(exp_err <= 1e-9, "exponential entropy round trip");
  out.Require(std::abs(lambda - kExpLambdaK4) <= 1e-9, "lambda_star value");

  const double n = GaussianCalibrate(0.5, 1.0);
  const double bound = GaussianCapacityBound(1.0, n);
  out.Require(std::abs(n - kGaussianNoise) <= 1e-6, "gaussian N");
  out.Require(std::abs(bound - 0.5) <= 1e-15, "gaussian bound round trip");
  out.detail = Fmt(
      "p*=%.9f (cap %.12f bits), lambda*=%.12f (err %.2g), N=%.9f (bound-0.5 "
      "= %.2g)",
      rr.p_star, rr_cap, lambda, exp_err, n, bound - 0.5);
  return out;
}

Outcome ExponentialClosedForm() {
  Outcome out;
  double worst = 0.0;
  for (std::size_t k = 2; k <= 64; ++k) {
    for (double lambda : {1e-3, 1e-2, 0.1, 0.5, 1.0}) {
      std::vector<double> w(k);
      double z = 0.0;
      for (std::size_t j = 0; j < k; ++j) z += (w[j] = std::exp(-lambda * j));
      double h = 0.0;
      for (double v : w) h -= (v / z) * std::log(v / z);
      worst = std::max(worst, std::abs(ExponentialEntropy(k, lambda) - h));
    }
  }
  const double spot = ExponentialEntropy(2, 1.0);
  out.Require(worst <= 1e-10, "closed form disagrees with summation");
  out.Require(std::abs(spot - kExpEntropyK2L1) <= 1e-6, "spot value");
  out.detail = Fmt("max |closed - sum| = %.3g; H(2,1) = %.9f", worst, spot);
  return out;
}

Outcome GaussianDiscretization() {
  Outcome out;
  Rng rng(5005);
  const double n = GaussianCalibrate(0.5, 1.0);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  double worst_cap = 0.0;
  double worst_change = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    RecordUniverse u({testing::UniformSize(rng, 2, 3),
                      testing::UniformSize(rng, 2, 3)});
    std::vector<double> values(u.size());
    for (double& v : values) v = value(rng);
    double caps[2];
    for (int r = 0; r < 2; ++r) {
      const OutputGrid grid{-6.4, 6.4, r == 0 ? 0.02 : 0.01};
      caps[r] = IndividualChannelCapacity(
                    DiscretizeGaussian({1.0, n}, u, values, grid))
                    .value;
    }
    worst_cap = std::max({worst_cap, caps[0], caps[1]});
    worst_change = std::max(worst_change, std::abs(caps[0] - caps[1]));
  }
  out.Require(worst_cap <= 0.5 + 0.01, "discretized capacity above bound");
  out.Require(worst_change < 1e-3, "grid refinement not converged");
  out.detail = Fmt("20 assignments, max capacity %.6f nats, max refinement "
                   "change %.3g",
                   worst_cap, worst_change);
  return out;
}

Outcome DpAuditExactness() {
  Outcome out;
  double worst = 0.0;
  for (int tenth = 1; tenth <= 9; ++tenth) {
    const double p = tenth / 10.0;
    const double eps = DpEpsilon(RandomizedResponseChannel(MatchQuery(), p))
                           .epsilon_star;
    worst = std::max(worst, std::abs(eps - std::abs(std::log((1 - p) / p))));
  }
  const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), 0.25);
  const DpAuditReport r = DpEpsilon(ch);
  out.Require(worst <= 1e-12, "closed form mismatch");
  out.Require(std::abs(r.epsilon_star - std::log(3.0)) <= 1e-12, "ln 3");
  out.Require(r.witness.has_value(), "missing witness");
  if (r.witness) {
    const auto& u = ch.universe();
    const auto a = u.Decode(r.witness->dataset);
    const auto b = u.Decode(r.witness->neighbor);
    int differing = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] != b[k]) {
        ++differing;
        out.Require(k == r.witness->individual, "witness axis mismatch");
      }
    }
    out.Require(differing == 1, "witness differs in more than one record");
    const double ratio = std::log(ch(r.witness->output, r.witness->dataset) /
                                  ch(r.witness->output, r.witness->neighbor));
    out.Require(std::abs(ratio - r.epsilon_star) <= 1e-12,
                "witness ratio mismatch");
  }
  out.detail = Fmt("max |eps* - |ln((1-p)/p)|| = %.3g; match RR(0.25) eps* "
                   "= %.12f",
                   worst, r.epsilon_star);
  return out;
}

Outcome ProductPriorSampling() {
  Outcome out;
  Rng rng(7007);
  int violations = 0;
  int inconsistent = 0;
  int failing = 0;
  int converse_ok = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 500; ++trial) {
    const ChannelMatrix ch =
        testing::RandomChannel(rng, SmallSizes(rng),
                               testing::UniformSize(rng, 2, 3));
    const double eps = DpEpsilon(ch).epsilon_star;
    const auto fwd = CrossCheckProductPriors(ch, eps, 100, trial);
    violations += fwd.violations;
    inconsistent += fwd.dp_passes && fwd.consistent ? 0 : 1;
    if (eps > 0.0) {
      const double half = eps / 2;
      const auto conv = CrossCheckProductPriors(ch, half, 100, trial);
      ++failing;
      if (!conv.dp_passes && conv.converse_max && *conv.converse_max > half) {
        ++converse_ok;
        worst_margin = std::min(worst_margin, *conv.converse_max - half);
      }
    }
  }
  // Channels with zeros on a line: the converse reaches the +inf sentinel.
  int sentinel = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelMatrix ch = testing::RandomChannel(
        rng, SmallSizes(rng), testing::UniformSize(rng, 2, 3), 0.5);
    const double eps = DpEpsilon(ch).epsilon_star;
    if (!std::isinf(eps)) continue;
    const auto conv = CrossCheckProductPriors(ch, 1.0, 100, trial);
    ++failing;
    if (!conv.dp_passes && conv.converse_max && std::isinf(*conv.converse_max)) {
      ++converse_ok;
      ++sentinel;
    }
  }
  out.Require(violations == 0 && inconsistent == 0, "forward violation");
  out.Require(converse_ok == failing, "converse search missed");
  out.detail = Fmt("500 passing channels x 100 trials: %d violations; "
                   "%d/%d failing channels exceed eps (%d at +inf, min finite "
                   "margin %.3g)",
                   violations, converse_ok, failing, sentinel, worst_margin);
  return out;
}

// Cyclic-shift channel p(y|x) = z[(y - f(x)) mod k] with
// f(x1, x2) = (x1 + g(x2)) mod k over universes (k, m).
ChannelMatrix ShiftChannel(Rng& rng, std::size_t k, std::size_t m,
                           std::vector<double>& z) {
  z = testing::SimplexPoint(rng, k);
  RecordUniverse u({k, m});
  std::vector<std::size_t> g(m);
  for (std::size_t& v : g) v = testing::UniformSize(rng, 0, k - 1);
  Matrix w(k, u.size());
  for (std::size_t x = 0; x < u.size(); ++x) {
    const auto c = u.Decode(x);
    const std::size_t f = (c[0] + g[c[1]]) % k;
    for (std::size_t y = 0; y < k; ++y) w(y, x) = z[(y + k - f) % k];
  }
  return ChannelMatrix(std::move(u), std::move(w));
}

Outcome WeaklySymmetric() {
  Outcome out;
  Rng rng(8008);
  double worst_value = 0.0;
  double worst_tv = 0.0;
  int cases = 0;
  auto check = [&](const ChannelMatrix& ch, double expected) {
    ++cases;
    const auto witness = FindWeaklySymmetricWitness(ch);
    out.Require(witness.has_value(), "no weakly symmetric witness found");
    if (!witness) return;
    const double bound = DataIndependentCapacityBound(ch);
    const CapacityResult r = BlahutArimoto(ReduceChannel(ch, *witness));
    const double c = IndividualChannelCapacity(ch).value;
    const std::size_t size = r.optimizer.size();
    const std::vector<double> uniform(size, 1.0 / static_cast<double>(size));
    worst_value = std::max({worst_value, std::abs(c - expected),
                            std::abs(bound - expected),
                            std::abs(r.value - expected)});
    worst_tv = std::max(worst_tv,
                        testing::TotalVariation(r.optimizer.weights(), uniform));
  };
  {
    const ChannelMatrix ch = RandomizedResponseChannel(MatchQuery(), 0.25);
    check(ch, std::numbers::ln2 - BinaryEntropy(0.25));
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    for (std::size_t m = 1; m <= 3; ++m) {
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> z;
        const ChannelMatrix ch = ShiftChannel(rng, k, m, z);
        double hz = 0.0;
        for (double v : z) hz -= v * std::log(v);
        check(ch, std::log(static_cast<double>(k)) - hz);
      }
    }
  }
  out.Require(worst_value <= 1e-6, "capacity differs from log|Y| - H(Z)");
  out.Require(worst_tv <= 1e-4, "optimizer not uniform");
  out.detail = Fmt("%d witnesses, max |C - (log|Y| - H(Z))| = %.3g, max TV to "
                   "uniform %.3g",
                   cases, worst_value, worst_tv);
  return out;
}

Outcome RestrictedEstimator() {
  Outcome out;
  Rng rng(9009);
  std::vector<ChannelMatrix> channels{
      RandomizedResponseChannel(MatchQuery(), 0.25)};
  for (int t = 0; t < 10; ++t) {
    channels.push_back(testing::RandomChannel(
        rng, SmallSizes(rng), testing::UniformSize(rng, 2, 3)));
  }
  double worst_zero = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  bool zero_delta = true;
  for (const ChannelMatrix& ch : channels) {
    const IndividualCapacityReport cap = IndividualChannelCapacity(ch);
    double upper = 0.0;  // certified upper bound on C_1
    for (const auto& m : cap.per_individual) {
      upper = std::max(upper, m.value + m.solution.gap);
    }
    const double log_x = std::log(static_cast<double>(ch.datasets()));
    const std::vector<double> grid{0.0, 0.25 * log_x, 0.5 * log_x,
                                   0.75 * log_x, log_x};
    const BalanceReport r = BalanceDeltaBound(ch, grid);
    worst_zero = std::max(
        worst_zero, std::abs(r.points[0].restricted_lower_bound - cap.value));
    for (std::size_t j = 0; j < r.points.size(); ++j) {
      worst_excess =
          std::max(worst_excess, r.points[j].restricted_lower_bound - upper);
      if (j > 0 && r.points[j].envelope < r.points[j - 1].envelope) {
        monotone = false;
      }
    }
    zero_delta = zero_delta && r.points[0].delta == 0.0;
  }
  out.Require(worst_zero <= 1e-4, "b=0 estimate far from C_1");
  out.Require(worst_excess <= 0.0, "estimate exceeds C_1");
  out.Require(monotone, "envelope decreases");
  out.Require(zero_delta, "delta(0) nonzero");
  out.detail = Fmt("%zu channels, max |lb(0) - C_1| = %.3g, max (lb - C_1 "
                   "upper bound) = %.3g",
                   channels.size(), worst_zero, worst_excess);
  return out;
}

struct Run {
  int code;
  std::string out;
};

Run Invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCommand(args, out, err);
  return {code, out.str()};
}

Outcome CliDeterminism() {
  Outcome out;
  const std::string q = (kFixtures / "match_query.json").string();
  const std::string sum = (kFixtures / "sum_query.json").string();
  const std::string vals = (kFixtures / "values_query.json").string();
  const std::string ch = (kFixtures / "match_rr25.json").string();
  const std::vector<std::vector<std::string>> commands{
      {"mech", "rr", q, "--p", "0.25"},
      {"mech", "exp", sum, "--noise", "1.5"},
      {"mech", "gauss", vals, "--variance", "0.5819767068693265"},
      {"calibrate", "rr", "--epsilon", "0.5", "--unit", "bits"},
      {"calibrate", "exp", "--epsilon", "0.5", "--k", "4"},
      {"calibrate", "gauss", "--epsilon", "0.5", "--T", "1"},
      {"capacity", ch, "--unit", "bits"},
      {"capacity", ch, "--oracle", "--samples", "200", "--seed", "7"},
      {"audit", "dp", ch, "--epsilon", "1.1", "--trials", "50", "--seed", "3"},
      {"audit", "ip", ch, "--epsilon", "0.2", "--format", "table"},
      {"balance", ch, "--b-grid", "0,0.5,1,1.5", "--seed", "11"},
      {"compare-noise", "--epsilon-dp", "1", "--delta-prime", "1e-5",
       "--delta-f", "1", "--T", "1", "--epsilon-ip", "1"},
  };
  int identical = 0;
  for (const auto& cmd : commands) {
    const Run a = Invoke(cmd);
    const Run b = Invoke(cmd);
    std::string joined;
    for (const auto& s : cmd) joined += " " + s;
    out.Require(a.code == 0, "nonzero exit:" + joined);
    out.Require(a.out == b.out && !a.out.empty(), "output differs:" + joined);
    if (a.code == 0 && a.out == b.out) ++identical;
  }

  struct Expect {
    std::vector<std::string> args;
    int code;
  };
  std::vector<Expect> table;
  for (const char* name :
       {"bad_syntax.json", "column_sum.json", "empty_universes.json",
        "wrong_dimensions.json", "unknown_key.json", "negative_entry.json"}) {
    table.push_back(
        {{"capacity", (kFixtures / "malformed" / name).string()},
         kExitValidation});
  }
  table.push_back({{"capacity", ch, "--no-such-flag"}, kExitUsage});
  table.push_back({{"frobnicate"}, kExitUsage});
  table.push_back({{"capacity", ch, "--enum-cap", "2"}, kExitEnumerationCap});
  table.push_back({{"capacity", ch, "--max-iter", "1"}, kExitConvergence});
  int matched = 0;
  for (const Expect& e : table) {
    const int code = Invoke(e.args).code;
    std::string joined;
    for (const auto& s : e.args) joined += " " + s;
    out.Require(code == e.code, Fmt("exit %d, expected %d:", code, e.code) +
                                    joined);
    if (code == e.code) ++matched;
  }
  const std::string summary =
      Fmt("%d/%zu subcommands byte-identical; %d/%zu exit codes match", identical,
          commands.size(), matched, table.size());
  out.detail = out.pass ? summary : summary + " (" + out.detail + ")";
  return out;
}

}  // namespace
}  // namespace privchan

int main() {
  using privchan::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle-equivalence", privchan::OracleEquivalence},
      {"rr-attainment", privchan::RrAttainment},
      {"calibration-round-trips", privchan::CalibrationRoundTrips},
      {"exponential-closed-form", privchan::ExponentialClosedForm},
      {"gaussian-discretization", privchan::GaussianDiscretization},
      {"dp-audit-exactness", privchan::DpAuditExactness},
      {"product-prior-sampling", privchan::ProductPriorSampling},
      {"weakly-symmetric", privchan::WeaklySymmetric},
      {"restricted-estimator", privchan::RestrictedEstimator},
      {"cli-determinism", privchan::CliDeterminism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2d %-24s %s\n", o.pass ? "PASS" : "FAIL", index, name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
