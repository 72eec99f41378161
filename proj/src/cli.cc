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

#include "privchan/cli.h"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "privchan/balance.h"
#include "privchan/capacity.h"
#include "privchan/dp_audit.h"
#include "privchan/errors.h"
#include "privchan/io.h"
#include "privchan/mechanisms.h"

namespace privchan {
namespace {

using nlohmann::json;

struct CommonFlags {
  std::string unit = "nats";
  std::string format = "json";
};

struct SolverFlags {
  double tol = kDefaultCapacityTolerance;
  int max_iter = kDefaultMaxIterations;
  std::uint64_t enum_cap = kDefaultEnumerationCap;

  CapacityOptions options() const {
    CapacityOptions o;
    o.solver.tol = tol;
    o.solver.max_iter = max_iter;
    o.enumeration_cap = enum_cap;
    return o;
  }
};

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--unit", flags.unit, "Information unit (nats|bits)")
      ->check(CLI::IsMember({"nats", "bits"}));
  cmd->add_option("--format", flags.format, "Report format (json|table)")
      ->check(CLI::IsMember({"json", "table"}));
}

void AddSolver(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--tol", flags.tol, "Capacity bracket tolerance in nats");
  cmd->add_option("--max-iter", flags.max_iter,
                  "Blahut-Arimoto iteration limit");
  cmd->add_option("--enum-cap", flags.enum_cap,
                  "Largest selection count enumerated per individual");
}

std::vector<double> ParseRealList(const std::string& text,
                                  const std::string& flag) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    double v = 0.0;
    const char* first = text.data() + start;
    const char* last = text.data() + end;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw DomainError(flag + ": cannot parse '" +
                        std::string(first, last) + "' as a number");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

json Coordinates(const RecordUniverse& u, std::size_t x) {
  return json(u.Decode(x));
}

std::vector<double> Weights(const Distribution& d) {
  return {d.weights().begin(), d.weights().end()};
}

// ---------------------------------------------------------------------------
// Table output

void Flatten(const json& v, const std::string& path,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      Flatten(value, path.empty() ? key : path + "." + key, rows);
    }
    return;
  }
  if (v.is_array() && !v.empty() && !std::all_of(v.begin(), v.end(), [](const json& e) {
        return !e.is_array() && !e.is_object();
      })) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      Flatten(v[i], path + "[" + std::to_string(i) + "]", rows);
    }
    return;
  }
  std::string text = CanonicalDump(v);
  text.pop_back();  // trailing newline
  rows.emplace_back(path, text);
}

std::string RenderTable(const json& report, bool color) {
  std::vector<std::pair<std::string, std::string>> rows;
  Flatten(report, "", rows);
  std::size_t width = 5;
  for (const auto& [key, value] : rows) width = std::max(width, key.size());
  std::string out;
  const std::string header = "field" + std::string(width - 5 + 2, ' ') + "value";
  out += color ? "\x1b[1m" + header + "\x1b[0m\n" : header + "\n";
  for (const auto& [key, value] : rows) {
    out += key + std::string(width - key.size() + 2, ' ') + value + "\n";
  }
  return out;
}

void Emit(const json& report, const CommonFlags& flags, std::ostream& out) {
  if (flags.format == "table") {
    const bool color = &out == &std::cout && ::isatty(STDOUT_FILENO) &&
                       std::getenv("NO_COLOR") == nullptr;
    out << RenderTable(report, color);
  } else {
    out << CanonicalDump(report);
  }
}

// ---------------------------------------------------------------------------
// Commands

json CapacityJson(const IndividualCapacityReport& r, const ChannelMatrix& ch,
                  InfoUnit unit) {
  json per = json::array();
  for (const IndividualMaximum& m : r.per_individual) {
    per.push_back({{"individual", m.individual + 1},
                   {"capacity", FromNats(m.value, unit)},
                   {"selection", m.selection.choices},
                   {"selections_total", m.evaluated},
                   {"selections_distinct", m.distinct}});
  }
  json doc{{"capacity", r.value_in(unit)},
           {"unit", UnitName(unit)},
           {"individual", r.individual + 1},
           {"selection", r.selection.choices},
           {"optimizer", Weights(r.solution.optimizer)},
           {"gap", FromNats(r.solution.gap, unit)},
           {"iterations", r.solution.iterations},
           {"per_individual", std::move(per)}};
  doc["data_independent"] = IsDataIndependent(ch);
  if (doc["data_independent"].get<bool>()) {
    doc["data_independent_bound"] = DataIndependentCapacityBound(ch, unit);
  }
  return doc;
}

json DpJson(const DpAuditReport& r, const ChannelMatrix& ch, InfoUnit unit) {
  json doc{{"epsilon", FromNats(r.epsilon, unit)},
           {"epsilon_star", FromNats(r.epsilon_star, unit)},
           {"pass", r.pass},
           {"unit", UnitName(unit)}};
  if (r.witness) {
    const RecordUniverse& u = ch.universe();
    doc["witness"] = {{"output", r.witness->output},
                      {"dataset", Coordinates(u, r.witness->dataset)},
                      {"neighbor", Coordinates(u, r.witness->neighbor)},
                      {"individual", r.witness->individual + 1}};
  } else {
    doc["witness"] = nullptr;
  }
  return doc;
}

}  // namespace

int RunCommand(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Construct, calibrate and audit information-privacy channels",
               "privchan"};
  app.require_subcommand(1);

  CommonFlags common;
  SolverFlags solver;
  std::function<json()> action;
  InfoUnit unit = InfoUnit::kNats;
  auto in_unit = [&](double v) { return ToNats(v, unit); };

  // mech -------------------------------------------------------------------
  auto* mech = app.add_subcommand("mech", "Build a channel from a query file");
  mech->require_subcommand(1);
  std::string query_path;
  std::string output_path;
  double flip = 0.0;
  bool allow_endpoints = false;
  auto* mech_rr = mech->add_subcommand("rr", "Randomized response channel");
  mech_rr->add_option("query", query_path, "Query file")->required();
  mech_rr->add_option("--p", flip, "Flip probability")->required();
  mech_rr->add_flag("--allow-endpoints", allow_endpoints,
                    "Permit p = 0 or p = 1");
  double noise = 0.0;
  auto* mech_exp = mech->add_subcommand("exp", "Discrete exponential channel");
  mech_exp->add_option("query", query_path, "Query file")->required();
  mech_exp->add_option("--noise", noise, "Noise parameter N (lambda = 1/N)")
      ->required();
  double variance = 0.0;
  double range_bound = 0.0;
  std::string grid_text;
  auto* mech_gauss =
      mech->add_subcommand("gauss", "Gaussian channel on an output grid");
  mech_gauss->add_option("query", query_path, "Query file with values")
      ->required();
  mech_gauss->add_option("--variance", variance, "Noise variance N")
      ->required();
  mech_gauss->add_option("--T", range_bound,
                         "Output range bound (default max |value|)");
  mech_gauss->add_option("--grid", grid_text, "lo,hi,step");
  for (auto* cmd : {mech_rr, mech_exp, mech_gauss}) {
    AddCommon(cmd, common);
    cmd->add_option("-o,--output", output_path, "Write the channel here");
  }
  auto finish_mech = [&](ChannelMatrix channel, std::string name) -> json {
    ChannelFile file{std::move(channel), std::move(name), "nats"};
    json doc = ChannelToJson(file);
    if (output_path.empty()) return doc;
    std::ofstream f(output_path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + output_path);
    f << CanonicalDump(doc);
    return json{{"output", output_path},
                {"datasets", file.channel.datasets()},
                {"output_size", file.channel.output_size()}};
  };
  mech_rr->callback([&] {
    action = [&] {
      QueryFile q = LoadQuery(query_path);
      std::ostringstream name;
      name << "randomized-response p=" << flip;
      return finish_mech(
          RandomizedResponseChannel(q.query, flip, allow_endpoints),
          name.str());
    };
  });
  mech_exp->callback([&] {
    action = [&] {
      QueryFile q = LoadQuery(query_path);
      DistortionTable d =
          q.distortion ? *q.distortion
                       : DistortionTable::AbsoluteDifference(
                             q.query.output_size());
      std::ostringstream name;
      name << "exponential N=" << noise;
      return finish_mech(ExponentialChannel(q.query, d, noise), name.str());
    };
  });
  mech_gauss->callback([&] {
    action = [&] {
      QueryFile q = LoadQuery(query_path);
      if (!q.values) throw SchemaError("/values", "required for gauss");
      double t = range_bound;
      if (t == 0.0) {
        for (double v : *q.values) t = std::max(t, std::abs(v));
      }
      const double sigma = std::sqrt(variance);
      OutputGrid grid{-(t + 7 * sigma), t + 7 * sigma, sigma / 20};
      if (!grid_text.empty()) {
        const auto g = ParseRealList(grid_text, "--grid");
        if (g.size() != 3) throw DomainError("--grid expects lo,hi,step");
        grid = OutputGrid{g[0], g[1], g[2]};
      }
      std::ostringstream name;
      name << "gaussian N=" << variance << " T=" << t;
      return finish_mech(DiscretizeGaussian(GaussianSpec{t, variance},
                                            q.query.universe(), *q.values,
                                            grid),
                         name.str());
    };
  });

  // calibrate --------------------------------------------------------------
  auto* calibrate = app.add_subcommand("calibrate", "Noise for a budget");
  calibrate->require_subcommand(1);
  double epsilon = 0.0;
  std::size_t k = 0;
  auto* cal_rr = calibrate->add_subcommand("rr", "Randomized response");
  auto* cal_exp = calibrate->add_subcommand("exp", "Exponential channel");
  cal_exp->add_option("--k", k, "Output alphabet size")->required();
  auto* cal_gauss = calibrate->add_subcommand("gauss", "Gaussian channel");
  cal_gauss->add_option("--T", range_bound, "Output range bound")->required();
  for (auto* cmd : {cal_rr, cal_exp, cal_gauss}) {
    AddCommon(cmd, common);
    cmd->add_option("--epsilon", epsilon, "Privacy budget")->required();
  }
  cal_rr->callback([&] {
    action = [&] {
      const RrCalibration c = RrCalibrate(epsilon, unit);
      return json{{"mechanism", "rr"},
                  {"epsilon", epsilon},
                  {"unit", UnitName(unit)},
                  {"p_star", c.p_star},
                  {"interval", {c.lower, c.upper}}};
    };
  });
  cal_exp->callback([&] {
    action = [&] {
      const double lambda = ExponentialCalibrate(in_unit(epsilon), k);
      return json{{"mechanism", "exp"},
                  {"epsilon", epsilon},
                  {"unit", UnitName(unit)},
                  {"k", k},
                  {"lambda_star", lambda},
                  {"noise_min", std::isinf(lambda) ? 0.0 : 1.0 / lambda}};
    };
  });
  cal_gauss->callback([&] {
    action = [&] {
      const double n = GaussianCalibrate(in_unit(epsilon), range_bound);
      return json{{"mechanism", "gauss"},
                  {"epsilon", epsilon},
                  {"unit", UnitName(unit)},
                  {"T", range_bound},
                  {"variance", n},
                  {"stddev", std::sqrt(n)},
                  {"capacity_bound",
                   FromNats(GaussianCapacityBound(range_bound, n), unit)}};
    };
  });

  // capacity ---------------------------------------------------------------
  std::string channel_path;
  bool oracle = false;
  int samples = 1000;
  std::uint64_t seed = 0;
  auto* capacity =
      app.add_subcommand("capacity", "Individual channel capacity");
  capacity->add_option("channel", channel_path, "Channel file")->required();
  AddCommon(capacity, common);
  AddSolver(capacity, solver);
  capacity->add_flag("--oracle", oracle,
                     "Cross-check with sampled adversary kernels");
  capacity->add_option("--samples", samples, "Oracle sample count");
  capacity->add_option("--seed", seed, "Oracle seed");
  capacity->callback([&] {
    action = [&] {
      const ChannelFile f = LoadChannel(channel_path);
      const CapacityOptions opts = solver.options();
      const auto report = IndividualChannelCapacity(f.channel, opts);
      json doc = CapacityJson(report, f.channel, unit);
      if (oracle) {
        OracleOptions o;
        o.samples = samples;
        o.seed = seed;
        o.solver = opts.solver;
        json per = json::array();
        double best = 0.0;
        for (std::size_t i = 0; i < f.channel.universe().individuals(); ++i) {
          const double v = BruteForceCapacityOracle(f.channel, i, o);
          best = std::max(best, v);
          per.push_back(FromNats(v, unit));
        }
        doc["oracle"] = {{"samples", samples},
                         {"seed", seed},
                         {"capacity", FromNats(best, unit)},
                         {"per_individual", std::move(per)}};
      }
      return doc;
    };
  });

  // audit ------------------------------------------------------------------
  auto* audit = app.add_subcommand("audit", "Check a privacy budget");
  audit->require_subcommand(1);
  int trials = 0;
  auto* audit_dp = audit->add_subcommand("dp", "epsilon-differential privacy");
  audit_dp->add_option("--trials", trials,
                       "Product-prior cross-check trials (0 = skip)");
  audit_dp->add_option("--seed", seed, "Cross-check seed");
  auto* audit_ip = audit->add_subcommand("ip", "epsilon-information privacy");
  AddSolver(audit_ip, solver);
  for (auto* cmd : {audit_dp, audit_ip}) {
    cmd->add_option("channel", channel_path, "Channel file")->required();
    cmd->add_option("--epsilon", epsilon, "Privacy budget")->required();
    AddCommon(cmd, common);
  }
  audit_dp->callback([&] {
    action = [&] {
      const ChannelFile f = LoadChannel(channel_path);
      const double eps = in_unit(epsilon);
      json doc = DpJson(CheckDp(f.channel, eps), f.channel, unit);
      if (trials > 0) {
        const auto c = CrossCheckProductPriors(f.channel, eps, trials, seed);
        json cc{{"trials", c.trials},
                {"seed", seed},
                {"consistent", c.consistent}};
        if (c.dp_passes) {
          cc["max_sampled"] = FromNats(c.max_sampled, unit);
          cc["violations"] = c.violations;
        } else {
          cc["converse_max"] = FromNats(*c.converse_max, unit);
        }
        doc["cross_check"] = std::move(cc);
      }
      return doc;
    };
  });
  audit_ip->callback([&] {
    action = [&] {
      const ChannelFile f = LoadChannel(channel_path);
      const auto report = IndividualChannelCapacity(f.channel, solver.options());
      return json{{"epsilon", epsilon},
                  {"capacity", report.value_in(unit)},
                  {"gap", FromNats(report.solution.gap, unit)},
                  {"individual", report.individual + 1},
                  {"pass", report.value <= in_unit(epsilon)},
                  {"unit", UnitName(unit)}};
    };
  });

  // balance ----------------------------------------------------------------
  std::string grid_list;
  int restarts = 8;
  auto* balance = app.add_subcommand(
      "balance", "Upper-bound estimates of the balance function");
  balance->add_option("channel", channel_path, "Channel file")->required();
  balance->add_option("--b-grid", grid_list, "Entropy floors a,b,c")
      ->required();
  balance->add_option("--restarts", restarts, "Random starts per search");
  balance->add_option("--seed", seed, "Search seed");
  AddCommon(balance, common);
  AddSolver(balance, solver);
  balance->callback([&] {
    action = [&] {
      const ChannelFile f = LoadChannel(channel_path);
      std::vector<double> grid = ParseRealList(grid_list, "--b-grid");
      for (double& b : grid) b = in_unit(b);
      RestrictedSearchOptions search;
      search.restarts = restarts;
      search.seed = seed;
      const BalanceReport r =
          BalanceDeltaBound(f.channel, grid, search, solver.options());
      json points = json::array();
      for (const BalancePoint& p : r.points) {
        points.push_back({{"b", FromNats(p.b, unit)},
                          {"restricted_lower_bound",
                           FromNats(p.restricted_lower_bound, unit)},
                          {"delta_upper_bound", FromNats(p.delta, unit)},
                          {"envelope", FromNats(p.envelope, unit)}});
      }
      json doc{{"capacity", FromNats(r.capacity, unit)},
               {"unit", UnitName(unit)},
               {"restarts", restarts},
               {"seed", seed},
               {"points", std::move(points)}};
      doc["zero_cross_check"] =
          r.zero_cross_check ? json(*r.zero_cross_check) : json(nullptr);
      return doc;
    };
  });

  // compare-noise ----------------------------------------------------------
  double epsilon_dp = 0.0;
  double delta_prime = 0.0;
  double sensitivity = 0.0;
  double epsilon_ip = 0.0;
  double delta_balance = 0.0;
  auto* compare = app.add_subcommand(
      "compare-noise", "Noise scales of DP mechanisms and the Gaussian channel");
  compare->add_option("--epsilon-dp", epsilon_dp, "DP budget (nats)")
      ->required();
  compare->add_option("--delta-prime", delta_prime, "DP failure probability")
      ->required();
  compare->add_option("--delta-f", sensitivity, "Global sensitivity")
      ->required();
  compare->add_option("--T", range_bound, "Output range bound")->required();
  compare->add_option("--epsilon-ip", epsilon_ip,
                      "Information-privacy budget (in --unit)")
      ->required();
  compare->add_option("--delta-balance", delta_balance,
                      "Balance-function allowance (in --unit)");
  AddCommon(compare, common);
  compare->callback([&] {
    action = [&] {
      const NoiseScaleReport r =
          CompareNoiseScales(epsilon_dp, delta_prime, sensitivity, range_bound,
                             in_unit(epsilon_ip), in_unit(delta_balance));
      return json{
          {"laplace", {{"scale", r.laplace}, {"regime", "epsilon-DP"}}},
          {"gaussian_mechanism",
           {{"scale", r.gaussian_mechanism},
            {"regime", "(epsilon, delta')-DP"}}},
          {"privacy_channel",
           {{"scale", r.privacy_channel},
            {"regime", "epsilon-information privacy"}}},
          {"inputs",
           {{"epsilon_dp", epsilon_dp},
            {"delta_prime", delta_prime},
            {"delta_f", sensitivity},
            {"T", range_bound},
            {"epsilon_ip", epsilon_ip},
            {"delta_balance", delta_balance},
            {"unit", UnitName(unit)}}}};
    };
  });

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("privchan");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    unit = ParseUnit(common.unit);
    Emit(action(), common, out);
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "privchan: convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const EnumerationTooLargeError& e) {
    err << "privchan: enumeration cap exceeded: " << e.what() << "\n";
    return kExitEnumerationCap;
  } catch (const ValidationError& e) {
    err << "privchan: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "privchan: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace privchan
