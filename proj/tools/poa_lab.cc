// Copyright 2026 The poa-lab Authors
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

// poa_lab: price-of-anarchy bounds, equilibrium certificates and mechanism
// checks for hybrid multi-unit auctions.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poalab/bounds.h"
#include "poalab/corruption.h"
#include "poalab/equilibria.h"
#include "poalab/errors.h"
#include "poalab/grid_game.h"
#include "poalab/instance_io.h"
#include "poalab/tight_instance.h"

namespace {

using namespace poalab;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

std::string Fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string FmtOpt(const std::optional<double>& x) {
  return x ? Fmt(*x) : std::string();
}

Panel ParsePanel(const std::string& s) {
  if (s == "a") return Panel::kA;
  if (s == "b") return Panel::kB;
  if (s == "c") return Panel::kC;
  return Panel::kD;
}

std::vector<double> ParseList(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), x);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidInput("cannot parse number '" + item + "'");
    }
    out.push_back(x);
  }
  return out;
}

CorruptionScheme ParseRule(const std::string& rule, std::size_t bidders) {
  const auto colon = rule.find(':');
  if (colon == std::string::npos) {
    throw InvalidInput("rule must be hybrid:g, hetero:g1,...,gn or "
                       "nonuniform:a,b");
  }
  const std::string kind = rule.substr(0, colon);
  const auto args = ParseList(rule.substr(colon + 1));
  if (kind == "hybrid" && args.size() == 1) {
    return CorruptionScheme::Uniform(args[0]);
  }
  if (kind == "nonuniform" && args.size() == 2) {
    return CorruptionScheme::NonUniform(args[0], args[1]);
  }
  if (kind == "hetero") {
    if (args.size() != bidders) {
      throw InvalidInput("hetero rule needs one gamma per bidder (" +
                         std::to_string(bidders) + ")");
    }
    return CorruptionScheme::Heterogeneous(args);
  }
  throw InvalidInput("unrecognized rule '" + rule + "'");
}

std::vector<BidProfile> RandomProfiles(const ValuationProfile& v,
                                       std::size_t count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double top = std::max(v.max_marginal(), 1.0);
  std::vector<BidProfile> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<Marginals> rows(v.bidders(), Marginals(v.items()));
    for (auto& r : rows) {
      for (double& x : r) x = top * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      std::sort(r.begin(), r.end(), std::greater<>());
    }
    out.emplace_back(std::move(rows));
  }
  return out;
}

int RunBounds(const std::string& panel_name, std::size_t steps,
              const std::string& out) {
  if (steps < 2) throw InvalidInput("--steps must be at least 2");
  std::vector<double> gammas(steps);
  for (std::size_t j = 0; j < steps; ++j) {
    gammas[j] = static_cast<double>(j) / static_cast<double>(steps - 1);
  }
  const Envelope env = ComputeEnvelope(ParsePanel(panel_name), gammas);
  std::string csv = "gamma,bound,source,alpha_internal,beta_internal\n";
  for (std::size_t j = 0; j < steps; ++j) {
    const BoundResult& r = env.results[j];
    csv += Fmt(env.gammas[j]) + "," + Fmt(r.value) + "," + r.source + "," +
           FmtOpt(r.internals.alpha) + "," + FmtOpt(r.internals.beta) + "\n";
  }
  WriteFile(out, csv);
  for (const auto& c : env.crossovers) {
    std::cout << "crossover gamma=" << Fmt(c.gamma) << " " << c.from << " -> "
              << c.to << "\n";
  }
  return kExitOk;
}

int RunPoaLp(const std::string& path, double gamma, const std::string& eq,
             std::size_t steps, bool nob, const std::string& out) {
  const Instance inst = ReadInstanceFile(path);
  const ValuationProfile& v = inst.valuations;
  const StrategyGrid grid = StrategyGrid::Uniform(v, steps, nob);
  if (grid.joint_size() > kMaxJointProfiles) {
    const std::size_t hint = SuggestGridSteps(v, nob);
    throw ResourceGuard("grid " + std::to_string(steps) + " exceeds " +
                        std::to_string(kMaxJointProfiles) +
                        " joint profiles; try --grid " + std::to_string(hint));
  }
  PoACertificate cert;
  EquilibriumClass cls = EquilibriumClass::kCce;
  if (eq == "pne") {
    cls = EquilibriumClass::kPne;
    cert = WorstPneWelfare(v, grid, gamma, inst.tie);
  } else if (eq == "ce") {
    cls = EquilibriumClass::kCe;
    cert = WorstCeWelfare(v, grid, gamma, inst.tie);
  } else {
    cert = WorstCceWelfare(v, grid, gamma, inst.tie);
  }
  WriteFile(out, CertificateToJson(cert));
  BoundQuery q;
  q.gamma = gamma;
  q.setting = v.items() == 1 ? Setting::kSingleItem : Setting::kMultiUnit;
  q.nob = nob;
  q.n = v.bidders();
  q.eq = cls;
  std::cout << "status=" << cert.status << " ratio=" << Fmt(cert.ratio)
            << " opt=" << Fmt(cert.opt_welfare)
            << " worst=" << Fmt(cert.worst_eq_welfare)
            << " verified=" << (cert.verification.passed ? "yes" : "no");
  try {
    const BoundResult b = ApplicableBound(q);
    std::cout << " bound=" << Fmt(b.value) << " (" << b.source << ")";
  } catch (const InapplicableBound&) {
  }
  std::cout << "\n";
  return kExitOk;
}

int RunVerifyTight(double gamma, double value, std::size_t samples,
                   std::uint64_t seed, const std::string& out) {
  const TightInstance inst = MakeTightInstance(gamma, value);
  TightReport rep = VerifyTight(inst);
  if (samples > 0) rep.monte_carlo = SimulateTight(inst, seed, samples);
  WriteFile(out, TightReportToJson(inst, rep));
  std::cout << "is_cce_analytic=" << (rep.is_cce_analytic ? "true" : "false")
            << " max_gain=" << Fmt(rep.max_gain)
            << " continuous_gain=" << Fmt(rep.continuous_gain)
            << " welfare_ratio=" << Fmt(rep.welfare_ratio) << "\n";
  return kExitOk;
}

int RunCheckMechanism(const std::string& path, const std::string& rule,
                      std::size_t profiles, std::uint64_t seed,
                      const std::string& out) {
  const Instance inst = ReadInstanceFile(path);
  const ValuationProfile& v = inst.valuations;
  const CorruptionScheme scheme = ParseRule(rule, v.bidders());
  const PaymentRuleHandle handle = MakePaymentRule(scheme);
  const auto sample = RandomProfiles(v, profiles, seed);
  const FpaReport rep =
      CheckGammaFpa(handle, handle.gamma_claim, v.bidders(), v.items(),
                    sample, inst.tie);
  const std::string json =
      FpaReportToJson(scheme.Describe(), handle.gamma_claim, rep);
  if (out.empty()) {
    std::cout << json;
  } else {
    WriteFile(out, json);
  }
  return kExitOk;
}

int RunGenInstance(std::size_t n, std::size_t k, std::uint64_t seed,
                   const std::string& out) {
  const std::string json = InstanceToJson(GenerateInstance(n, k, seed));
  if (out.empty()) {
    std::cout << json;
  } else {
    WriteFile(out, json);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Price-of-anarchy laboratory for hybrid multi-unit auctions"};
  app.footer(
      "Two-player numeric bounds are not generalized to n players.\n"
      "POA_LAB_THREADS caps worker threads; POA_LAB_SIMD selects kernels.");
  app.require_subcommand(1);

  std::string panel = "a";
  std::size_t steps = 101;
  std::string bounds_out;
  auto* bounds = app.add_subcommand("bounds", "Emit a bound envelope as CSV");
  bounds->add_option("--panel", panel, "Panel a|b|c|d")
      ->check(CLI::IsMember({"a", "b", "c", "d"}));
  bounds->add_option("--steps", steps, "Number of gamma points (>= 2)");
  bounds->add_option("--out", bounds_out, "Output CSV")->required();

  std::string lp_instance;
  double lp_gamma = 1.0;
  std::string lp_eq = "cce";
  std::size_t lp_grid = 10;
  bool lp_nob = false;
  bool lp_overbid = false;
  std::string lp_out;
  auto* poa = app.add_subcommand(
      "poa-lp", "Worst equilibrium welfare on a discretized instance");
  poa->add_option("--instance", lp_instance, "Instance JSON")->required();
  poa->add_option("--gamma", lp_gamma, "Hybrid weight in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  poa->add_option("--eq", lp_eq, "Equilibrium class pne|ce|cce")
      ->check(CLI::IsMember({"pne", "ce", "cce"}));
  poa->add_option("--grid", lp_grid, "N: N+1 bid levels per unit")
      ->check(CLI::PositiveNumber);
  auto* nob_flag = poa->add_flag("--nob", lp_nob, "Forbid overbidding");
  auto* ob_flag = poa->add_flag("--overbid", lp_overbid, "Allow overbidding");
  nob_flag->excludes(ob_flag);
  poa->add_option("--out", lp_out, "Certificate JSON")->required();

  double vt_gamma = 1.0;
  double vt_v = 1.0;
  std::size_t vt_samples = 100000;
  std::uint64_t vt_seed = 1;
  std::string vt_out;
  auto* vt = app.add_subcommand("verify-tight",
                                "Verify the tight coarse correlated instance");
  vt->add_option("--gamma", vt_gamma, "Hybrid weight in (0, 1]");
  vt->add_option("--v", vt_v, "Value of bidder 1");
  vt->add_option("--samples", vt_samples, "Monte Carlo samples (0 to skip)");
  vt->add_option("--seed", vt_seed, "Random seed");
  vt->add_option("--out", vt_out, "Report JSON")->required();

  std::string cm_instance;
  std::string cm_rule;
  std::size_t cm_profiles = 1000;
  std::uint64_t cm_seed = 1;
  std::string cm_out;
  auto* cm = app.add_subcommand("check-mechanism",
                                "Sample-check the gamma-FPA property");
  cm->add_option("--instance", cm_instance, "Instance JSON")->required();
  cm->add_option("--rule", cm_rule,
                 "hybrid:g | hetero:g1,...,gn | nonuniform:a,b")
      ->required();
  cm->add_option("--profiles", cm_profiles, "Random profiles to check");
  cm->add_option("--seed", cm_seed, "Random seed");
  cm->add_option("--out", cm_out, "Report JSON (default stdout)");

  std::size_t gi_n = 2;
  std::size_t gi_k = 1;
  std::uint64_t gi_seed = 1;
  std::string gi_out;
  auto* gi = app.add_subcommand("gen-instance", "Random submodular instance");
  gi->add_option("--n", gi_n, "Bidders (>= 2)");
  gi->add_option("--k", gi_k, "Items (>= 1)");
  gi->add_option("--seed", gi_seed, "Random seed")->required();
  gi->add_option("--out", gi_out, "Instance JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*bounds) return RunBounds(panel, steps, bounds_out);
    if (*poa) {
      return RunPoaLp(lp_instance, lp_gamma, lp_eq, lp_grid, lp_nob, lp_out);
    }
    if (*vt) return RunVerifyTight(vt_gamma, vt_v, vt_samples, vt_seed, vt_out);
    if (*cm) {
      return RunCheckMechanism(cm_instance, cm_rule, cm_profiles, cm_seed,
                               cm_out);
    }
    if (*gi) return RunGenInstance(gi_n, gi_k, gi_seed, gi_out);
  } catch (const ResourceGuard& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InapplicableBound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitInput;
}
