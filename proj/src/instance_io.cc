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

#include "poalab/instance_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "poalab/errors.h"

namespace poalab {

namespace {

using Json = nlohmann::ordered_json;

std::size_t LineAt(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the n-th (0-based) occurrence of `key` as a JSON key, else 1.
std::size_t LineOfKey(std::string_view text, std::string_view key,
                      std::size_t n) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  std::size_t pos = 0;
  for (std::size_t seen = 0;; ++seen) {
    pos = text.find(quoted, pos);
    if (pos == std::string_view::npos) return 1;
    if (seen == n) return LineAt(text, pos);
    pos += quoted.size();
  }
}

[[noreturn]] void Fail(std::string_view source, std::size_t line,
                       const std::string& msg) {
  throw InvalidInput(std::string(source) + ":" + std::to_string(line) + ": " +
                     msg);
}

Json Number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json RowsJson(const BidProfile& b) {
  Json rows = Json::array();
  for (const auto& r : b.rows()) rows.push_back(r);
  return rows;
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

Instance ParseInstance(std::string_view text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    Fail(source, LineAt(text, e.byte > 0 ? e.byte - 1 : 0),
         "malformed JSON");
  }
  if (!doc.is_object()) Fail(source, 1, "instance must be a JSON object");
  if (!doc.contains("k") || !doc["k"].is_number_integer() ||
      doc["k"].get<long long>() < 1) {
    Fail(source, LineOfKey(text, "k", 0), "\"k\" must be a positive integer");
  }
  const auto k = static_cast<std::size_t>(doc["k"].get<long long>());
  if (!doc.contains("bidders") || !doc["bidders"].is_array()) {
    Fail(source, LineOfKey(text, "bidders", 0), "\"bidders\" must be an array");
  }
  const Json& bidders = doc["bidders"];
  if (bidders.size() < 2) {
    Fail(source, LineOfKey(text, "bidders", 0),
         "at least two bidders are required");
  }
  std::vector<Marginals> marginals;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const std::size_t line = LineOfKey(text, "marginals", i);
    const Json& b = bidders[i];
    if (!b.is_object() || !b.contains("marginals") ||
        !b["marginals"].is_array()) {
      Fail(source, line,
           "bidder " + std::to_string(i) + " needs a \"marginals\" array");
    }
    Marginals m;
    for (const Json& x : b["marginals"]) {
      if (!x.is_number()) {
        Fail(source, line,
             "bidder " + std::to_string(i) + " has a non-numeric marginal");
      }
      m.push_back(x.get<double>());
    }
    if (m.size() != k) {
      Fail(source, line,
           "bidder " + std::to_string(i) + " has " + std::to_string(m.size()) +
               " marginals, expected " + std::to_string(k));
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!(m[j] >= 0.0) || !std::isfinite(m[j])) {
        Fail(source, line,
             "bidder " + std::to_string(i) + " marginal " + std::to_string(j) +
                 " is negative or not finite");
      }
      if (j > 0 && m[j] > m[j - 1]) {
        Fail(source, line,
             "bidder " + std::to_string(i) +
                 " marginals are increasing at position " + std::to_string(j));
      }
    }
    marginals.push_back(std::move(m));
  }
  TieBreakRule tie = TieBreakRule::IndexOrder();
  if (doc.contains("tie_break")) {
    const Json& t = doc["tie_break"];
    const std::size_t line = LineOfKey(text, "tie_break", 0);
    auto bidder_of = [&](const char* key) {
      const Json& x = t[key];
      if (!x.is_number_integer() || x.get<long long>() < 0 ||
          static_cast<std::size_t>(x.get<long long>()) >= bidders.size()) {
        Fail(source, line, std::string("\"") + key +
                               "\" must be a bidder index in [0, n)");
      }
      return static_cast<std::size_t>(x.get<long long>());
    };
    if (t.is_string() && t.get<std::string>() == "index") {
      tie = TieBreakRule::IndexOrder();
    } else if (t.is_object() && t.size() == 1 && t.contains("favor")) {
      tie = TieBreakRule::Favor(bidder_of("favor"));
    } else if (t.is_object() && t.size() == 1 && t.contains("favor_at_zero")) {
      tie = TieBreakRule::FavorAtZero(bidder_of("favor_at_zero"));
    } else {
      Fail(source, line,
           "\"tie_break\" must be \"index\", {\"favor\": i} or "
           "{\"favor_at_zero\": i}");
    }
  }
  return Instance{ValuationProfile(std::move(marginals)), tie};
}

Instance ReadInstanceFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path + ": cannot open instance file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseInstance(ss.str(), path);
}

std::string InstanceToJson(const Instance& inst) {
  Json doc;
  doc["k"] = inst.valuations.items();
  Json bidders = Json::array();
  for (std::size_t i = 0; i < inst.valuations.bidders(); ++i) {
    auto m = inst.valuations.marginals(i);
    bidders.push_back({{"marginals", Marginals(m.begin(), m.end())}});
  }
  doc["bidders"] = bidders;
  switch (inst.tie.kind()) {
    case TieBreakRule::Kind::kIndex:
      doc["tie_break"] = "index";
      break;
    case TieBreakRule::Kind::kFavor:
      doc["tie_break"] = {{"favor", inst.tie.favored()}};
      break;
    case TieBreakRule::Kind::kFavorAtZero:
      doc["tie_break"] = {{"favor_at_zero", inst.tie.favored()}};
      break;
  }
  return Dump(doc);
}

Instance GenerateInstance(std::size_t bidders, std::size_t items,
                          std::uint64_t seed) {
  if (bidders < 2 || items < 1) {
    throw InvalidInput("need at least two bidders and one item");
  }
  std::mt19937_64 rng(seed);
  std::vector<Marginals> m(bidders, Marginals(items));
  double top = 0.0;
  for (auto& row : m) {
    for (double& x : row) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::sort(row.begin(), row.end(), std::greater<>());
    double total = 0.0;
    for (double x : row) total += x;
    top = std::max(top, total);
  }
  if (top > 0.0) {
    for (auto& row : m) {
      for (double& x : row) x /= top;
    }
  }
  return Instance{ValuationProfile(std::move(m)), TieBreakRule::IndexOrder()};
}

std::string CertificateToJson(const PoACertificate& cert) {
  Json doc;
  doc["status"] = cert.status;
  doc["eq_class"] = ToString(cert.eq_class);
  doc["gamma"] = cert.gamma;
  doc["opt_welfare"] = Number(cert.opt_welfare);
  doc["worst_eq_welfare"] = Number(cert.worst_eq_welfare);
  doc["ratio"] = Number(cert.ratio);
  doc["lp"] = {{"status", cert.lp.status},
               {"rows", cert.lp.rows},
               {"cols", cert.lp.cols},
               {"iterations", cert.lp.iterations},
               {"refactorizations", cert.lp.refactorizations},
               {"rounds", cert.lp.rounds},
               {"primal_residual", Number(cert.lp.primal_residual)},
               {"dual_infeasibility", Number(cert.lp.dual_infeasibility)}};
  Json ver;
  ver["passed"] = cert.verification.passed;
  ver["epsilon"] = Number(cert.verification.epsilon);
  ver["max_violation"] = Number(cert.verification.max_violation);
  ver["worst_deviator"] = cert.verification.worst_deviator
                              ? Json(*cert.verification.worst_deviator)
                              : Json(nullptr);
  ver["worst_deviation"] = cert.verification.worst_deviation;
  ver["worst_held"] = cert.verification.worst_held
                          ? Json(*cert.verification.worst_held)
                          : Json(nullptr);
  doc["verification"] = ver;
  Json support = Json::array();
  for (const auto& b : cert.distribution.support) support.push_back(RowsJson(b));
  doc["distribution"] = {{"support", support},
                         {"mass", cert.distribution.mass}};
  return Dump(doc);
}

std::string TightReportToJson(const TightInstance& inst,
                              const TightReport& rep) {
  Json doc;
  doc["gamma"] = inst.gamma;
  doc["v"] = inst.v;
  doc["support_max"] = inst.support_max;
  doc["atom_mass"] = inst.atom_mass;
  doc["is_cce_analytic"] = rep.is_cce_analytic;
  doc["max_gain"] = Number(rep.max_gain);
  doc["continuous_gain"] = Number(rep.continuous_gain);
  doc["monotone_on_grid"] = rep.monotone_on_grid;
  doc["endpoint_bound_holds"] = rep.endpoint_bound_holds;
  doc["bidder2_no_gain"] = rep.bidder2_no_gain;
  doc["grid_size"] = rep.grid_size;
  doc["welfare"] = Number(rep.welfare);
  doc["welfare_ratio"] = Number(rep.welfare_ratio);
  if (rep.monte_carlo) {
    const auto& mc = *rep.monte_carlo;
    doc["monte_carlo"] = {{"samples", mc.samples},
                          {"welfare_mean", Number(mc.welfare_mean)},
                          {"welfare_se", Number(mc.welfare_se)},
                          {"ratio", Number(mc.ratio)},
                          {"bidder1_win_rate", Number(mc.bidder1_win_rate)},
                          {"utility_mean", Number(mc.utility_mean)},
                          {"utility_se", Number(mc.utility_se)},
                          {"welfare_within_3se", mc.welfare_within_3se}};
  }
  return Dump(doc);
}

std::string FpaReportToJson(const std::string& rule, double gamma,
                            const FpaReport& rep) {
  auto witness = [](const std::optional<FpaWitness>& w) {
    if (!w) return Json(nullptr);
    return Json{{"profile_index", w->profile_index},
                {"total_payment", Number(w->total_payment)},
                {"winning_bid_sum", Number(w->winning_bid_sum)}};
  };
  Json doc;
  doc["rule"] = rule;
  doc["gamma"] = gamma;
  doc["profiles_checked"] = rep.profiles_checked;
  doc["is_gamma_approx"] = rep.is_gamma_approx;
  doc["is_first_price_dominated"] = rep.is_first_price_dominated;
  doc["lower_violation"] = witness(rep.lower_violation);
  doc["upper_violation"] = witness(rep.upper_violation);
  return Dump(doc);
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw InvalidInput(path + ": write failed");
}

}  // namespace poalab
