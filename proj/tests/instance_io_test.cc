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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "poalab/errors.h"

namespace poalab {
namespace {

using Json = nlohmann::json;

std::string ErrorOf(const std::string& text) {
  try {
    ParseInstance(text, "inst.json");
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

TEST(ParseInstanceTest, Valid) {
  const auto inst = ParseInstance(R"({
  "k": 2,
  "bidders": [
    {"marginals": [0.9, 0.4]},
    {"marginals": [0.7, 0.7]}
  ]
})");
  EXPECT_EQ(inst.valuations.bidders(), 2u);
  EXPECT_EQ(inst.valuations.items(), 2u);
  EXPECT_DOUBLE_EQ(inst.valuations.value(0, 2), 1.3);
  EXPECT_EQ(inst.tie, TieBreakRule::IndexOrder());
}

TEST(ParseInstanceTest, TieRules) {
  const std::string base = R"({"k": 1, "bidders": [{"marginals": [1]}, {"marginals": [0]}], "tie_break": )";
  EXPECT_EQ(ParseInstance(base + R"("index"})").tie, TieBreakRule::IndexOrder());
  EXPECT_EQ(ParseInstance(base + R"({"favor": 1}})").tie, TieBreakRule::Favor(1));
  EXPECT_EQ(ParseInstance(base + R"({"favor_at_zero": 0}})").tie,
            TieBreakRule::FavorAtZero(0));
  EXPECT_NE(ErrorOf(base + R"({"favor": 2}})").find("bidder index"),
            std::string::npos);
  EXPECT_NE(ErrorOf(base + R"("random"})"), "");
}

TEST(ParseInstanceTest, ErrorsCarryLineNumbers) {
  EXPECT_EQ(ErrorOf("{\n  \"k\": 1,\n  \"bidders\": [\n"
                    "    {\"marginals\": [1.0]},\n"
                    "    {\"marginals\": [0.5, 0.2]}\n  ]\n}"),
            "inst.json:5: bidder 1 has 2 marginals, expected 1");
  EXPECT_EQ(ErrorOf("{\n  \"k\": 2,\n  \"bidders\": [\n"
                    "    {\"marginals\": [0.2, 0.5]},\n"
                    "    {\"marginals\": [0.5, 0.2]}\n  ]\n}"),
            "inst.json:4: bidder 0 marginals are increasing at position 1");
  EXPECT_EQ(ErrorOf("{\n  \"k\": 1,\n  \"bidders\": [\n"
                    "    {\"marginals\": [-1]},\n"
                    "    {\"marginals\": [0.5]}\n  ]\n}"),
            "inst.json:4: bidder 0 marginal 0 is negative or not finite");
  EXPECT_EQ(ErrorOf("{\n  \"k\": 1,\n  \"bidders\": [\n    {\"marginals\": [1.0]},\n"
                    "    {\"marginals\": [0.5]}\n  \n}"),
            "inst.json:7: malformed JSON");
  EXPECT_EQ(ErrorOf("{\n  \"k\": 0,\n  \"bidders\": []\n}"),
            "inst.json:2: \"k\" must be a positive integer");
  EXPECT_EQ(ErrorOf("{\"k\": 1, \"bidders\": [{\"marginals\": [1]}]}"),
            "inst.json:1: at least two bidders are required");
}

TEST(ParseInstanceTest, BundledFile) {
  const auto inst = ReadInstanceFile(std::string(POA_LAB_DATA) +
                                     "/instances/two_player_v1_v0.json");
  EXPECT_EQ(inst.valuations.bidders(), 2u);
  EXPECT_EQ(inst.tie, TieBreakRule::FavorAtZero(1));
  EXPECT_THROW(ReadInstanceFile("/nonexistent/instance.json"), InvalidInput);
}

TEST(InstanceJsonTest, RoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = GenerateInstance(2 + seed % 3, 1 + seed % 4, seed);
    if (seed % 2) inst.tie = TieBreakRule::FavorAtZero(1);
    const std::string text = InstanceToJson(inst);
    const Instance back = ParseInstance(text);
    EXPECT_EQ(back.tie, inst.tie);
    ASSERT_EQ(back.valuations.bidders(), inst.valuations.bidders());
    for (std::size_t i = 0; i < inst.valuations.bidders(); ++i) {
      const auto a = inst.valuations.marginals(i);
      const auto b = back.valuations.marginals(i);
      EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    EXPECT_EQ(InstanceToJson(back), text);
  }
}

TEST(GenerateInstanceTest, DeterministicAndNormalized) {
  EXPECT_EQ(InstanceToJson(GenerateInstance(3, 2, 42)),
            InstanceToJson(GenerateInstance(3, 2, 42)));
  EXPECT_NE(InstanceToJson(GenerateInstance(3, 2, 42)),
            InstanceToJson(GenerateInstance(3, 2, 43)));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = GenerateInstance(3, 3, seed);
    double top = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      top = std::max(top, inst.valuations.value(i, 3));
      const auto m = inst.valuations.marginals(i);
      EXPECT_TRUE(std::is_sorted(m.begin(), m.end(), std::greater<>()));
    }
    EXPECT_NEAR(top, 1.0, 1e-15);
  }
  EXPECT_THROW(GenerateInstance(1, 2, 0), InvalidInput);
}

// Enumerates every split of k units among the bidders.
double BruteWelfare(const ValuationProfile& v, std::size_t i, std::size_t left) {
  if (i + 1 == v.bidders()) return v.value(i, left);
  double best = 0.0;
  for (std::size_t x = 0; x <= left; ++x) {
    best = std::max(best, v.value(i, x) + BruteWelfare(v, i + 1, left - x));
  }
  return best;
}

TEST(GenerateInstanceTest, OptimalWelfareMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const std::size_t k = 1 + seed % (12 / n);
    ASSERT_LE(n * k, 12u);
    const auto inst = GenerateInstance(n, k, seed);
    EXPECT_NEAR(OptimalWelfare(inst.valuations).value,
                BruteWelfare(inst.valuations, 0, k), 1e-12)
        << seed;
  }
}

TEST(ReportJsonTest, CertificateFields) {
  const ValuationProfile v({{1.0}, {0.5}});
  const auto g = StrategyGrid::Uniform(v, 4, true);
  const auto cert = WorstCceWelfare(v, g, 0.5, TieBreakRule::IndexOrder());
  const Json doc = Json::parse(CertificateToJson(cert));
  EXPECT_EQ(doc["status"], "optimal");
  EXPECT_EQ(doc["eq_class"], "cce");
  EXPECT_DOUBLE_EQ(doc["ratio"].get<double>(), cert.ratio);
  EXPECT_EQ(doc["distribution"]["support"].size(),
            cert.distribution.support.size());
  double total = 0.0;
  for (const auto& m : doc["distribution"]["mass"]) total += m.get<double>();
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_TRUE(doc["verification"]["passed"].get<bool>());
}

TEST(ReportJsonTest, NonFiniteBecomesNull) {
  PoACertificate cert;
  cert.status = "no-pne-on-grid";
  cert.ratio = std::nan("");
  const Json doc = Json::parse(CertificateToJson(cert));
  EXPECT_TRUE(doc["ratio"].is_null());
}

TEST(WriteFileTest, UnwritablePath) {
  EXPECT_THROW(WriteFile("/nonexistent/dir/out.json", "x"), InvalidInput);
}

}  // namespace
}  // namespace poalab
