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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("poa_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult Run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(POA_LAB_BIN) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  fs::path WriteInstance(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
    return Path(name);
  }

  // Rows of a bounds CSV, keyed by the gamma column text.
  std::vector<std::vector<std::string>> Csv(const fs::path& p) const {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(Slurp(p));
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (!line.empty() && line.back() == ',') cells.emplace_back();
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
};

const std::string kBundled =
    std::string(POA_LAB_DATA) + "/instances/two_player_v1_v0.json";

TEST_F(CliTest, BoundsTwoSteps) {
  const RunResult r = Run("bounds --panel a --steps 2 --out " + Path("a.csv").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = Csv(Path("a.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"gamma", "bound", "source",
                                               "alpha_internal", "beta_internal"}));
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[1][1], "inf");
  EXPECT_EQ(rows[2][0], "1");
  EXPECT_NEAR(std::stod(rows[2][1]), 1.581977, 1e-6);
  EXPECT_NE(r.out.find("crossover"), std::string::npos);
}

TEST_F(CliTest, BoundsSpotValues) {
  struct Spot {
    const char* panel;
    std::size_t row;
    double value;
  };
  for (const Spot& s : {Spot{"a", 100, 1.5819767068693265},
                        Spot{"a", 50, 2.3130352854993315},
                        Spot{"b", 30, 2.625312385951799},
                        Spot{"c", 20, 1.25},
                        Spot{"d", 50, 1.2958820443592856},
                        Spot{"d", 75, 1.2584834767132413}}) {
    const fs::path out = Path(std::string(s.panel) + ".csv");
    ASSERT_EQ(Run(std::string("bounds --panel ") + s.panel +
                  " --steps 101 --out " + out.string())
                  .code,
              0);
    const auto rows = Csv(out);
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_NEAR(std::stod(rows[s.row + 1][1]), s.value, 1e-3) << s.panel;
  }
}

TEST_F(CliTest, BoundsErrors) {
  EXPECT_EQ(Run("bounds --panel a --steps 1 --out " + Path("x.csv").string()).code, 2);
  EXPECT_EQ(Run("bounds --panel e --out " + Path("x.csv").string()).code, 2);
  EXPECT_EQ(Run("bounds --panel a --out /nonexistent/dir/x.csv").code, 2);
  EXPECT_EQ(Run("nonsense").code, 2);
}

TEST_F(CliTest, PoaLpBundledInstance) {
  const RunResult r = Run("poa-lp --instance " + kBundled +
                          " --gamma 1 --eq cce --grid 20 --overbid --out " +
                          Path("cert.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(Slurp(Path("cert.json")));
  EXPECT_EQ(doc["status"], "optimal");
  EXPECT_LE(doc["ratio"].get<double>(), 1.582);
  EXPECT_TRUE(doc["verification"]["passed"].get<bool>());
  EXPECT_NE(r.out.find("bound="), std::string::npos);
}

TEST_F(CliTest, PoaLpSecondPriceEfficient) {
  const auto inst = WriteInstance(
      "sp.json", R"({"k": 1, "bidders": [{"marginals": [1.0]}, {"marginals": [0.5]}]})");
  const RunResult r = Run("poa-lp --instance " + inst.string() +
                          " --gamma 0 --eq cce --grid 10 --nob --out " +
                          Path("cert.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(Slurp(Path("cert.json")));
  EXPECT_NEAR(doc["ratio"].get<double>(), 1.0, 1e-9);
}

TEST_F(CliTest, PoaLpNoPne) {
  const auto inst = WriteInstance(
      "nopne.json",
      R"({"k": 2, "bidders": [{"marginals": [0.75, 0.25]}, {"marginals": [0.75, 0.25]}]})");
  const RunResult r = Run("poa-lp --instance " + inst.string() +
                          " --gamma 0.25 --eq pne --grid 2 --nob --out " +
                          Path("cert.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(Slurp(Path("cert.json")));
  EXPECT_EQ(doc["status"], "no-pne-on-grid");
  EXPECT_TRUE(doc["distribution"]["support"].empty());
  EXPECT_TRUE(doc["ratio"].is_null());
}

TEST_F(CliTest, PoaLpErrors) {
  const auto bad = WriteInstance("bad.json", "{\n  \"k\": 1,\n  \"bidders\": [\n    {\"marginals\": [1.0]}\n  ]\n}");
  RunResult r = Run("poa-lp --instance " + bad.string() + " --out " +
                    Path("c.json").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.json:3:"), std::string::npos) << r.err;

  r = Run("poa-lp --instance " + kBundled + " --nob --overbid --out " +
          Path("c.json").string());
  EXPECT_EQ(r.code, 2);

  const auto big = WriteInstance(
      "big.json",
      R"({"k": 2, "bidders": [{"marginals": [1, 1]}, {"marginals": [1, 1]}, {"marginals": [1, 1]}]})");
  r = Run("poa-lp --instance " + big.string() + " --grid 60 --out " +
          Path("c.json").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("try --grid"), std::string::npos) << r.err;
}

TEST_F(CliTest, VerifyTight) {
  const RunResult r = Run("verify-tight --gamma 0.5 --v 1.0 --samples 20000 --seed 3 --out " +
                          Path("t.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(Slurp(Path("t.json")));
  EXPECT_FALSE(doc["is_cce_analytic"].get<bool>());
  EXPECT_GT(doc["max_gain"].get<double>(), 0.0);
  EXPECT_LE(doc["continuous_gain"].get<double>(), 1e-10);
  EXPECT_NEAR(doc["welfare_ratio"].get<double>(),
              1.0 / (0.5 * (1.0 - std::exp(-2.0))), 1e-12);
  EXPECT_EQ(doc["monte_carlo"]["samples"].get<std::size_t>(), 20000u);
  ASSERT_EQ(Run("verify-tight --gamma 1 --samples 0 --out " + Path("t1.json").string())
                .code,
            0);
  EXPECT_TRUE(Json::parse(Slurp(Path("t1.json")))["is_cce_analytic"].get<bool>());
  EXPECT_EQ(Run("verify-tight --gamma 0 --out " + Path("t.json").string()).code, 2);
}

TEST_F(CliTest, CheckMechanism) {
  RunResult r = Run("check-mechanism --instance " + kBundled + " --rule hybrid:0.4");
  ASSERT_EQ(r.code, 0) << r.err;
  Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["is_gamma_approx"].get<bool>());
  EXPECT_EQ(doc["profiles_checked"].get<std::size_t>(), 1000u);

  r = Run("check-mechanism --instance " + kBundled + " --rule nonuniform:0.5,0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  doc = Json::parse(r.out);
  EXPECT_EQ(doc["gamma"].get<double>(), 0.75);

  r = Run("check-mechanism --instance " + kBundled + " --rule hetero:0.2,0.9");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["gamma"].get<double>(), 0.2);

  EXPECT_EQ(Run("check-mechanism --instance " + kBundled + " --rule hetero:0.2").code, 2);
  EXPECT_EQ(Run("check-mechanism --instance " + kBundled + " --rule bogus").code, 2);
}

TEST_F(CliTest, GenInstanceDeterministic) {
  const RunResult a = Run("gen-instance --n 3 --k 2 --seed 9");
  const RunResult b = Run("gen-instance --n 3 --k 2 --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Json doc = Json::parse(a.out);
  EXPECT_EQ(doc["k"], 2);
  EXPECT_EQ(doc["bidders"].size(), 3u);
  EXPECT_NE(a.out, Run("gen-instance --n 3 --k 2 --seed 10").out);
  EXPECT_EQ(Run("gen-instance --n 1 --k 2 --seed 9").code, 2);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  ASSERT_EQ(Run("gen-instance --n 2 --k 2 --seed 4 --out " + Path("i.json").string()).code, 0);
  const std::string args = "poa-lp --instance " + Path("i.json").string() +
                           " --gamma 0.5 --eq ce --grid 4 --nob --out ";
  ASSERT_EQ(Run(args + Path("c1.json").string()).code, 0);
  ASSERT_EQ(Run(args + Path("c2.json").string()).code, 0);
  EXPECT_EQ(Slurp(Path("c1.json")), Slurp(Path("c2.json")));
  ASSERT_EQ(Run("verify-tight --gamma 0.3 --samples 5000 --seed 8 --out " + Path("t1.json").string()).code, 0);
  ASSERT_EQ(Run("verify-tight --gamma 0.3 --samples 5000 --seed 8 --out " + Path("t2.json").string()).code, 0);
  EXPECT_EQ(Slurp(Path("t1.json")), Slurp(Path("t2.json")));
}

}  // namespace
