// Copyright 2026 The Contplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "contplace/workload.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "contplace/affinity.h"
#include "test_util.h"

namespace contplace {
namespace {

namespace fs = std::filesystem;

// Fresh directory per test, removed afterwards.
class TraceDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("contplace_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string &name, const std::string &body) {
    fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  fs::path dir_;
};

int RowSum(const BinaryMatrix &m, std::size_t i) {
  int sum = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j);
  return sum;
}

TEST(GeneratorTest, ZeroFractionMeansNoAntiAffinity) {
  GeneratorConfig c;
  Scenario s = GenerateSynthetic(c);
  for (std::size_t i = 0; i < s.num_applications(); ++i) EXPECT_EQ(RowSum(s.anti_affinity, i), 0);
}

TEST(GeneratorTest, AntiAffinityRowSums) {
  GeneratorConfig c;
  c.machine_count = 10;
  c.anti_affinity_fraction = 0.5;
  Scenario s = GenerateSynthetic(c);
  for (std::size_t i = 0; i < s.num_applications(); ++i) EXPECT_EQ(RowSum(s.anti_affinity, i), 5);
  EXPECT_EQ(AntiAffineMachinesPerApp(0.5, 10), 5);
  EXPECT_EQ(AntiAffineMachinesPerApp(0.25, 10), 3);  // 2.5 rounds up
  EXPECT_EQ(AntiAffineMachinesPerApp(0.9, 2), 1);    // one machine always stays open
  EXPECT_EQ(AntiAffineMachinesPerApp(0.0, 7), 0);
}

TEST(GeneratorTest, SameSeedSameScenario) {
  GeneratorConfig c;
  c.anti_affinity_fraction = 0.3;
  c.seed = 42;
  EXPECT_EQ(GenerateSynthetic(c), GenerateSynthetic(c));
  GeneratorConfig d = c;
  d.seed = 43;
  EXPECT_NE(GenerateSynthetic(c), GenerateSynthetic(d));
}

TEST(GeneratorTest, DrawsStayInRanges) {
  GeneratorConfig c;
  c.machine_count = 40;
  c.application_count = 40;
  c.anti_affinity_fraction = 0.3;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    c.seed = seed;
    Scenario s = GenerateSynthetic(c);
    ASSERT_NO_THROW(ValidateScenario(s));
    for (const Machine &m : s.machines) {
      ASSERT_GE(m.capacity.cpu, 8);
      ASSERT_LE(m.capacity.cpu, 64);
      ASSERT_GE(m.p_idle, 80);
      ASSERT_LE(m.p_idle, 150);
      ASSERT_GT(m.p_max, m.p_idle);
    }
    for (const Application &a : s.applications) {
      ASSERT_GE(a.instances, 1);
      ASSERT_LE(a.instances, 4);
      ASSERT_GE(a.demand.cpu, 1);
      ASSERT_LE(a.demand.cpu, 8);
    }
    for (std::size_t i = 0; i < s.num_applications(); ++i) {
      ASSERT_EQ(RowSum(s.anti_affinity, i), 12);
      for (std::size_t j = 0; j < s.num_machines(); ++j) {
        ASSERT_FALSE(s.user_affinity(i, j) && s.anti_affinity(i, j));
      }
    }
  }
}

TEST(GeneratorTest, UserAffinityDensity) {
  GeneratorConfig c;
  c.machine_count = 50;
  c.application_count = 50;
  c.user_affinity_density = 0.2;
  Scenario s = GenerateSynthetic(c);
  int ones = 0;
  for (std::size_t i = 0; i < 50; ++i) ones += RowSum(s.user_affinity, i);
  EXPECT_NEAR(ones / 2500.0, 0.2, 0.03);
  c.user_affinity_density = 1.0;
  s = GenerateSynthetic(c);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(RowSum(s.user_affinity, i), 50);
}

TEST(GeneratorTest, RejectsBadConfigs) {
  GeneratorConfig c;
  c.demand_ranges.cpu = {100, 200};
  EXPECT_THROW(c.Validate(), ScenarioError);
  EXPECT_THROW(GenerateSynthetic(c), ScenarioError);
  c = GeneratorConfig{};
  c.anti_affinity_fraction = 1.0;
  EXPECT_THROW(c.Validate(), ScenarioError);
  c = GeneratorConfig{};
  c.power_idle_range = {100, 250};
  EXPECT_THROW(c.Validate(), ScenarioError);
  c = GeneratorConfig{};
  c.instance_range = {3, 2};
  EXPECT_THROW(c.Validate(), ScenarioError);
  c = GeneratorConfig{};
  c.capacity_ranges.cpu = {0, 10};
  EXPECT_THROW(c.Validate(), ScenarioError);
  c = GeneratorConfig{};
  c.user_affinity_density = 1.5;
  EXPECT_THROW(c.Validate(), ScenarioError);
  c = GeneratorConfig{};
  c.machine_count = 0;
  EXPECT_THROW(c.Validate(), ScenarioError);
  EXPECT_NO_THROW(GeneratorConfig{}.Validate());
}

using TraceTest = TraceDir;

constexpr const char *kMachinesFull =
    "machine_id,cpu_cap,io_cap,nw_cap,mem_cap,p_idle,p_max\n"
    "10,8,100,100,16,100,200\n"
    "20,16,200,200,32,90,250\n";
constexpr const char *kAppsFull =
    "app_id,cpu_req,io_req,nw_req,mem_req,instances\n"
    "7,4,50,25,8,2\n"
    "3,2,10,10,2,1\n";

TEST_F(TraceTest, FullColumnsConsumeNoDraws) {
  TracePaths p{Write("m.csv", kMachinesFull), Write("a.csv", kAppsFull),
               Write("f.csv", "app_id,machine_id,user_affinity,anti_affinity\n7,20,1,0\n3,10,0,1\n")};
  Scenario a = LoadTrace(p, BackfillConfig{}, 1);
  Scenario b = LoadTrace(p, BackfillConfig{}, 999);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.num_machines(), 2u);
  EXPECT_EQ(a.machines[1].id, 1);
  EXPECT_EQ(a.machines[1].capacity, (ResourceVector{16, 200, 200, 32}));
  EXPECT_EQ(a.applications[0].instances, 2);
  EXPECT_EQ(a.user_affinity(0, 1), 1);
  EXPECT_EQ(a.anti_affinity(1, 0), 1);
  EXPECT_EQ(a.user_affinity(0, 0) + a.anti_affinity(0, 0), 0);
}

TEST_F(TraceTest, MissingPowerColumnsBackfilledBySeed) {
  TracePaths p{Write("m.csv",
                     "machine_id,cpu_cap,io_cap,nw_cap,mem_cap\n1,8,100,100,16\n2,8,100,100,16\n"),
               Write("a.csv", kAppsFull), std::nullopt};
  BackfillConfig bf;
  Scenario a = LoadTrace(p, bf, 5);
  Scenario again = LoadTrace(p, bf, 5);
  Scenario other = LoadTrace(p, bf, 6);
  EXPECT_EQ(a, again);
  EXPECT_NE(a.machines[0].p_idle, other.machines[0].p_idle);
  for (const Machine &m : a.machines) {
    EXPECT_GT(m.p_idle, 0);
    EXPECT_GE(m.p_max, m.p_idle);
    // Draws sit within a few sigma of the configured means.
    EXPECT_NEAR(m.p_idle, bf.p_idle.mean, 6 * bf.p_idle.stddev);
    EXPECT_NEAR(m.p_max, bf.p_max.mean, 6 * bf.p_max.stddev);
  }
}

TEST_F(TraceTest, BackfillMatchesConfiguredMoments) {
  std::string machines = "machine_id,cpu_cap\n";
  for (int j = 0; j < 2000; ++j) machines += std::to_string(j) + ",32\n";
  TracePaths p{Write("m.csv", machines), Write("a.csv", "app_id,cpu_req\n0,1\n"), std::nullopt};
  BackfillConfig bf;
  Scenario s = LoadTrace(p, bf, 3);
  double sum = 0, sq = 0;
  for (const Machine &m : s.machines) {
    sum += m.p_idle;
    sq += m.p_idle * m.p_idle;
  }
  double mean = sum / 2000, sd = std::sqrt(sq / 2000 - mean * mean);
  EXPECT_NEAR(mean, bf.p_idle.mean, 1.5);
  EXPECT_NEAR(sd, bf.p_idle.stddev, 1.5);
}

TEST_F(TraceTest, BlankCellsAreBackfilled) {
  TracePaths p{Write("m.csv", "machine_id,cpu_cap,io_cap,nw_cap,mem_cap,p_idle,p_max\n0,8,100,,16,,\n"),
               Write("a.csv", "app_id,cpu_req,io_req,nw_req,mem_req,instances\n0,1,1,1,1,\n"),
               std::nullopt};
  Scenario s = LoadTrace(p, BackfillConfig{}, 1);
  EXPECT_GT(s.machines[0].capacity.nw, 0);
  EXPECT_GT(s.machines[0].p_idle, 0);
  EXPECT_GE(s.applications[0].instances, 1);
}

TEST_F(TraceTest, MalformedRowReportsLine) {
  TracePaths p{Write("m.csv", "machine_id,cpu_cap\n0,8\n1,abc\n"), Write("a.csv", kAppsFull),
               std::nullopt};
  try {
    LoadTrace(p, BackfillConfig{}, 1);
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
  }

  p.machines = Write("m2.csv", "machine_id,cpu_cap\n0,8\n\n1,8,5\n");
  try {
    LoadTrace(p, BackfillConfig{}, 1);
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST_F(TraceTest, StructuralProblems) {
  fs::path apps = Write("a.csv", kAppsFull);
  auto load = [&](const std::string &machines) {
    return LoadTrace({Write("m.csv", machines), apps, std::nullopt}, BackfillConfig{}, 1);
  };
  EXPECT_THROW(load("machine_id,io_cap\n0,8\n"), ParseError);
  EXPECT_THROW(load("machine_id,cpu_cap,gpu\n0,8,1\n"), ParseError);
  EXPECT_THROW(load("machine_id,cpu_cap,cpu_cap\n0,8,8\n"), ParseError);
  EXPECT_THROW(load("machine_id,cpu_cap\n0,8\n0,8\n"), ParseError);
  EXPECT_THROW(load("machine_id,cpu_cap\n"), ParseError);
  EXPECT_THROW(load(""), ParseError);
  EXPECT_THROW(LoadTrace({dir_ / "absent.csv", apps, std::nullopt}, BackfillConfig{}, 1),
               ParseError);
  EXPECT_NO_THROW(load("\xEF\xBB\xBFmachine_id,cpu_cap\n0,8\n"));
}

TEST_F(TraceTest, NonPositiveRequiredFieldsRejected) {
  fs::path apps = Write("a.csv", kAppsFull);
  auto load = [&](const std::string &machines) {
    return LoadTrace({Write("m.csv", machines), apps, std::nullopt}, BackfillConfig{}, 1);
  };
  EXPECT_THROW(load("machine_id,cpu_cap\n0,0\n"), ScenarioError);
  EXPECT_THROW(load("machine_id,cpu_cap\n0,-4\n"), ScenarioError);
  EXPECT_THROW(load("machine_id,cpu_cap,io_cap\n0,4,-1\n"), ScenarioError);
  EXPECT_THROW(load("machine_id,cpu_cap,p_idle,p_max\n0,4,200,100\n"), ScenarioError);
  fs::path m = Write("m.csv", kMachinesFull);
  EXPECT_THROW(LoadTrace({m, Write("a2.csv", "app_id,cpu_req,instances\n0,1,0\n"), std::nullopt},
                         BackfillConfig{}, 1),
               ScenarioError);
  EXPECT_THROW(LoadTrace({m, Write("a3.csv", "app_id,cpu_req\n0,0\n"), std::nullopt},
                         BackfillConfig{}, 1),
               ScenarioError);
}

TEST_F(TraceTest, AffinityFileProblems) {
  fs::path m = Write("m.csv", kMachinesFull), a = Write("a.csv", kAppsFull);
  const std::string head = "app_id,machine_id,user_affinity,anti_affinity\n";
  auto load = [&](const std::string &body) {
    return LoadTrace({m, a, Write("f.csv", head + body)}, BackfillConfig{}, 1);
  };
  EXPECT_THROW(load("99,10,1,0\n"), ParseError);
  EXPECT_THROW(load("7,99,1,0\n"), ParseError);
  EXPECT_THROW(load("7,10,2,0\n"), ParseError);
  EXPECT_THROW(load("7,10,1,0\n7,10,0,1\n"), ParseError);
  EXPECT_THROW(load("7,10,1,1\n"), ScenarioError);
  Scenario s = load("");
  EXPECT_EQ(RowSum(s.user_affinity, 0) + RowSum(s.anti_affinity, 0), 0);
}

TEST_F(TraceTest, LargeTraceWithBackfilledInstances) {
  // 250 machines, 200 applications, instance counts left to the backfill.
  std::string machines = "machine_id,cpu_cap\n", apps = "app_id,cpu_req\n";
  for (int j = 0; j < 250; ++j) machines += std::to_string(j) + ",32\n";
  for (int i = 0; i < 200; ++i) apps += std::to_string(i) + ",2\n";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = LoadTrace({Write("m.csv", machines), Write("a.csv", apps), std::nullopt},
                           BackfillConfig{}, seed);
    EXPECT_EQ(s.num_machines(), 250u);
    EXPECT_EQ(s.num_applications(), 200u);
    EXPECT_NEAR(static_cast<double>(s.total_instances()), 600, 60);
    for (const Application &a : s.applications) {
      ASSERT_GE(a.instances, 1);
      ASSERT_LE(a.instances, 4);
    }
  }
}

TEST_F(TraceTest, WriteThenLoadRoundTrips) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario s = testing::RandomScenario(seed, 7, 6, 0.3);
    TracePaths p = WriteScenarioCsv(s, dir_ / std::to_string(seed));
    Scenario back = LoadTrace(p, BackfillConfig{}, 77);
    ASSERT_EQ(back, s) << seed;
  }
}

}  // namespace
}  // namespace contplace
