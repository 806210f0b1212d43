// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "rmms/bench.hpp"

namespace rmms {
namespace {

BenchConfig single_run(ValuationKind kind, int n, int m, int trials, std::uint64_t seed) {
  BenchConfig config;
  BenchRun run;
  run.params = GenParams{n, m, kind, 10, std::nullopt};
  run.trials = trials;
  run.seed = seed;
  config.runs.push_back(run);
  return config;
}

std::vector<std::string> lines(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < csv.size()) {
    const auto end = csv.find("\r\n", start);
    out.push_back(csv.substr(start, end - start));
    start = end + 2;
  }
  return out;
}

TEST(Bench, ZeroTrialsIsHeaderOnly) {
  const auto csv = bench_csv(run_bench(single_run(ValuationKind::additive, 2, 3, 0, 1)));
  EXPECT_EQ(csv, std::string(kBenchCsvHeader) + "\r\n");
}

TEST(Bench, RowsAndColumns) {
  const auto records = run_bench(single_run(ValuationKind::additive, 3, 5, 4, 2));
  ASSERT_EQ(records.size(), 8u);
  const auto rows = lines(bench_csv(records));
  ASSERT_EQ(rows.size(), 9u);
  const auto columns = std::count(rows[0].begin(), rows[0].end(), ',');
  for (const auto& row : rows) EXPECT_EQ(std::count(row.begin(), row.end(), ','), columns);
  EXPECT_EQ(records[0].algorithm, "rmms-efx");
  EXPECT_EQ(records[1].algorithm, "rmms-efl");
  for (const auto& r : records) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_FALSE(r.wall_time_us.has_value());
    if (r.algorithm == "rmms-efx") {
      EXPECT_TRUE(r.efx);
    } else {
      EXPECT_TRUE(r.efl);
      EXPECT_EQ(r.queries.value_queries, 0u);
    }
  }
}

TEST(Bench, DeterministicAcrossJobs) {
  auto config = single_run(ValuationKind::capped_additive, 3, 6, 12, 5);
  const auto serial = bench_csv(run_bench(config));
  config.jobs = 4;
  EXPECT_EQ(bench_csv(run_bench(config)), serial);
  EXPECT_EQ(bench_csv(run_bench(config)), serial);
}

TEST(Bench, AdditiveRatioGuarantee) {
  const auto records = run_bench(single_run(ValuationKind::additive, 3, 6, 100, 7));
  const Json summary = bench_summary(records);
  ASSERT_EQ(summary.at("classes").size(), 1u);
  const Json& c = summary.at("classes")[0];
  EXPECT_EQ(c.at("guarantee"), "3/4");
  EXPECT_TRUE(c.at("guarantee_met").get<bool>());
  EXPECT_EQ(c.at("instances"), 100);
  EXPECT_EQ(c.at("efx_failures"), 0);
  EXPECT_EQ(c.at("efl_failures"), 0);
}

TEST(Bench, OversizedInstancesAreSkipped) {
  const auto records = run_bench(single_run(ValuationKind::additive, 2, 21, 1, 3));
  ASSERT_FALSE(records.empty());
  EXPECT_NE(records[0].status, "ok");
}

TEST(Bench, ConfigParsing) {
  const auto config = bench_config_from_json(parse_json(
      R"({"runs":[{"n":2,"m":4,"kind":"table","trials":3,"seed":9,"max_value":4}]})"));
  ASSERT_EQ(config.runs.size(), 1u);
  EXPECT_EQ(config.runs[0].params.kind, ValuationKind::table);
  EXPECT_EQ(config.runs[0].params.max_value, 4);
  EXPECT_THROW(bench_config_from_json(parse_json(R"({"runs":[{"n":2}]})")), ValidationError);
  EXPECT_THROW(bench_config_from_json(parse_json(
                   R"({"runs":[{"n":2,"m":4,"kind":"x","trials":1,"seed":1}]})")),
               ValidationError);
}

}  // namespace
}  // namespace rmms
