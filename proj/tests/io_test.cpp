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

#include "rmms/io.hpp"
#include "rmms/rmms.hpp"
#include "test_util.hpp"

namespace rmms {
namespace {

TEST(Json, InstanceRoundTrip) {
  GenParams p{3, 4, ValuationKind::table, 5, std::nullopt};
  for (auto kind : {ValuationKind::additive, ValuationKind::capped_additive, ValuationKind::table}) {
    p.kind = kind;
    for (const auto& inst : generate_instances(p, 6, 5)) {
      const std::string text = to_json(inst).dump();
      EXPECT_EQ(instance_from_json(parse_json(text)), inst);
    }
  }
}

TEST(Json, InstanceLayout) {
  const Instance inst(2, {Valuation::capped_additive({4, 4}, 5), testing::add({1, 0})});
  EXPECT_EQ(to_json(inst).dump(),
            R"({"m":2,"n":2,"valuations":[{"kind":"capped_additive","values":[4,4],"cap":5},)"
            R"({"kind":"additive","values":[1,0]}]})");
}

TEST(Json, AllocationRoundTrip) {
  const PartialAllocation a(4, Bundle::single(3), {Bundle::of({0, 2}), Bundle::single(1)});
  EXPECT_EQ(to_json(a).dump(), R"({"pool":[3],"bundles":[[0,2],[1]]})");
  EXPECT_EQ(allocation_from_json(to_json(a), 4), a);
}

TEST(Json, MalformedInputs) {
  EXPECT_THROW(parse_json("{"), ValidationError);
  EXPECT_THROW(instance_from_json(parse_json(R"({"m":2})")), ValidationError);
  EXPECT_THROW(instance_from_json(parse_json(R"({"m":2,"n":2,"valuations":[]})")), ValidationError);
  EXPECT_THROW(instance_from_json(parse_json(
                   R"({"m":2,"n":1,"valuations":[{"kind":"additive","values":[1]}]})")),
               ValidationError);
  EXPECT_THROW(instance_from_json(parse_json(
                   R"({"m":2,"n":1,"valuations":[{"kind":"odd","values":[1,1]}]})")),
               ValidationError);
  EXPECT_THROW(instance_from_json(parse_json(
                   R"({"m":1,"n":1,"valuations":[{"kind":"additive","values":[-3]}]})")),
               ValidationError);
  EXPECT_THROW(allocation_from_json(parse_json(R"({"pool":[],"bundles":[[0],[0]]})"), 1),
               ValidationError);
  EXPECT_THROW(allocation_from_json(parse_json(R"({"pool":[],"bundles":[[7]]})"), 2),
               MalformedBundle);
}

TEST(Json, UncheckedTableIsReportedNotRejected) {
  const auto inst = instance_from_json(parse_json(
      R"({"m":2,"n":1,"valuations":[{"kind":"table","values":[0,2,0,1]}]})"));
  const auto report = validate_instance(inst);
  ASSERT_FALSE(report.ok());
  const Json j = to_json(report);
  EXPECT_FALSE(j.at("valid").get<bool>());
}

TEST(Json, ShareReportLayout) {
  QueryLedger q;
  const Instance inst = testing::same({1, 1, 1, 1}, 2);
  const Json j = to_json(rmms(inst, 1, q));
  EXPECT_EQ(j.at("agent"), 1);
  EXPECT_EQ(j.at("share"), "rmms");
  EXPECT_EQ(j.at("value"), 2);
  EXPECT_EQ(j.at("witness").size(), 2u);
}

TEST(Json, CertificateLayout) {
  const Instance inst = testing::same({1, 4, 4}, 2);
  const Json j = to_json(certify(inst, testing::full(3, {Bundle::single(0), Bundle::of({1, 2})})));
  EXPECT_FALSE(j.at("ef1").get<bool>());
  ASSERT_EQ(j.at("violations").size(), 1u);
  EXPECT_EQ(j.at("violations")[0].at("kind"), "EF1");
}

}  // namespace
}  // namespace rmms
