// Copyright 2026 The MIRisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mirisk/distance.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace mirisk {
namespace {

Schema TwoFeatureSchema(double lo, double hi) {
  return {{"x", FeatureKind::kNumeric, NumericRange{lo, hi}, true},
          {"c", FeatureKind::kCategorical, std::nullopt, false}};
}

TEST(GowerTest, WorkedMixedExample) {
  const Schema schema = TwoFeatureSchema(0, 10);
  absl::StatusOr<Table> a = Table::FromRows(schema, {{2.0, std::string("A")}});
  absl::StatusOr<Table> b = Table::FromRows(schema, {{7.0, std::string("B")}});
  ASSERT_TRUE(a.ok() && b.ok());
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*a, *b, true);
  ASSERT_TRUE(ctx.ok());
  absl::StatusOr<double> d = GowerDistance(*a, 0, *b, 0, *ctx);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(*d, 0.75);
}

TEST(GowerTest, ClampsValuesOutsideTheDeclaredRange) {
  const Schema schema = TwoFeatureSchema(0, 1);
  absl::StatusOr<Table> a = Table::FromRows(schema, {{0.0, std::string("A")}});
  absl::StatusOr<Table> b = Table::FromRows(schema, {{5.0, std::string("A")}});
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*a, *b, true);
  ASSERT_TRUE(ctx.ok());
  EXPECT_EQ(*GowerDistance(*a, 0, *b, 0, *ctx), 0.5);
}

TEST(GowerTest, ConstantNumericFeatureActsAsMatch) {
  const Schema schema = {{"x", FeatureKind::kNumeric, std::nullopt, false},
                         {"y", FeatureKind::kNumeric, std::nullopt, false}};
  absl::StatusOr<Table> a = Table::FromRows(schema, {{3.0, 0.0}, {3.0, 1.0}});
  absl::StatusOr<Table> b = Table::FromRows(schema, {{3.0, 0.5}});
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*a, *b, true);
  ASSERT_TRUE(ctx.ok());
  EXPECT_EQ(ctx->term(0), GowerContext::Term::kMismatch);
  EXPECT_THAT(ctx->ConstantFeatures(), ::testing::ElementsAre("x"));
  EXPECT_EQ(*GowerDistance(*a, 0, *b, 0, *ctx), 0.25);
}

TEST(GowerTest, UnnormalizedUsesRawDifferences) {
  const Schema schema = TwoFeatureSchema(0, 10);
  absl::StatusOr<Table> a = Table::FromRows(schema, {{2.0, std::string("A")}});
  absl::StatusOr<Table> b = Table::FromRows(schema, {{7.0, std::string("B")}});
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*a, *b, false);
  ASSERT_TRUE(ctx.ok());
  EXPECT_EQ(*GowerDistance(*a, 0, *b, 0, *ctx), 3.0);
}

TEST(GowerTest, RangesComeFromBothTables) {
  const Schema schema = {{"x", FeatureKind::kNumeric, std::nullopt, false}};
  absl::StatusOr<Table> a = Table::FromRows(schema, {{0.0}, {1.0}});
  absl::StatusOr<Table> b = Table::FromRows(schema, {{4.0}});
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*a, *b, true);
  ASSERT_TRUE(ctx.ok());
  EXPECT_EQ(ctx->range(0), 4.0);
}

TEST(GowerTest, SymmetricAndBounded) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const Schema schema = testing::RandomSchema(rng, 2 + rep);
    const Table a = testing::RandomTable(schema, 30, rng);
    const Table b = testing::RandomTable(schema, 30, rng, 2.0);
    absl::StatusOr<GowerContext> ctx = GowerContext::Create(a, b, true);
    ASSERT_TRUE(ctx.ok());
    absl::StatusOr<EncodedTable> ea = ctx->Encode(a);
    absl::StatusOr<EncodedTable> eb = ctx->Encode(b);
    ASSERT_TRUE(ea.ok() && eb.ok());
    for (size_t i = 0; i < a.num_rows(); ++i) {
      EXPECT_EQ(GowerDistance(ea->row(i), ea->row(i), *ctx), 0.0);
      for (size_t j = 0; j < b.num_rows(); ++j) {
        const double d = GowerDistance(ea->row(i), eb->row(j), *ctx);
        EXPECT_EQ(d, GowerDistance(eb->row(j), ea->row(i), *ctx));
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 1.0);
      }
    }
  }
}

TEST(GowerTest, EncodeRejectsUnknownCategories) {
  const Schema schema = TwoFeatureSchema(0, 1);
  absl::StatusOr<Table> a = Table::FromRows(schema, {{0.0, std::string("A")}});
  absl::StatusOr<Table> c = Table::FromRows(schema, {{0.0, std::string("Z")}});
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*a, *a, true);
  ASSERT_TRUE(ctx.ok());
  EXPECT_FALSE(ctx->Encode(*c).ok());
}

class MinDistancesTest : public ::testing::TestWithParam<int> {};

TEST_P(MinDistancesTest, MatchesNaiveDoubleLoopBitExactly) {
  std::mt19937_64 rng(100 + GetParam());
  std::uniform_int_distribution<size_t> features(5, 15);
  const Schema schema = testing::RandomSchema(rng, features(rng));
  const Table queries = testing::RandomTable(schema, 150, rng);
  const Table reference = testing::RandomTable(schema, 170, rng, 0.5);
  for (bool normalize : {true, false}) {
    absl::StatusOr<GowerContext> ctx =
        GowerContext::Create(queries, reference, normalize);
    ASSERT_TRUE(ctx.ok());
    const std::vector<double> expected =
        testing::OracleNearest(queries, reference, normalize);
    for (int threads : {1, 3, 8}) {
      const std::vector<double> got = MinDistances(
          *ctx->Encode(queries), *ctx->Encode(reference), *ctx, threads);
      ASSERT_EQ(got.size(), expected.size());
      for (size_t i = 0; i < got.size(); ++i) {
        ASSERT_EQ(got[i], expected[i]) << "row " << i << " threads " << threads;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(RandomSchemas, MinDistancesTest,
                         ::testing::Range(0, 6));

TEST(MinDistancesTest, SupersetReferenceNeverIncreasesDistance) {
  std::mt19937_64 rng(8);
  const Schema schema = testing::RandomSchema(rng, 7);
  const Table queries = testing::RandomTable(schema, 60, rng);
  const Table small = testing::RandomTable(schema, 40, rng);
  const Table extra = testing::RandomTable(schema, 40, rng, 1.0);
  absl::StatusOr<Table> large = Table::Concat(small, extra);
  ASSERT_TRUE(large.ok());
  absl::StatusOr<Table> all = Table::Concat(queries, *large);
  ASSERT_TRUE(all.ok());
  // One context so both scans use the same ranges.
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(*all, *all, true);
  ASSERT_TRUE(ctx.ok());
  const EncodedTable q = *ctx->Encode(queries);
  const std::vector<double> d_small =
      MinDistances(q, *ctx->Encode(small), *ctx, 1);
  const std::vector<double> d_large =
      MinDistances(q, *ctx->Encode(*large), *ctx, 2);
  for (size_t i = 0; i < q.num_rows; ++i) EXPECT_LE(d_large[i], d_small[i]);
}

TEST(MinDistancesTest, ExactCopyHasDistanceZero) {
  std::mt19937_64 rng(4);
  const Schema schema = testing::RandomSchema(rng, 5);
  const Table t = testing::RandomTable(schema, 90, rng);
  absl::StatusOr<GowerContext> ctx = GowerContext::Create(t, t, true);
  const std::vector<double> d =
      MinDistances(*ctx->Encode(t), *ctx->Encode(t), *ctx, 2);
  for (double v : d) EXPECT_EQ(v, 0.0);
}

DistanceTable LabelledTable(size_t members, size_t non_members) {
  std::vector<double> distances;
  std::vector<bool> labels;
  for (size_t i = 0; i < members + non_members; ++i) {
    distances.push_back(0.001 * static_cast<double>(i));
    labels.push_back(i < members);
  }
  return testing::MakeDistanceTable(distances, labels);
}

size_t CountLabel(const DistanceTable& t, const std::vector<size_t>& idx,
                  MembershipLabel label) {
  return std::count_if(idx.begin(), idx.end(), [&](size_t i) {
    return t.records[i].label == label;
  });
}

TEST(SplitDistancesTest, BalancedHundredByHundred) {
  absl::StatusOr<DistanceTable> split =
      SplitDistances(LabelledTable(100, 100), 0.7, true, 42);
  ASSERT_TRUE(split.ok());
  EXPECT_EQ(split->train_indices.size(), 140);
  EXPECT_EQ(split->test_indices.size(), 60);
  EXPECT_EQ(CountLabel(*split, split->test_indices, MembershipLabel::kMember),
            30);
  EXPECT_EQ(CountLabel(*split, split->train_indices, MembershipLabel::kMember),
            70);
}

TEST(SplitDistancesTest, UnbalancedInputKeepsTestBalanced) {
  const DistanceTable table = LabelledTable(300, 100);
  absl::StatusOr<DistanceTable> balanced = SplitDistances(table, 0.7, true, 1);
  absl::StatusOr<DistanceTable> raw = SplitDistances(table, 0.7, false, 1);
  ASSERT_TRUE(balanced.ok() && raw.ok());
  for (const DistanceTable* t : {&*balanced, &*raw}) {
    EXPECT_EQ(CountLabel(*t, t->test_indices, MembershipLabel::kMember),
              CountLabel(*t, t->test_indices, MembershipLabel::kNonMember));
  }
  EXPECT_EQ(
      CountLabel(*balanced, balanced->train_indices, MembershipLabel::kMember),
      CountLabel(*balanced, balanced->train_indices,
                 MembershipLabel::kNonMember));
  EXPECT_EQ(raw->train_indices.size() + raw->test_indices.size(), 400);
}

TEST(SplitDistancesTest, DisjointDeterministicAndSeedDependent) {
  const DistanceTable table = LabelledTable(50, 60);
  absl::StatusOr<DistanceTable> a = SplitDistances(table, 0.6, true, 7);
  absl::StatusOr<DistanceTable> b = SplitDistances(table, 0.6, true, 7);
  absl::StatusOr<DistanceTable> c = SplitDistances(table, 0.6, true, 8);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->train_indices, b->train_indices);
  EXPECT_EQ(a->test_indices, b->test_indices);
  EXPECT_NE(a->test_indices, c->test_indices);
  std::set<size_t> seen(a->train_indices.begin(), a->train_indices.end());
  for (size_t i : a->test_indices) EXPECT_TRUE(seen.insert(i).second);
}

TEST(SplitDistancesTest, RejectsDegenerateInputs) {
  EXPECT_FALSE(SplitDistances(LabelledTable(1, 10), 0.7, true, 1).ok());
  EXPECT_FALSE(SplitDistances(LabelledTable(10, 10), 0.0, true, 1).ok());
  EXPECT_FALSE(SplitDistances(LabelledTable(10, 10), 1.0, true, 1).ok());
  // Two per label is the minimum: one to train, one to test.
  absl::StatusOr<DistanceTable> tiny =
      SplitDistances(LabelledTable(2, 2), 0.99, true, 1);
  ASSERT_TRUE(tiny.ok());
  EXPECT_EQ(tiny->test_indices.size(), 2);
}

TEST(DistanceTableTest, FormatParseRoundTrip) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> d;
  std::vector<bool> l;
  for (int i = 0; i < 100; ++i) {
    d.push_back(u(rng));
    l.push_back(i % 3 == 0);
  }
  const DistanceTable table = testing::MakeDistanceTable(d, l);
  testing::TempDir dir;
  ASSERT_TRUE(WriteDistanceTable(table, dir.File("d.csv")).ok());
  absl::StatusOr<DistanceTable> back = LoadDistanceTable(dir.File("d.csv"));
  ASSERT_TRUE(back.ok()) << back.status();
  ASSERT_EQ(back->records.size(), table.records.size());
  for (size_t i = 0; i < table.records.size(); ++i) {
    EXPECT_EQ(back->records[i].distance, table.records[i].distance);
    EXPECT_EQ(back->records[i].label, table.records[i].label);
    EXPECT_EQ(back->records[i].source_index, table.records[i].source_index);
  }
}

TEST(DistanceTableTest, ParseRejectsBadRows) {
  EXPECT_FALSE(ParseDistanceTable({"source_index,distance,label", "0,0.1,2"})
                   .ok());
  EXPECT_FALSE(ParseDistanceTable({"source_index,distance,label", "0,-1,1"})
                   .ok());
  EXPECT_FALSE(ParseDistanceTable({"a,b,c", "0,0.1,1"}).ok());
}

}  // namespace
}  // namespace mirisk
