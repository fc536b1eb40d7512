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

#include "mirisk/table.h"

#include <random>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mirisk/csv.h"
#include "testing/fixtures.h"

namespace mirisk {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(CsvTest, SplitsQuotedFields) {
  absl::StatusOr<std::vector<std::string>> fields =
      csv::SplitLine(R"( a , "b,c" ,"say ""hi""", )");
  ASSERT_TRUE(fields.ok());
  EXPECT_THAT(*fields, ElementsAre("a", "b,c", "say \"hi\"", ""));
  EXPECT_FALSE(csv::SplitLine("\"open").ok());
}

TEST(CsvTest, ParsesOnlyFiniteNumbers) {
  EXPECT_EQ(csv::ParseFiniteDouble(" 2.5 "), 2.5);
  EXPECT_EQ(csv::ParseFiniteDouble("+3"), 3.0);
  EXPECT_EQ(csv::ParseFiniteDouble("-1e-3"), -1e-3);
  EXPECT_FALSE(csv::ParseFiniteDouble("").has_value());
  EXPECT_FALSE(csv::ParseFiniteDouble("nan").has_value());
  EXPECT_FALSE(csv::ParseFiniteDouble("inf").has_value());
  EXPECT_FALSE(csv::ParseFiniteDouble("1e999").has_value());
  EXPECT_FALSE(csv::ParseFiniteDouble("12abc").has_value());
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) / (1.0 + i);
    EXPECT_EQ(csv::ParseFiniteDouble(csv::FormatDouble(v)), v);
  }
  EXPECT_EQ(csv::FormatDouble(0.1), "0.1");
}

TEST(CsvTest, EscapesOnlyWhenNeeded) {
  EXPECT_EQ(csv::EscapeField("plain"), "plain");
  EXPECT_EQ(csv::EscapeField("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::EscapeField("q\"x"), "\"q\"\"x\"");
  EXPECT_EQ(csv::EscapeField(" pad"), "\" pad\"");
}

TEST(SchemaTest, ParsesKindsRangesAndComments) {
  absl::StatusOr<Schema> schema = ParseSchema({
      "# header comment",
      "age = numeric 0 120",
      "",
      "income = numeric   # observed range",
      "color = categorical",
  });
  ASSERT_TRUE(schema.ok()) << schema.status();
  ASSERT_EQ(schema->size(), 3);
  EXPECT_EQ((*schema)[0].kind, FeatureKind::kNumeric);
  EXPECT_TRUE((*schema)[0].range_declared);
  EXPECT_EQ((*schema)[0].range, (NumericRange{0, 120}));
  EXPECT_FALSE((*schema)[1].range_declared);
  EXPECT_EQ((*schema)[2].kind, FeatureKind::kCategorical);
}

TEST(SchemaTest, RejectsMalformedLines) {
  EXPECT_FALSE(ParseSchema({"age numeric"}).ok());
  EXPECT_FALSE(ParseSchema({"age = ordinal"}).ok());
  EXPECT_FALSE(ParseSchema({"age = numeric 5 1"}).ok());
  EXPECT_FALSE(ParseSchema({"a = numeric", "a = categorical"}).ok());
  EXPECT_FALSE(ParseSchema({"c = categorical 0 1"}).ok());
  EXPECT_FALSE(ParseSchema({"# nothing"}).ok());
}

TEST(ParseTableTest, InfersKindsAndRanges) {
  absl::StatusOr<Table> table = ParseTable(
      {"x,color,z", "1,red,3", "4,blue,x9", "2.5,red,7"}, std::nullopt);
  ASSERT_TRUE(table.ok()) << table.status();
  ASSERT_EQ(table->num_rows(), 3);
  EXPECT_EQ(table->schema()[0].kind, FeatureKind::kNumeric);
  EXPECT_EQ(table->schema()[1].kind, FeatureKind::kCategorical);
  EXPECT_EQ(table->schema()[2].kind, FeatureKind::kCategorical);
  EXPECT_EQ(table->schema()[0].range, (NumericRange{1, 4}));
  EXPECT_EQ(table->category(1, 2), "x9");
}

TEST(ParseTableTest, SchemaReordersByHeaderAndKeepsDeclaredRange) {
  absl::StatusOr<Schema> schema =
      ParseSchema({"a = numeric 0 10", "b = categorical"});
  ASSERT_TRUE(schema.ok());
  absl::StatusOr<Table> table = ParseTable({"b,a", "7,1", "8,2"}, *schema);
  ASSERT_TRUE(table.ok()) << table.status();
  EXPECT_EQ(table->schema()[0].name, "b");
  EXPECT_EQ(table->schema()[0].kind, FeatureKind::kCategorical);
  EXPECT_EQ(table->category(0, 0), "7");
  EXPECT_EQ(table->schema()[1].range, (NumericRange{0, 10}));
}

TEST(ParseTableTest, ReportsRowAndColumnOfBadValues) {
  absl::StatusOr<Schema> schema = ParseSchema({"a = numeric"});
  absl::StatusOr<Table> table = ParseTable({"a", "1", "abc"}, *schema);
  ASSERT_FALSE(table.ok());
  EXPECT_THAT(table.status().message(), HasSubstr("row 2 (line 3)"));
  EXPECT_THAT(table.status().message(), HasSubstr("'abc'"));

  EXPECT_FALSE(ParseTable({"a,b", "1"}, std::nullopt).ok());
  EXPECT_FALSE(ParseTable({"a,a", "1,2"}, std::nullopt).ok());
  EXPECT_FALSE(ParseTable({"a"}, std::nullopt).ok());
  EXPECT_FALSE(ParseTable({}, std::nullopt).ok());
  absl::StatusOr<Table> missing = ParseTable({"a,b", "1,"}, std::nullopt);
  ASSERT_FALSE(missing.ok());
  EXPECT_THAT(missing.status().message(), HasSubstr("missing values"));
}

TEST(ParseTableTest, SchemaMustCoverHeaderExactly) {
  absl::StatusOr<Schema> schema =
      ParseSchema({"a = numeric", "b = numeric"});
  EXPECT_FALSE(ParseTable({"a", "1"}, *schema).ok());
  EXPECT_FALSE(ParseTable({"a,b,c", "1,2,3"}, *schema).ok());
}

TEST(TableTest, WriteThenLoadRoundTrips) {
  std::mt19937_64 rng(11);
  const Schema schema = testing::RandomSchema(rng, 6);
  const Table original = testing::RandomTable(schema, 50, rng);
  testing::TempDir dir;
  ASSERT_TRUE(WriteTable(original, dir.File("t.csv")).ok());
  Schema declared = original.schema();
  absl::StatusOr<Table> loaded = LoadTable(dir.File("t.csv"), declared);
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  ASSERT_EQ(loaded->num_rows(), original.num_rows());
  for (size_t r = 0; r < original.num_rows(); ++r) {
    EXPECT_EQ(loaded->RowKey(r), original.RowKey(r));
  }
}

TEST(TableTest, LoadErrorsNameTheFile) {
  absl::StatusOr<Table> table = LoadTable("/nonexistent/x.csv", std::nullopt);
  ASSERT_FALSE(table.ok());
  EXPECT_THAT(table.status().message(), HasSubstr("/nonexistent/x.csv"));
}

TEST(TableTest, RowKeyTreatsSignedZeroAsEqual) {
  const Schema schema = {{"x", FeatureKind::kNumeric, std::nullopt, false}};
  absl::StatusOr<Table> t = Table::FromRows(schema, {{0.0}, {-0.0}, {1.0}});
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->RowKey(0), t->RowKey(1));
  EXPECT_NE(t->RowKey(0), t->RowKey(2));
}

TEST(AttackDatasetTest, LabelsMembersFirst) {
  std::mt19937_64 rng(5);
  const Schema schema = testing::RandomSchema(rng, 3);
  const Table r = testing::RandomTable(schema, 7, rng);
  const Table u = testing::RandomTable(schema, 4, rng);
  absl::StatusOr<AttackDataset> d = BuildAttackDataset(r, u, false, 1);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->table.num_rows(), 11);
  EXPECT_EQ(d->num_members, 7);
  EXPECT_EQ(d->num_non_members, 4);
  for (size_t i = 0; i < 11; ++i) {
    EXPECT_EQ(d->labels[i], i < 7 ? MembershipLabel::kMember
                                  : MembershipLabel::kNonMember);
  }
}

TEST(AttackDatasetTest, BalancingSubsamplesTheLargerSideDeterministically) {
  std::mt19937_64 rng(5);
  const Schema schema = testing::RandomSchema(rng, 3);
  const Table r = testing::RandomTable(schema, 30, rng);
  const Table u = testing::RandomTable(schema, 12, rng);
  absl::StatusOr<AttackDataset> a = BuildAttackDataset(r, u, true, 9);
  absl::StatusOr<AttackDataset> b = BuildAttackDataset(r, u, true, 9);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->num_members, 12);
  EXPECT_EQ(a->num_non_members, 12);
  for (size_t i = 0; i < a->table.num_rows(); ++i) {
    EXPECT_EQ(a->table.RowKey(i), b->table.RowKey(i));
  }
}

TEST(AttackDatasetTest, CountsDuplicatesAcrossTables) {
  const Schema schema = {{"x", FeatureKind::kNumeric, std::nullopt, false},
                         {"c", FeatureKind::kCategorical, std::nullopt, false}};
  absl::StatusOr<Table> r =
      Table::FromRows(schema, {{1.0, std::string("a")}, {2.0, std::string("b")}});
  absl::StatusOr<Table> u = Table::FromRows(
      schema, {{1.0, std::string("a")}, {2.0, std::string("a")},
               {1.0, std::string("a")}});
  ASSERT_TRUE(r.ok() && u.ok());
  EXPECT_EQ(CountCrossDuplicates(*r, *u), 2);
  absl::StatusOr<AttackDataset> d = BuildAttackDataset(*r, *u, false, 0);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->cross_duplicates, 2);
}

TEST(AttackDatasetTest, RejectsMismatchedSchemas) {
  std::mt19937_64 rng(1);
  const Table r = testing::RandomTable(testing::RandomSchema(rng, 3), 5, rng);
  const Table u = testing::RandomTable(testing::RandomSchema(rng, 4), 5, rng);
  EXPECT_FALSE(BuildAttackDataset(r, u, false, 0).ok());
}

}  // namespace
}  // namespace mirisk
