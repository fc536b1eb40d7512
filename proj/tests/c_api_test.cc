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

// Exercises the shared library through its C header only.

#include "mirisk/mirisk.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace {

using ::testing::HasSubstr;

std::string ToyFile(const std::string& name) {
  return std::string(MIRISK_TESTDATA_DIR) + "/toy/" + name;
}

class ConfigTest : public ::testing::Test {
 protected:
  void SetUp() override { config_ = mirisk_config_new(); }
  void TearDown() override { mirisk_config_free(config_); }
  mirisk_config* config_ = nullptr;
};

TEST_F(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(mirisk_config_set(config_, "colour", "red"),
            MIRISK_INVALID_ARGUMENT);
  EXPECT_THAT(mirisk_last_error(), HasSubstr("colour"));
  EXPECT_EQ(mirisk_config_set(config_, "seed", "-3"), MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_config_set(config_, "percentiles", "10,,x"),
            MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_config_set(config_, "bandwidth", "fixed:-1"),
            MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_config_set(config_, "balance-train", "maybe"),
            MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_config_set(nullptr, "seed", "1"), MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_config_set(config_, "seed", "18446744073709551615"),
            MIRISK_OK);
  EXPECT_EQ(mirisk_config_set(config_, "percentiles", "25, 50,75"), MIRISK_OK);
}

TEST_F(ConfigTest, MissingSeedIsAnError) {
  mirisk_config_set(config_, "train", ToyFile("train.csv").c_str());
  mirisk_config_set(config_, "out", "/tmp/mirisk_never_written");
  mirisk_report* report = nullptr;
  EXPECT_EQ(mirisk_run(config_, &report), MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(report, nullptr);
  EXPECT_THAT(mirisk_last_error(), HasSubstr("seed"));
}

TEST_F(ConfigTest, RunsTheToyFixture) {
  const std::string out =
      (std::filesystem::temp_directory_path() / "mirisk_c_api_toy").string();
  std::filesystem::remove_all(out);
  ASSERT_EQ(mirisk_config_set(config_, "train", ToyFile("train.csv").c_str()),
            MIRISK_OK);
  ASSERT_EQ(mirisk_config_set(config_, "unseen", ToyFile("unseen.csv").c_str()),
            MIRISK_OK);
  ASSERT_EQ(
      mirisk_config_set(config_, "synthetic", ToyFile("synthetic.csv").c_str()),
      MIRISK_OK);
  ASSERT_EQ(mirisk_config_set(config_, "schema", ToyFile("schema.txt").c_str()),
            MIRISK_OK);
  ASSERT_EQ(mirisk_config_set(config_, "seed", "7"), MIRISK_OK);
  ASSERT_EQ(mirisk_config_set(config_, "out", out.c_str()), MIRISK_OK);
  mirisk_report* report = nullptr;
  ASSERT_EQ(mirisk_run(config_, &report), MIRISK_OK) << mirisk_last_error();
  ASSERT_NE(report, nullptr);
  const std::string json = mirisk_report_json(report);
  EXPECT_THAT(json, HasSubstr("\"report_version\": 1"));
  const int code = mirisk_report_exit_code(report);
  EXPECT_TRUE(code == 0 || code == 2);
  mirisk_report_free(report);

  char* comparison = nullptr;
  ASSERT_EQ(mirisk_compare_report((out + "/report.json").c_str(), &comparison),
            MIRISK_OK)
      << mirisk_last_error();
  EXPECT_THAT(comparison, HasSubstr("realistic_vs_method1"));
  mirisk_string_free(comparison);
  std::filesystem::remove_all(out);
}

TEST(CompareReportTest, MissingAndMalformedFiles) {
  char* out = nullptr;
  EXPECT_EQ(mirisk_compare_report("/nonexistent/report.json", &out),
            MIRISK_NOT_FOUND);
  const std::string path =
      (std::filesystem::temp_directory_path() / "mirisk_bad_report.json")
          .string();
  std::ofstream(path) << "{not json";
  EXPECT_EQ(mirisk_compare_report(path.c_str(), &out),
            MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(out, nullptr);
  std::filesystem::remove(path);
}

TEST(KdeApiTest, FitEvaluateFree) {
  const double samples[] = {0.0};
  mirisk_kde* kde = nullptr;
  ASSERT_EQ(mirisk_kde_fit(samples, 1, 1.0, &kde), MIRISK_OK);
  EXPECT_NEAR(mirisk_kde_eval(kde, 0.0), 0.398942, 1e-6);
  EXPECT_EQ(mirisk_kde_bandwidth(kde), 1.0);
  mirisk_kde_free(kde);

  EXPECT_EQ(mirisk_kde_fit(samples, 1, 0.0, &kde), MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_kde_fit(samples, 1, -1.0, &kde), MIRISK_INVALID_ARGUMENT);
  EXPECT_EQ(mirisk_kde_fit(nullptr, 0, 1.0, &kde), MIRISK_INVALID_ARGUMENT);
  const double two[] = {-1.0, 1.0};
  ASSERT_EQ(mirisk_kde_fit(two, 2, 0.0, &kde), MIRISK_OK);
  EXPECT_GT(mirisk_kde_bandwidth(kde), 0.0);
  mirisk_kde_free(kde);
}

TEST(PosteriorApiTest, Identities) {
  EXPECT_EQ(mirisk_posterior(0.3, 0.1, 0.5), 0.75);
  EXPECT_EQ(mirisk_posterior(2.0, 2.0, 0.5), 0.5);
  EXPECT_EQ(mirisk_posterior(0.0, 0.0, 0.5), 0.5);
  EXPECT_TRUE(std::isnan(mirisk_posterior(1.0, 1.0, 1.5)));
}

TEST(VersionTest, NonEmpty) { EXPECT_STRNE(mirisk_version(), ""); }

}  // namespace
