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

// Seeded generators for test tables and scratch directories.

#ifndef MIRISK_TESTS_TESTING_FIXTURES_H_
#define MIRISK_TESTS_TESTING_FIXTURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mirisk/distance.h"
#include "mirisk/table.h"

namespace mirisk {
namespace testing {

// Features alternate randomly between numeric and categorical. With two or
// more features both kinds are present.
Schema RandomSchema(std::mt19937_64& rng, size_t num_features);

// Numeric cells ~ N(shift + 10 f, 1 + f); categorical cells take one of
// 2 + (f % 4) tokens, biased towards the first when `shift` is nonzero.
Table RandomTable(const Schema& schema, size_t rows, std::mt19937_64& rng,
                  double shift = 0.0);

// Copy of `table` with every numeric cell moved by at most
// `fraction` * observed range of its column.
Table Jitter(const Table& table, double fraction, std::mt19937_64& rng);

// A labelled distance table with the given distances. Records are members
// when `labels[i]` is true.
DistanceTable MakeDistanceTable(const std::vector<double>& distances,
                                const std::vector<bool>& labels);

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

void WriteText(const std::string& path, const std::string& text);
std::string ReadText(const std::string& path);

}  // namespace testing
}  // namespace mirisk

#endif  // MIRISK_TESTS_TESTING_FIXTURES_H_
