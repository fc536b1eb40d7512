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

#include "testing/fixtures.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "absl/strings/str_cat.h"

namespace mirisk {
namespace testing {

Schema RandomSchema(std::mt19937_64& rng, size_t num_features) {
  Schema schema(num_features);
  std::bernoulli_distribution coin(0.6);
  for (size_t f = 0; f < num_features; ++f) {
    schema[f].name = absl::StrCat("f", f);
    schema[f].kind =
        coin(rng) ? FeatureKind::kNumeric : FeatureKind::kCategorical;
  }
  if (num_features >= 2) {
    schema[0].kind = FeatureKind::kNumeric;
    schema[1].kind = FeatureKind::kCategorical;
  }
  return schema;
}

Table RandomTable(const Schema& schema, size_t rows, std::mt19937_64& rng,
                  double shift) {
  std::vector<std::vector<Cell>> cells(rows);
  for (size_t r = 0; r < rows; ++r) {
    cells[r].reserve(schema.size());
    for (size_t f = 0; f < schema.size(); ++f) {
      if (schema[f].kind == FeatureKind::kNumeric) {
        std::normal_distribution<double> normal(shift + 10.0 * f, 1.0 + f);
        cells[r].emplace_back(normal(rng));
      } else {
        const int tokens = 2 + static_cast<int>(f % 4);
        int pick = std::uniform_int_distribution<int>(0, tokens - 1)(rng);
        if (shift != 0.0 && std::bernoulli_distribution(0.5)(rng)) pick = 0;
        cells[r].emplace_back(absl::StrCat("c", pick));
      }
    }
  }
  Schema plain = schema;
  for (FeatureSpec& spec : plain) {
    if (!spec.range_declared) spec.range.reset();
  }
  absl::StatusOr<Table> table = Table::FromRows(plain, cells);
  if (!table.ok()) throw std::runtime_error(table.status().ToString());
  return *std::move(table);
}

Table Jitter(const Table& table, double fraction, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<Cell>> cells(table.num_rows());
  for (size_t r = 0; r < table.num_rows(); ++r) {
    for (size_t f = 0; f < table.num_features(); ++f) {
      const FeatureSpec& spec = table.schema()[f];
      if (spec.kind == FeatureKind::kNumeric) {
        const double width = spec.range ? spec.range->width() : 0.0;
        cells[r].emplace_back(table.numeric(r, f) +
                              fraction * width * unit(rng));
      } else {
        cells[r].emplace_back(table.category(r, f));
      }
    }
  }
  Schema plain = table.schema();
  for (FeatureSpec& spec : plain) {
    if (!spec.range_declared) spec.range.reset();
  }
  absl::StatusOr<Table> out = Table::FromRows(plain, cells);
  if (!out.ok()) throw std::runtime_error(out.status().ToString());
  return *std::move(out);
}

DistanceTable MakeDistanceTable(const std::vector<double>& distances,
                                const std::vector<bool>& labels) {
  DistanceTable table;
  for (size_t i = 0; i < distances.size(); ++i) {
    table.records.push_back(DistanceRecord{
        distances[i],
        labels[i] ? MembershipLabel::kMember : MembershipLabel::kNonMember,
        i});
  }
  return table;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device device;
  path_ = std::filesystem::temp_directory_path() /
          absl::StrCat("mirisk_test_", device(), "_", counter++);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ignored;
  std::filesystem::remove_all(path_, ignored);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace testing
}  // namespace mirisk
