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

// Minimal comma-separated-values helpers shared by the table loader and the
// report writers. Numbers are always written in shortest round-trip form so a
// value read back from any sidecar file is bit-identical to the one written.

#ifndef MIRISK_CSV_H_
#define MIRISK_CSV_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace mirisk {
namespace csv {

// Splits a single record. Fields may be wrapped in double quotes, with ""
// standing for a literal quote inside a quoted field.
absl::StatusOr<std::vector<std::string>> SplitLine(absl::string_view line);

// Parses the whole field (surrounding blanks ignored) as a finite real.
std::optional<double> ParseFiniteDouble(absl::string_view field);

std::string FormatDouble(double value);

// Quotes `field` when it contains a delimiter, quote or edge whitespace.
std::string EscapeField(absl::string_view field);

// Reads a text file into lines with trailing '\r' removed. Trailing blank
// lines are dropped.
absl::StatusOr<std::vector<std::string>> ReadLines(const std::string& path);

absl::Status WriteFile(const std::string& path, absl::string_view contents);

}  // namespace csv
}  // namespace mirisk

#endif  // MIRISK_CSV_H_
