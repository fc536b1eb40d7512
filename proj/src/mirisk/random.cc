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

#include "mirisk/random.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mirisk {

size_t Rng::UniformIndex(size_t n) {
  const uint64_t range = static_cast<uint64_t>(n);
  // Reject the top partial bucket so every residue is equally likely.
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      std::numeric_limits<uint64_t>::max() % range;
  uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<size_t>(draw % range);
}

std::vector<size_t> Rng::SampleSorted(size_t n, size_t k) {
  std::vector<size_t> indices(n);
  std::iota(indices.begin(), indices.end(), size_t{0});
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (size_t i = 0; i < k && i < n; ++i) {
    const size_t j = i + UniformIndex(n - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(std::min(k, n));
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace mirisk
