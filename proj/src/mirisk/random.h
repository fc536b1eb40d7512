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

#ifndef MIRISK_RANDOM_H_
#define MIRISK_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace mirisk {

// Seeded generator whose output depends only on the seed, not on the standard
// library in use: the engine sequence of mt19937_64 is fixed by the standard,
// and the index sampling below avoids the implementation-defined
// distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n). `n` must be positive.
  size_t UniformIndex(size_t n);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // `k` distinct indices drawn from [0, n), returned in ascending order.
  std::vector<size_t> SampleSorted(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mirisk

#endif  // MIRISK_RANDOM_H_
