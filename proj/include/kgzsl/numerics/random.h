/*
 * Copyright 2026 The kgzsl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KGZSL_NUMERICS_RANDOM_H_
#define KGZSL_NUMERICS_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "kgzsl/numerics/matrix.h"

namespace kgzsl::numerics {

// Seeded generator whose derived draws do not depend on the standard
// library's distribution implementations, so outputs are reproducible
// across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n). n must be positive.
  uint64_t uniform_index(uint64_t n);
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Independent stream derived from this seed and a label; used to give
  // each subsystem its own reproducible generator.
  static uint64_t derive_seed(uint64_t seed, uint64_t stream);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Uniform in +-sqrt(6 / (rows + cols)).
Matrix glorot_init(size_t rows, size_t cols, Rng& rng);
Matrix gaussian_matrix(size_t rows, size_t cols, double stddev, Rng& rng);

}  // namespace kgzsl::numerics

#endif  // KGZSL_NUMERICS_RANDOM_H_
