// Copyright 2026 The Designsearch Authors.
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

#ifndef DESIGNSEARCH_RANDOM_H_
#define DESIGNSEARCH_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace designsearch {

// Seeded random stream. The engine is std::mt19937_64; the distributions are
// implemented here rather than taken from <random> because the standard
// distributions are implementation-defined, and every run must be a pure
// function of its seed on any standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, bound). `bound` must be positive.
  uint64_t Below(uint64_t bound);

  // Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi) {
    return lo + static_cast<int>(Below(static_cast<uint64_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Derives an independent seed for a named sub-stream (splitmix64 finalizer).
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

}  // namespace designsearch

#endif  // DESIGNSEARCH_RANDOM_H_
