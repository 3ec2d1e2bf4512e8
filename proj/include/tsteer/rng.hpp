// Copyright 2026 The tsteer Authors
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

#pragma once

// Counter-based random numbers (Philox4x32-10). A generator is a pure
// function of (seed, stream, draw index), so every protocol round owns an
// independent stream and results do not depend on thread scheduling.

#include <array>
#include <cstdint>

namespace tsteer {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_{lo(seed), hi(seed)}, stream_(stream) {}

  std::uint32_t next_u32();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n), unbiased (rejection sampling).
  std::uint32_t below(std::uint32_t n);

 private:
  static std::uint32_t lo(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
  static std::uint32_t hi(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;
};

}  // namespace tsteer
