// Copyright 2026 The mresynth Authors
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

#ifndef MRESYNTH_RNG_HPP_
#define MRESYNTH_RNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace mresynth {

// Splittable, platform-independent PRNG. Every consumer derives its own
// stream from (master seed, label), so results do not depend on scheduling
// or thread count. The generator is xoshiro256++ seeded through splitmix64.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  std::uint64_t next_u64();

  // Uniform double in the open interval (0, 1); never returns 0 or 1.
  double next_unit_open();

  // Uniform integer in [0, n), unbiased. n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t fnv1a64(std::string_view data);

}  // namespace mresynth

#endif  // MRESYNTH_RNG_HPP_
