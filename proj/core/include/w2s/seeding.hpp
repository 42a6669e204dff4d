// Copyright 2026 The w2s-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef W2S_SEEDING_HPP_
#define W2S_SEEDING_HPP_

#include <cstdint>

namespace w2s {

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for (stage, trial) under a parent seed. Each component is
// folded through the mixer separately so that (s, t) and (t, s) differ.
constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t stage,
                                   std::uint64_t trial) {
  std::uint64_t h = SplitMix64(parent);
  h = SplitMix64(h ^ (stage + 0x632be59bd9b4e019ULL));
  h = SplitMix64(h ^ (trial + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

}  // namespace w2s

#endif  // W2S_SEEDING_HPP_
