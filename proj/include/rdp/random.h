// Copyright 2026 The rdp-lab Authors. All Rights Reserved.
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

#ifndef RDP_RANDOM_H_
#define RDP_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace rdp {

using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator for sub-stream `stream` of a run seeded with `seed`.
inline Rng StreamRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(SplitMix64(seed)),
                    static_cast<std::uint32_t>(SplitMix64(seed) >> 32),
                    static_cast<std::uint32_t>(SplitMix64(stream ^ 0xa5a5a5a5ULL)),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Uniform on [0, 1) with 53 random bits.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformIn(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

// Uniform integer in [0, n).
inline int UniformIndex(Rng& rng, int n) {
  return static_cast<int>(Uniform01(rng) * n);
}

inline double StandardNormal(Rng& rng) {
  // Box-Muller on (0, 1] so the log is finite.
  const double u1 = 1.0 - Uniform01(rng);
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace rdp

#endif  // RDP_RANDOM_H_
