// Copyright 2026 The Netshuffle Authors
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

#ifndef NETSHUFFLE_RNG_H_
#define NETSHUFFLE_RNG_H_

#include <cstdint>
#include <random>

namespace netshuffle {

// All randomized components draw from std::mt19937_64 engines. Independent
// streams are derived from a (seed, stream index) pair so parallel trials
// reproduce bit-for-bit regardless of scheduling.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to decorrelate nearby seeds.
std::uint64_t MixBits(std::uint64_t x);

// Engine for the given stream of the given seed. Streams with distinct
// indices are statistically independent.
Rng MakeStream(std::uint64_t seed, std::uint64_t stream);

// Uniform integer in [0, bound). bound must be positive. Uses Lemire's
// multiply-shift rejection so results do not depend on the standard
// library's distribution implementation.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound);

// Uniform double in [0, 1) with 53 random bits.
double UniformUnit(Rng& rng);

}  // namespace netshuffle

#endif  // NETSHUFFLE_RNG_H_
