// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field XL-MIMO channel modelling and estimation library
// Copyright (C) 2026 The xlmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef XLMIMO_RNG_HPP
#define XLMIMO_RNG_HPP

#include <cstdint>
#include <random>

namespace xlmimo {

using Rng = std::mt19937_64;

// splitmix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Child seed for stream `index` of `parent`. Distinct indices give distinct
// seeds because mix64 is a bijection and the pre-image differs.
constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t index)
{
    return mix64(mix64(parent) + 0x632BE59BD9B4E019ull * (index + 1));
}

} // namespace xlmimo

#endif
