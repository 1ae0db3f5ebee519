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

#ifndef XLMIMO_OMP_HPP
#define XLMIMO_OMP_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/polar_codebook.hpp"
#include "xlmimo/types.hpp"

#include <cstddef>
#include <vector>

namespace xlmimo {

// Selected (transmit atom, receive atom) column indices, 0-based.
struct AtomPair
{
    std::size_t tx = 0;
    std::size_t rx = 0;
    bool operator==(const AtomPair &) const = default;
};

// Splits a 1-based flat index over an S2 x S1 correlation map (column-major)
// into 1-based (n1, n2): n1 = floor((n - 1) / S2) + 1, n2 = ((n - 1) mod S2) + 1.
AtomPair split_flat_index(std::size_t n_star, std::size_t s2);

struct OmpResult
{
    ChannelMatrix channel;
    std::vector<AtomPair> support;
    CVec coefficients;
    std::vector<double> residual_norms; // ||R||_F before the first and after each iteration
    bool regularized = false;           // a ridge term was needed in some LS refit
};

// Matrix OMP over the Kronecker dictionary (A_t^T (x) A_r) with A_t = Dt^H P and
// A_r = W Dr. Runs `sparsity` iterations; an atom pair is never selected twice.
OmpResult estimate_nlos(const CMat &y, const RMat &p, const RMat &w, const PolarCodebook &dt,
                        const PolarCodebook &dr, std::size_t sparsity);

} // namespace xlmimo

#endif
