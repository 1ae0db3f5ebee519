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

#ifndef XLMIMO_MEASUREMENT_HPP
#define XLMIMO_MEASUREMENT_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/rng.hpp"
#include "xlmimo/types.hpp"

#include <cstddef>

namespace xlmimo {

struct MeasurementSet
{
    CMat y;             // Nrf x M observations
    RMat p;             // N1 x M pilots
    RMat w;             // Nrf x N2 combiner
    double sigma2 = 0;  // per-entry complex noise power after combining
    double snr_db = 0;
};

// N1 x M matrix with entries drawn uniformly from {-1/sqrt(M), +1/sqrt(M)}.
RMat gen_pilot(std::size_t n1, std::size_t m, Rng &rng);
// Nrf x N2 matrix with entries drawn uniformly from {-1/sqrt(N2), +1/sqrt(N2)}.
RMat gen_combiner(std::size_t nrf, std::size_t n2, Rng &rng);

// Sylvester Hadamard matrix of order n (a power of two), entries +-1.
RMat hadamard(std::size_t n);

// Y = W H P + N with N_ij ~ CN(0, sigma2) i.i.d.
MeasurementSet observe(const CMat &h, const RMat &p, const RMat &w, double sigma2, Rng &rng);
MeasurementSet observe(const ChannelMatrix &h, const RMat &p, const RMat &w, double sigma2, Rng &rng);

// Noise power giving a per-entry SNR of snr_db on the combined observations:
// ||W H P||_F^2 / (Nrf M 10^(snr_db / 10)).
double calibrate_sigma2(const CMat &h, const RMat &p, const RMat &w, double snr_db);

// Q = P^T (x) W, so that vec(W H P) = Q vec(H) with column-major vec.
RMat kron_sensing(const RMat &p, const RMat &w);

// Column-major vectorisation.
CVec vec(const CMat &m);

} // namespace xlmimo

#endif
