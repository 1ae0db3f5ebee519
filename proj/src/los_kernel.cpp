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

// Built with vector math enabled when available; keep this file free of
// anything that relies on strict IEEE semantics.

#include "los_kernel.hpp"

#include <cmath>

namespace xlmimo::detail {

bool los_entries(double r, double theta, double phi, double k, const double *d1, std::size_t n1, const double *d2,
                 std::size_t n2, double *re, double *im, double *dist)
{
    const double sp = std::sin(phi + theta), st = std::sin(theta), cp = std::cos(phi);
    const long m = static_cast<long>(n2);
    bool ok = true;
    for (std::size_t c = 0; c < n1; ++c)
    {
        const double a = d1[c];
        const double base = r * r + a * a - 2.0 * r * a * st;
        const double lin = 2.0 * (r * sp - a * cp);
        double *__restrict dc = dist + c * n2;
        double *__restrict rc = re + c * n2;
        double *__restrict ic = im + c * n2;
#pragma omp simd
        for (long i = 0; i < m; ++i)
            dc[i] = base + d2[i] * d2[i] + d2[i] * lin;
        for (long i = 0; i < m; ++i)
            ok = ok && dc[i] > 0.0;
        if (!ok)
            return false;
        // Separate loops: a fused sin/cos pair does not vectorise.
#pragma omp simd
        for (long i = 0; i < m; ++i)
        {
            dc[i] = std::sqrt(dc[i]);
            ic[i] = k * dc[i];
        }
#pragma omp simd
        for (long i = 0; i < m; ++i)
            rc[i] = std::cos(ic[i]) / dc[i];
#pragma omp simd
        for (long i = 0; i < m; ++i)
            ic[i] = -std::sin(ic[i]) / dc[i];
    }
    return true;
}

} // namespace xlmimo::detail
