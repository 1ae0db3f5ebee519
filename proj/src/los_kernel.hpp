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

#ifndef XLMIMO_DETAIL_LOS_KERNEL_HPP
#define XLMIMO_DETAIL_LOS_KERNEL_HPP

#include <cstddef>

namespace xlmimo::detail {

// Fills column-major n2 x n1 arrays with re/im of exp(-j k dist) / dist and
// dist itself, dist being the exact pair distance for anchored offsets d1, d2.
// Returns false if some squared distance is not positive.
bool los_entries(double r, double theta, double phi, double k, const double *d1, std::size_t n1, const double *d2,
                 std::size_t n2, double *re, double *im, double *dist);

} // namespace xlmimo::detail

#endif
