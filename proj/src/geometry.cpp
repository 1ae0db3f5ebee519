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

#include "xlmimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xlmimo {

ArrayGeometry::ArrayGeometry(std::size_t num_elements, double spacing)
    : num_elements_(num_elements), spacing_(spacing)
{
    if (num_elements == 0)
        throw std::invalid_argument("ArrayGeometry: element count must be at least 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("ArrayGeometry: spacing must be positive");
}

ArrayGeometry ArrayGeometry::half_wavelength(std::size_t num_elements, double wavelength)
{
    return ArrayGeometry(num_elements, wavelength / 2.0);
}

double ArrayGeometry::centered_offset(std::size_t n) const
{
    return element_offset_centered(n, num_elements_, spacing_);
}

double ArrayGeometry::anchored_offset(std::size_t n) const
{
    if (n < 1 || n > num_elements_)
        throw std::out_of_range("anchored_offset: index " + std::to_string(n) + " outside [1, " +
                                std::to_string(num_elements_) + "]");
    return static_cast<double>(n - 1) * spacing_;
}

double element_offset_centered(std::size_t n, std::size_t count, double spacing)
{
    if (n < 1 || n > count)
        throw std::out_of_range("element_offset_centered: index " + std::to_string(n) +
                                " outside [1, " + std::to_string(count) + "]");
    const double delta = (2.0 * static_cast<double>(n) - static_cast<double>(count) - 1.0) / 2.0;
    return delta * spacing;
}

double scatterer_distance(double r, double theta, double delta_d)
{
    if (!(r > 0.0))
        throw std::invalid_argument("scatterer_distance: r must be positive");
    const double rad = r * r + delta_d * delta_d - 2.0 * r * delta_d * std::sin(theta);
    // rad >= (r - |delta_d|)^2 >= 0; clamp rounding noise at the collinear point
    return std::sqrt(std::max(rad, 0.0));
}

double pair_distance_exact(double r, double theta, double phi, double d1, double d2)
{
    if (!(r > 0.0))
        throw std::invalid_argument("pair_distance_exact: r must be positive");
    const double rad = r * r + d1 * d1 + d2 * d2 +
                       2.0 * (r * d2 * std::sin(phi + theta) - r * d1 * std::sin(theta) -
                              d1 * d2 * std::cos(phi));
    if (rad < 0.0)
        throw std::domain_error("pair_distance_exact: negative radicand (nonphysical configuration)");
    return std::sqrt(rad);
}

double pair_distance_exact(double r, double theta, double phi, PairOffsets offsets)
{
    return pair_distance_exact(r, theta, phi, offsets.d1, offsets.d2);
}

double pair_distance_parallel(double x2, double y2, double d1, double d2)
{
    if (x2 == 0.0 && y2 == 0.0)
        throw std::invalid_argument("pair_distance_parallel: receiver centre at the origin");
    return std::hypot(x2, y2 + d2 - d1);
}

double pair_distance_taylor1(double r, double theta, double d1, double d2)
{
    if (!(r > 0.0))
        throw std::invalid_argument("pair_distance_taylor1: r must be positive");
    return r + (d2 - d1) * std::sin(theta);
}

double pair_distance_taylor2(double r, double theta, double d1, double d2)
{
    if (!(r > 0.0))
        throw std::invalid_argument("pair_distance_taylor2: r must be positive");
    const double dd = d2 - d1;
    const double c = std::cos(theta);
    return r + dd * std::sin(theta) + dd * dd * c * c / (2.0 * r);
}

} // namespace xlmimo
