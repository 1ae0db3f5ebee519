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

#ifndef XLMIMO_GEOMETRY_HPP
#define XLMIMO_GEOMETRY_HPP

#include <cstddef>

namespace xlmimo {

// Uniform linear array. The aperture follows the D = N * d convention, so a
// half-wavelength array of N elements spans N * lambda / 2.
class ArrayGeometry
{
public:
    ArrayGeometry(std::size_t num_elements, double spacing);

    std::size_t num_elements() const { return num_elements_; }
    double spacing() const { return spacing_; }
    double aperture() const { return static_cast<double>(num_elements_) * spacing_; }

    // Offset of element n (1-based) from the array centre, (2n - N - 1) / 2 * d.
    double centered_offset(std::size_t n) const;

    // Offset of element n (1-based) from element 1, (n - 1) * d.
    double anchored_offset(std::size_t n) const;

    static ArrayGeometry half_wavelength(std::size_t num_elements, double wavelength);

    bool operator==(const ArrayGeometry &) const = default;

private:
    std::size_t num_elements_;
    double spacing_;
};

// Signed offsets of a transmitter element (d1) and a receiver element (d2).
struct PairOffsets
{
    double d1 = 0.0;
    double d2 = 0.0;
};

double element_offset_centered(std::size_t n, std::size_t count, double spacing);

// Distance from a point at (r, theta) relative to the array centre to the
// element at signed offset delta_d along the array axis (law of cosines).
double scatterer_distance(double r, double theta, double delta_d);

// Distance between transmitter element at offset d1 and receiver element at
// offset d2, where r is the distance between the two anchor elements, theta the
// angle of departure and phi the relative rotation of the receiver array.
double pair_distance_exact(double r, double theta, double phi, double d1, double d2);
double pair_distance_exact(double r, double theta, double phi, PairOffsets offsets);

// Parallel arrays: transmitter centre at the origin, receiver centre at (x2, y2).
double pair_distance_parallel(double x2, double y2, double d1, double d2);

// Expansions of pair_distance_parallel around d2 - d1 = 0, (r, theta) being the
// polar form of (x2, y2).
double pair_distance_taylor1(double r, double theta, double d1, double d2);
double pair_distance_taylor2(double r, double theta, double d1, double d2);

} // namespace xlmimo

#endif
