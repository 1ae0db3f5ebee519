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

#ifndef XLMIMO_POLAR_CODEBOOK_HPP
#define XLMIMO_POLAR_CODEBOOK_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/geometry.hpp"
#include "xlmimo/types.hpp"

#include <cstddef>
#include <vector>

namespace xlmimo {

struct GridPoint
{
    std::size_t angle_index = 0;
    double theta = 0.0;
    double r = 0.0; // +inf marks an exact planar-wave atom
};

// Angle samples uniform in sin(theta) and, per angle, a list of distances.
// Columns of a codebook enumerate angles in order and, within an angle, the
// distances in stored (decreasing) order.
struct PolarGrid
{
    std::vector<double> angles;
    std::vector<std::vector<double>> distances;

    std::size_t size() const;
    std::vector<GridPoint> points() const;
};

struct PolarCodebook
{
    CMat atoms; // N x S, unit-norm columns
    PolarGrid grid;
    ArrayGeometry geometry;
    double wavelength = 0.0;
    double beta = 0.0;

    Eigen::Index size() const { return atoms.cols(); }
};

// Angles: N * oversampling samples, sin(theta_n) = -1 + 2 n / (N * oversampling).
// Distances at theta_n: one far-field atom at r_max * 1e3 followed by
// r_s = N^2 d^2 cos^2(theta_n) / (2 s beta^2 lambda), s = 1, 2, ..., keeping
// samples inside [r_min, r_max].
PolarGrid sample_grid(const ArrayGeometry &geom, double wavelength, double beta, double r_min, double r_max,
                      std::size_t oversampling = 1);

// Same angle set with a single planar-wave atom per angle.
PolarGrid sample_farfield_grid(const ArrayGeometry &geom, std::size_t oversampling = 1);

PolarCodebook build_codebook(const PolarGrid &grid, const ArrayGeometry &geom, double wavelength,
                             double beta = 0.0);

// Dr * Hp * Dt^H.
ChannelMatrix polar_synthesize(const CMat &hp, const PolarCodebook &dr, const PolarCodebook &dt);

// Flat column index of the grid point closest to (theta, r): nearest angle in
// sin(theta), then nearest distance in 1/r. Ties go to the smaller index.
std::size_t nearest_atom(double theta, double r, const PolarGrid &grid);

} // namespace xlmimo

#endif
