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

#include "xlmimo/polar_codebook.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace xlmimo {

namespace {

std::vector<double> uniform_sine_angles(std::size_t count)
{
    std::vector<double> angles(count);
    for (std::size_t n = 0; n < count; ++n)
        angles[n] = std::asin(-1.0 + 2.0 * static_cast<double>(n) / static_cast<double>(count));
    return angles;
}

} // namespace

std::size_t PolarGrid::size() const
{
    std::size_t s = 0;
    for (const auto &d : distances)
        s += d.size();
    return s;
}

std::vector<GridPoint> PolarGrid::points() const
{
    std::vector<GridPoint> out;
    out.reserve(size());
    for (std::size_t a = 0; a < angles.size(); ++a)
        for (double r : distances[a])
            out.push_back({a, angles[a], r});
    return out;
}

PolarGrid sample_grid(const ArrayGeometry &geom, double wavelength, double beta, double r_min, double r_max,
                      std::size_t oversampling)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("sample_grid: wavelength must be positive");
    if (!(beta > 0.0))
        throw std::invalid_argument("sample_grid: beta must be positive");
    if (!(r_min > 0.0) || !(r_min < r_max))
        throw std::invalid_argument("sample_grid: need 0 < r_min < r_max");
    if (oversampling == 0)
        throw std::invalid_argument("sample_grid: oversampling must be at least 1");

    const double n = static_cast<double>(geom.num_elements());
    const double d = geom.spacing();
    const double scale = n * n * d * d / (2.0 * beta * beta * wavelength);

    PolarGrid grid;
    grid.angles = uniform_sine_angles(geom.num_elements() * oversampling);
    grid.distances.resize(grid.angles.size());
    for (std::size_t a = 0; a < grid.angles.size(); ++a)
    {
        auto &ring = grid.distances[a];
        ring.push_back(r_max * 1e3);
        const double c = std::cos(grid.angles[a]);
        const double top = scale * c * c;
        for (std::size_t s = 1;; ++s)
        {
            const double r = top / static_cast<double>(s);
            if (r < r_min)
                break;
            if (r <= r_max)
                ring.push_back(r);
        }
    }
    if (grid.size() == 0)
        throw std::runtime_error("sample_grid: empty grid");
    return grid;
}

PolarGrid sample_farfield_grid(const ArrayGeometry &geom, std::size_t oversampling)
{
    if (oversampling == 0)
        throw std::invalid_argument("sample_farfield_grid: oversampling must be at least 1");
    PolarGrid grid;
    grid.angles = uniform_sine_angles(geom.num_elements() * oversampling);
    grid.distances.assign(grid.angles.size(), {std::numeric_limits<double>::infinity()});
    return grid;
}

PolarCodebook build_codebook(const PolarGrid &grid, const ArrayGeometry &geom, double wavelength, double beta)
{
    if (grid.distances.size() != grid.angles.size())
        throw std::invalid_argument("build_codebook: malformed grid");
    const auto pts = grid.points();
    if (pts.empty())
        throw std::invalid_argument("build_codebook: empty grid");

    CMat atoms(static_cast<Eigen::Index>(geom.num_elements()), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j)
    {
        const auto &p = pts[j];
        atoms.col(static_cast<Eigen::Index>(j)) = std::isinf(p.r) ? farfield_steering(p.theta, geom, wavelength)
                                                                  : nearfield_steering(p.theta, p.r, geom, wavelength);
    }
    return PolarCodebook{std::move(atoms), grid, geom, wavelength, beta};
}

ChannelMatrix polar_synthesize(const CMat &hp, const PolarCodebook &dr, const PolarCodebook &dt)
{
    if (hp.rows() != dr.size() || hp.cols() != dt.size())
        throw std::invalid_argument("polar_synthesize: polar matrix must be S2 x S1");
    ChannelMatrix out;
    out.entries = dr.atoms * hp * dt.atoms.adjoint();
    return out;
}

std::size_t nearest_atom(double theta, double r, const PolarGrid &grid)
{
    if (grid.angles.empty() || grid.size() == 0)
        throw std::invalid_argument("nearest_atom: empty grid");

    const double s = std::sin(theta);
    std::size_t best_angle = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < grid.angles.size(); ++a)
    {
        if (grid.distances[a].empty())
            continue;
        const double gap = std::abs(s - std::sin(grid.angles[a]));
        if (gap < best_gap)
        {
            best_gap = gap;
            best_angle = a;
        }
    }

    std::size_t offset = 0;
    for (std::size_t a = 0; a < best_angle; ++a)
        offset += grid.distances[a].size();

    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const auto &ring = grid.distances[best_angle];
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ring.size(); ++k)
    {
        const double gap = std::abs(inv_r - (std::isinf(ring[k]) ? 0.0 : 1.0 / ring[k]));
        if (gap < best_dist)
        {
            best_dist = gap;
            best = k;
        }
    }
    return offset + best;
}

} // namespace xlmimo
