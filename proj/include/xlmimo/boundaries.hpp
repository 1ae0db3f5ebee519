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

#ifndef XLMIMO_BOUNDARIES_HPP
#define XLMIMO_BOUNDARIES_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/geometry.hpp"
#include "xlmimo/types.hpp"

#include <cstddef>

namespace xlmimo {

struct BoundaryReport
{
    double miso_rd_t = 0.0;
    double miso_rd_r = 0.0;
    double mimo_rd = 0.0;
    double mimo_ard = 0.0;
    double wavelength = 0.0;
    double aperture_t = 0.0;
    double aperture_r = 0.0;
};

// 2 D^2 / lambda.
double miso_rd(double aperture, double wavelength);
// 2 (D1 + D2)^2 / lambda. Either aperture may be zero, not both.
double mimo_rd(double aperture_t, double aperture_r, double wavelength);
// 4 D1 D2 / lambda.
double mimo_ard(double aperture_t, double aperture_r, double wavelength);

// Half-wavelength arrays of n1 and n2 elements at carrier freq_hz.
BoundaryReport boundary_report(std::size_t n1, std::size_t n2, double freq_hz);

// Worst-case phase error of the planar-wave (first order) model: pi (D1 + D2)^2 / (4 r lambda).
double max_discrepancy_far(double r, double aperture_t, double aperture_r, double wavelength);
// Worst-case phase error of the steering-vector product model: pi D1 D2 / (2 r lambda).
double max_discrepancy_near(double r, double aperture_t, double aperture_r, double wavelength);

// Exact minus model phase for one antenna pair of the parallel-array layout
// (centred offsets d1, d2; receiver centre at polar (r, theta)), in radians.
double phase_discrepancy_far(double r, double theta, double d1, double d2, double wavelength);
double phase_discrepancy_near(double r, double theta, double d1, double d2, double wavelength);

enum class LosModel
{
    exact,      // per-pair spherical distance
    far_field,  // r + (d2 - d1) sin(theta)
    near_field  // sum of the two one-sided spherical distances minus r
};

// LoS matrix of the parallel-array layout under the chosen propagation model.
// Entries are exp(-j 2 pi dist / lambda) / dist.
CMat parallel_los_matrix(double r, double theta, const ArrayGeometry &geom_t, const ArrayGeometry &geom_r,
                         double wavelength, LosModel model);

// max over entries of |wrap(arg exact - arg model)|.
double empirical_discrepancy(const CMat &h_exact, const CMat &h_model);
double empirical_discrepancy(const ChannelMatrix &h_exact, const ChannelMatrix &h_model);

// Rotates `model` by a common phase so that its (0, 0) entry has the phase of
// reference(0, 0).
CMat align_global_phase(const CMat &model, const CMat &reference);

} // namespace xlmimo

#endif
