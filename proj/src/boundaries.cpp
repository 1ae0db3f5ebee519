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

#include "xlmimo/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xlmimo {

namespace {

void require_positive(double v, const char *what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char *what)
{
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

} // namespace

double miso_rd(double aperture, double wavelength)
{
    require_positive(aperture, "miso_rd: aperture");
    require_positive(wavelength, "miso_rd: wavelength");
    return 2.0 * aperture * aperture / wavelength;
}

double mimo_rd(double aperture_t, double aperture_r, double wavelength)
{
    require_nonnegative(aperture_t, "mimo_rd: transmitter aperture");
    require_nonnegative(aperture_r, "mimo_rd: receiver aperture");
    require_positive(aperture_t + aperture_r, "mimo_rd: total aperture");
    require_positive(wavelength, "mimo_rd: wavelength");
    const double s = aperture_t + aperture_r;
    return 2.0 * s * s / wavelength;
}

double mimo_ard(double aperture_t, double aperture_r, double wavelength)
{
    require_nonnegative(aperture_t, "mimo_ard: transmitter aperture");
    require_nonnegative(aperture_r, "mimo_ard: receiver aperture");
    require_positive(wavelength, "mimo_ard: wavelength");
    return 4.0 * aperture_t * aperture_r / wavelength;
}

BoundaryReport boundary_report(std::size_t n1, std::size_t n2, double freq_hz)
{
    require_positive(freq_hz, "boundary_report: frequency");
    const double lambda = wavelength_from_frequency(freq_hz);
    const double d1 = ArrayGeometry::half_wavelength(n1, lambda).aperture();
    const double d2 = ArrayGeometry::half_wavelength(n2, lambda).aperture();
    return BoundaryReport{miso_rd(d1, lambda), miso_rd(d2, lambda), mimo_rd(d1, d2, lambda),
                          mimo_ard(d1, d2, lambda), lambda, d1, d2};
}

double max_discrepancy_far(double r, double aperture_t, double aperture_r, double wavelength)
{
    require_positive(r, "max_discrepancy_far: r");
    require_positive(wavelength, "max_discrepancy_far: wavelength");
    const double s = aperture_t + aperture_r;
    return kPi * s * s / (4.0 * r * wavelength);
}

double max_discrepancy_near(double r, double aperture_t, double aperture_r, double wavelength)
{
    require_positive(r, "max_discrepancy_near: r");
    require_positive(wavelength, "max_discrepancy_near: wavelength");
    return kPi * aperture_t * aperture_r / (2.0 * r * wavelength);
}

namespace {

double exact_parallel(double r, double theta, double d1, double d2)
{
    return pair_distance_parallel(r * std::cos(theta), r * std::sin(theta), d1, d2);
}

double near_model_distance(double r, double theta, double d1, double d2)
{
    // transmitter element seen from the receiver centre, receiver element seen
    // from the transmitter centre
    return scatterer_distance(r, theta, d1) + scatterer_distance(r, -theta, d2) - r;
}

} // namespace

double phase_discrepancy_far(double r, double theta, double d1, double d2, double wavelength)
{
    return 2.0 * kPi / wavelength * (exact_parallel(r, theta, d1, d2) - pair_distance_taylor1(r, theta, d1, d2));
}

double phase_discrepancy_near(double r, double theta, double d1, double d2, double wavelength)
{
    return 2.0 * kPi / wavelength * (exact_parallel(r, theta, d1, d2) - near_model_distance(r, theta, d1, d2));
}

CMat parallel_los_matrix(double r, double theta, const ArrayGeometry &geom_t, const ArrayGeometry &geom_r,
                         double wavelength, LosModel model)
{
    require_positive(r, "parallel_los_matrix: r");
    require_positive(wavelength, "parallel_los_matrix: wavelength");
    const auto n1 = static_cast<Eigen::Index>(geom_t.num_elements());
    const auto n2 = static_cast<Eigen::Index>(geom_r.num_elements());
    const double k = 2.0 * kPi / wavelength;
    CMat h(n2, n1);
    for (Eigen::Index c = 0; c < n1; ++c)
    {
        const double d1 = geom_t.centered_offset(static_cast<std::size_t>(c) + 1);
        for (Eigen::Index row = 0; row < n2; ++row)
        {
            const double d2 = geom_r.centered_offset(static_cast<std::size_t>(row) + 1);
            double dist = 0.0;
            switch (model)
            {
            case LosModel::exact: dist = exact_parallel(r, theta, d1, d2); break;
            case LosModel::far_field: dist = pair_distance_taylor1(r, theta, d1, d2); break;
            case LosModel::near_field: dist = near_model_distance(r, theta, d1, d2); break;
            }
            h(row, c) = std::polar(1.0 / dist, -k * dist);
        }
    }
    return h;
}

double empirical_discrepancy(const CMat &h_exact, const CMat &h_model)
{
    if (h_exact.rows() != h_model.rows() || h_exact.cols() != h_model.cols())
        throw std::invalid_argument("empirical_discrepancy: shape mismatch");
    double worst = 0.0;
    for (Eigen::Index j = 0; j < h_exact.cols(); ++j)
        for (Eigen::Index i = 0; i < h_exact.rows(); ++i)
        {
            const double d = std::abs(wrap_phase(std::arg(h_exact(i, j)) - std::arg(h_model(i, j))));
            worst = std::max(worst, d);
        }
    return worst;
}

double empirical_discrepancy(const ChannelMatrix &h_exact, const ChannelMatrix &h_model)
{
    return empirical_discrepancy(h_exact.entries, h_model.entries);
}

CMat align_global_phase(const CMat &model, const CMat &reference)
{
    if (model.size() == 0 || reference.size() == 0)
        throw std::invalid_argument("align_global_phase: empty matrix");
    const double shift = std::arg(reference(0, 0)) - std::arg(model(0, 0));
    return model * std::polar(1.0, shift);
}

} // namespace xlmimo
