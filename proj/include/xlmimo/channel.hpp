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

#ifndef XLMIMO_CHANNEL_HPP
#define XLMIMO_CHANNEL_HPP

#include "xlmimo/geometry.hpp"
#include "xlmimo/rng.hpp"
#include "xlmimo/types.hpp"

#include <optional>
#include <vector>

namespace xlmimo {

// Geometric parameters of the line-of-sight component.
//   r     distance between transmitter element 1 and receiver element 1 [m]
//   theta angle of departure, (-pi/2, pi/2)
//   phi   rotation of the receiver array relative to the transmitter array
struct LosParams
{
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    void validate() const;
    bool operator==(const LosParams &) const = default;
};

// One scattered path: complex gain and (angle, distance) of the scatterer as
// seen from the centre of each array.
struct PathComponent
{
    cplx gain{0.0, 0.0};
    double theta_t = 0.0;
    double theta_r = 0.0;
    double dist_t = 0.0;
    double dist_r = 0.0;

    void validate() const;
};

struct Scene
{
    LosParams los;
    std::vector<PathComponent> paths;
};

struct ChannelMatrix
{
    CMat entries;
    std::optional<CMat> los_part;
    std::optional<CMat> nlos_part;
    std::optional<Scene> scene;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

// Spherical-wave array response, unit norm. Entry n is
// exp(+j 2 pi / lambda (r_n - r)) / sqrt(N) with r_n the distance from the
// point (theta, r) to the n-th element (centred offsets).
CVec nearfield_steering(double theta, double r, const ArrayGeometry &geom, double wavelength);

// Planar-wave response exp(-j 2 pi / lambda delta_n d sin(theta)) / sqrt(N),
// the r -> infinity limit of nearfield_steering.
CVec farfield_steering(double theta, const ArrayGeometry &geom, double wavelength);

// Exact free-space LoS matrix (N2 x N1): H(n2, n1) = exp(-j 2 pi r~ / lambda) / r~
// with r~ = pair_distance_exact over anchored offsets (n - 1) d.
ChannelMatrix los_channel(const LosParams &params, const ArrayGeometry &geom_t,
                          const ArrayGeometry &geom_r, double wavelength);

// Sum of steering-vector products g_l b_r b_t^H. An empty path list is an error
// unless allow_empty is set, in which case the zero matrix is returned.
ChannelMatrix nlos_channel(const std::vector<PathComponent> &paths, const ArrayGeometry &geom_t,
                           const ArrayGeometry &geom_r, double wavelength, bool allow_empty = false);

ChannelMatrix mixed_channel(const ChannelMatrix &los, const ChannelMatrix &nlos);

// LoS + NLoS channel of a sampled scene (the NLoS part is zero when the scene
// has no paths).
ChannelMatrix scene_channel(const Scene &scene, const ArrayGeometry &geom_t, const ArrayGeometry &geom_r,
                            double wavelength);

// How the NLoS gain variance is tied to the LoS energy.
enum class KappaMode
{
    fixed_distance, // sigma_g^2 = kappa * N1 N2 / r_ref^2, independent of the scene's r
    per_scene       // sigma_g^2 = kappa * N1 N2 / r^2, constant power ratio across r
};

struct SceneConfig
{
    double angle_min = -kPi / 3.0;
    double angle_max = kPi / 3.0;
    double dist_min = 50.0;
    double dist_max = 500.0;
    double phi_min = -kPi / 8.0;
    double phi_max = kPi / 8.0;
    int num_paths = 3;
    double kappa = 0.1;
    double kappa_ref_distance = 100.0;
    KappaMode kappa_mode = KappaMode::fixed_distance;

    void validate() const;
};

// Variance of each path gain for a scene whose LoS distance is los_r.
double nlos_gain_variance(const SceneConfig &cfg, std::size_t n1, std::size_t n2, double los_r);

// Draws LoS parameters and paths: angles ~ U(angle range), distances ~
// U(dist range), phi ~ U(phi range), g_l ~ CN(0, sigma_g^2 / L).
// fixed_los_r, when set, replaces the sampled LoS distance.
Scene sample_scene(Rng &rng, const SceneConfig &cfg, std::size_t n1, std::size_t n2,
                   std::optional<double> fixed_los_r = std::nullopt);

} // namespace xlmimo

#endif
