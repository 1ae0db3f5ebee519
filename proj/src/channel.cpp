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

#include "xlmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace xlmimo {

namespace {

void require_wavelength(double wavelength, const char *who)
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw std::invalid_argument(std::string(who) + ": wavelength must be positive");
}

bool open_half_plane(double a) { return a > -kPi / 2.0 && a < kPi / 2.0; }

} // namespace

void LosParams::validate() const
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("LosParams: r must be positive");
    if (!open_half_plane(theta))
        throw std::invalid_argument("LosParams: theta outside (-pi/2, pi/2)");
    if (!(phi > -kPi && phi <= kPi))
        throw std::invalid_argument("LosParams: phi outside (-pi, pi]");
}

void PathComponent::validate() const
{
    if (!(dist_t > 0.0) || !(dist_r > 0.0))
        throw std::invalid_argument("PathComponent: distances must be positive");
    if (!open_half_plane(theta_t) || !open_half_plane(theta_r))
        throw std::invalid_argument("PathComponent: angles outside (-pi/2, pi/2)");
}

CVec nearfield_steering(double theta, double r, const ArrayGeometry &geom, double wavelength)
{
    require_wavelength(wavelength, "nearfield_steering");
    if (!(r > 0.0))
        throw std::invalid_argument("nearfield_steering: r must be positive");
    const auto n = static_cast<Eigen::Index>(geom.num_elements());
    const double k = 2.0 * kPi / wavelength;
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVec b(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double rn = scatterer_distance(r, theta, geom.centered_offset(static_cast<std::size_t>(i) + 1));
        b(i) = std::polar(amp, k * (rn - r));
    }
    return b;
}

CVec farfield_steering(double theta, const ArrayGeometry &geom, double wavelength)
{
    require_wavelength(wavelength, "farfield_steering");
    const auto n = static_cast<Eigen::Index>(geom.num_elements());
    const double k = 2.0 * kPi / wavelength;
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    const double s = std::sin(theta);
    CVec a(n);
    for (Eigen::Index i = 0; i < n; ++i)
        a(i) = std::polar(amp, -k * geom.centered_offset(static_cast<std::size_t>(i) + 1) * s);
    return a;
}

ChannelMatrix los_channel(const LosParams &params, const ArrayGeometry &geom_t,
                          const ArrayGeometry &geom_r, double wavelength)
{
    params.validate();
    require_wavelength(wavelength, "los_channel");
    const auto n1 = static_cast<Eigen::Index>(geom_t.num_elements());
    const auto n2 = static_cast<Eigen::Index>(geom_r.num_elements());
    const double k = 2.0 * kPi / wavelength;

    CMat h(n2, n1);
    for (Eigen::Index c = 0; c < n1; ++c)
    {
        const double d1 = geom_t.anchored_offset(static_cast<std::size_t>(c) + 1);
        for (Eigen::Index row = 0; row < n2; ++row)
        {
            const double d2 = geom_r.anchored_offset(static_cast<std::size_t>(row) + 1);
            const double dist = pair_distance_exact(params.r, params.theta, params.phi, d1, d2);
            h(row, c) = std::polar(1.0 / dist, -k * dist);
        }
    }

    ChannelMatrix out;
    out.los_part = h;
    out.entries = std::move(h);
    out.scene = Scene{params, {}};
    return out;
}

ChannelMatrix nlos_channel(const std::vector<PathComponent> &paths, const ArrayGeometry &geom_t,
                           const ArrayGeometry &geom_r, double wavelength, bool allow_empty)
{
    require_wavelength(wavelength, "nlos_channel");
    if (paths.empty() && !allow_empty)
        throw std::invalid_argument("nlos_channel: empty path list");

    const auto n1 = static_cast<Eigen::Index>(geom_t.num_elements());
    const auto n2 = static_cast<Eigen::Index>(geom_r.num_elements());
    CMat h = CMat::Zero(n2, n1);
    for (const auto &p : paths)
    {
        p.validate();
        const CVec bt = nearfield_steering(p.theta_t, p.dist_t, geom_t, wavelength);
        const CVec br = nearfield_steering(p.theta_r, p.dist_r, geom_r, wavelength);
        h.noalias() += p.gain * br * bt.adjoint();
    }

    ChannelMatrix out;
    out.nlos_part = h;
    out.entries = std::move(h);
    return out;
}

ChannelMatrix mixed_channel(const ChannelMatrix &los, const ChannelMatrix &nlos)
{
    if (los.rows() != nlos.rows() || los.cols() != nlos.cols())
        throw std::invalid_argument("mixed_channel: shape mismatch");
    ChannelMatrix out;
    out.entries = los.entries + nlos.entries;
    out.los_part = los.entries;
    out.nlos_part = nlos.entries;
    if (los.scene)
    {
        Scene s = *los.scene;
        if (nlos.scene)
            s.paths = nlos.scene->paths;
        out.scene = std::move(s);
    }
    return out;
}

ChannelMatrix scene_channel(const Scene &scene, const ArrayGeometry &geom_t, const ArrayGeometry &geom_r,
                            double wavelength)
{
    ChannelMatrix nlos = nlos_channel(scene.paths, geom_t, geom_r, wavelength, true);
    nlos.scene = Scene{scene.los, scene.paths};
    return mixed_channel(los_channel(scene.los, geom_t, geom_r, wavelength), nlos);
}

void SceneConfig::validate() const
{
    if (!(angle_min < angle_max) || !open_half_plane(angle_min) || !open_half_plane(angle_max))
        throw std::invalid_argument("SceneConfig: angle range must be a nonempty subrange of (-pi/2, pi/2)");
    if (!(dist_min > 0.0) || !(dist_min < dist_max))
        throw std::invalid_argument("SceneConfig: distance range must satisfy 0 < min < max");
    if (!(phi_min <= phi_max) || phi_min <= -kPi || phi_max > kPi)
        throw std::invalid_argument("SceneConfig: phi range must lie in (-pi, pi]");
    if (num_paths < 0)
        throw std::invalid_argument("SceneConfig: path count must be nonnegative");
    if (!(kappa >= 0.0) || !(kappa_ref_distance > 0.0))
        throw std::invalid_argument("SceneConfig: kappa must be >= 0 and the reference distance > 0");
}

double nlos_gain_variance(const SceneConfig &cfg, std::size_t n1, std::size_t n2, double los_r)
{
    const double ref = cfg.kappa_mode == KappaMode::per_scene ? los_r : cfg.kappa_ref_distance;
    return cfg.kappa * static_cast<double>(n1 * n2) / (ref * ref);
}

Scene sample_scene(Rng &rng, const SceneConfig &cfg, std::size_t n1, std::size_t n2,
                   std::optional<double> fixed_los_r)
{
    cfg.validate();
    std::uniform_real_distribution<double> angle(cfg.angle_min, cfg.angle_max);
    std::uniform_real_distribution<double> dist(cfg.dist_min, cfg.dist_max);
    std::normal_distribution<double> normal(0.0, 1.0);

    Scene s;
    s.los.r = dist(rng);
    s.los.theta = angle(rng);
    s.los.phi = cfg.phi_min == cfg.phi_max ? cfg.phi_min
                                           : std::uniform_real_distribution<double>(cfg.phi_min, cfg.phi_max)(rng);
    if (fixed_los_r)
        s.los.r = *fixed_los_r;

    const double var = nlos_gain_variance(cfg, n1, n2, s.los.r);
    const double per_path = cfg.num_paths > 0 ? var / cfg.num_paths : 0.0;
    const double sd = std::sqrt(per_path / 2.0);
    s.paths.reserve(static_cast<std::size_t>(cfg.num_paths));
    for (int l = 0; l < cfg.num_paths; ++l)
    {
        PathComponent p;
        p.theta_t = angle(rng);
        p.theta_r = angle(rng);
        p.dist_t = dist(rng);
        p.dist_r = dist(rng);
        const double re = normal(rng);
        const double im = normal(rng);
        p.gain = cplx(sd * re, sd * im);
        s.paths.push_back(p);
    }
    return s;
}

} // namespace xlmimo
