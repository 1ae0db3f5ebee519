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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace xlmimo;

namespace {

constexpr double kLambda = 0.006;

double correlation(const CMat &a, const CMat &b)
{
    const cplx ip = (a.array().conjugate() * b.array()).sum();
    return std::abs(ip) / (a.norm() * b.norm());
}

// Per-entry oracle written from the coordinate picture rather than the closed form:
// transmit element at (0, d1), receive element at anchor + d2 * (sin phi, cos phi).
cplx los_entry_oracle(const LosParams &p, double d1, double d2)
{
    const double x = p.r * std::cos(p.theta) + d2 * std::sin(p.phi);
    const double y = p.r * std::sin(p.theta) + d2 * std::cos(p.phi) - d1;
    const double dist = std::hypot(x, y);
    return std::exp(cplx(0.0, -2.0 * kPi / kLambda * dist)) / dist;
}

double phase_gap(cplx a, cplx b) { return std::abs(std::arg(a * std::conj(b))); }

} // namespace

TEST(Steering, SingleElement)
{
    const CVec b = nearfield_steering(0.3, 100.0, ArrayGeometry(1, 0.003), kLambda);
    ASSERT_EQ(b.size(), 1);
    EXPECT_NEAR(std::abs(b(0) - cplx(1.0, 0.0)), 0.0, 1e-15);
}

TEST(Steering, UnitNorm)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(-1.5, 1.5), ur(1.0, 1000.0);
    for (int i = 0; i < 200; ++i)
    {
        const std::size_t n = 1 + rng() % 64;
        const ArrayGeometry g = ArrayGeometry::half_wavelength(n, kLambda);
        const CVec b = nearfield_steering(ua(rng), ur(rng), g, kLambda);
        EXPECT_NEAR(b.norm(), 1.0, 1e-14);
        for (Eigen::Index k = 0; k < b.size(); ++k)
            EXPECT_NEAR(std::abs(b(k)), 1.0 / std::sqrt(double(n)), 1e-15);
        EXPECT_NEAR(farfield_steering(ua(rng), g, kLambda).norm(), 1.0, 1e-14);
    }
}

TEST(Steering, EntryUsesScattererDistance)
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(9, kLambda);
    const double th = 0.35, r = 4.0;
    const CVec b = nearfield_steering(th, r, g, kLambda);
    for (std::size_t n = 1; n <= 9; ++n)
    {
        const double rn = scatterer_distance(r, th, g.centered_offset(n));
        const cplx want = std::exp(cplx(0.0, 2.0 * kPi / kLambda * (rn - r))) / 3.0;
        EXPECT_LT(std::abs(b(Eigen::Index(n - 1)) - want), 1e-12);
    }
}

TEST(Steering, FarFieldLimit)
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(16, kLambda);
    const double r = 1e6 * g.aperture() * g.aperture() / kLambda;
    for (double th : {-1.0, -0.2, 0.0, 0.6})
    {
        const CVec b = nearfield_steering(th, r, g, kLambda);
        const CVec a = farfield_steering(th, g, kLambda);
        for (Eigen::Index k = 0; k < b.size(); ++k)
            EXPECT_LT(phase_gap(b(k), a(k)), 1e-3);
    }
}

TEST(Steering, FarFieldExamples)
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(8, kLambda);
    const CVec a0 = farfield_steering(0.0, g, kLambda);
    for (Eigen::Index k = 0; k < 8; ++k)
        EXPECT_LT(std::abs(a0(k) - 1.0 / std::sqrt(8.0)), 1e-15);
    const CVec a = farfield_steering(0.4, g, kLambda);
    EXPECT_NEAR(std::abs(a.dot(a)), 1.0, 1e-14);
    // sin(theta) on multiples of 2/N: geometric series sums to zero.
    for (int m = 1; m < 4; ++m)
    {
        const CVec b = farfield_steering(std::asin(2.0 * m / 8.0), g, kLambda);
        EXPECT_LT(std::abs(a0.dot(b)), 1e-14);
    }
}

TEST(Los, ScalarExample)
{
    const ArrayGeometry g(1, 0.003);
    const ChannelMatrix h = los_channel({100.0, 0.2, 0.1}, g, g, kLambda);
    ASSERT_EQ(h.rows(), 1);
    EXPECT_NEAR(std::abs(h.entries(0, 0)), 0.01, 1e-15);
    const double want = std::remainder(-2.0 * kPi * 100.0 / kLambda, 2.0 * kPi);
    EXPECT_NEAR(std::remainder(std::arg(h.entries(0, 0)) - want, 2.0 * kPi), 0.0, 1e-9);
}

TEST(Los, EntriesMatchCoordinateOracle)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(-1.0, 1.0), ur(2.0, 300.0), up(-0.8, 0.8);
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(17, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(11, kLambda);
    for (int t = 0; t < 20; ++t)
    {
        const LosParams p{ur(rng), ua(rng), up(rng)};
        const ChannelMatrix h = los_channel(p, gt, gr, kLambda);
        ASSERT_EQ(h.rows(), 11);
        ASSERT_EQ(h.cols(), 17);
        for (int s = 0; s < 5; ++s)
        {
            const std::size_t n1 = 1 + rng() % 17, n2 = 1 + rng() % 11;
            const cplx got = h.entries(Eigen::Index(n2 - 1), Eigen::Index(n1 - 1));
            const double dist = pair_distance_exact(p.r, p.theta, p.phi, gt.anchored_offset(n1),
                                                    gr.anchored_offset(n2));
            EXPECT_NEAR(std::abs(got) * dist, 1.0, 1e-12);
            const cplx want = los_entry_oracle(p, gt.anchored_offset(n1), gr.anchored_offset(n2));
            EXPECT_LT(std::abs(got - want) / std::abs(want), 1e-8);
        }
        EXPECT_NEAR(std::abs(h.entries(0, 0)) * p.r, 1.0, 1e-14);
    }
}

TEST(Los, FarFieldDegeneracy)
{
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(8, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(4, kLambda);
    const LosParams p{1e5, 0.3, 0.1};
    const CMat h = los_channel(p, gt, gr, kLambda).entries;
    const CMat rank1 = farfield_steering(p.theta + p.phi, gr, kLambda) * farfield_steering(p.theta, gt, kLambda).adjoint();
    EXPECT_GT(correlation(h, rank1), 0.9999);
}

TEST(Los, ReciprocityUnderRoleSwap)
{
    // Viewed from the receiver, the departure angle becomes -(theta + phi) with the same rotation.
    // Entries are transposed; a conjugate transpose would flip every phase and is not physical.
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(12, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(6, kLambda);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ua(-0.6, 0.6), ur(1.0, 80.0), up(-0.4, 0.4);
    for (int t = 0; t < 20; ++t)
    {
        const LosParams p{ur(rng), ua(rng), up(rng)};
        const CMat h = los_channel(p, gt, gr, kLambda).entries;
        const CMat back = los_channel({p.r, -(p.theta + p.phi), p.phi}, gr, gt, kLambda).entries;
        EXPECT_LT((back - h.transpose()).norm() / h.norm(), 1e-9);
    }
}

TEST(Los, RejectsInvalidParams)
{
    const ArrayGeometry g(4, 0.003);
    EXPECT_THROW(los_channel({0.0, 0.0, 0.0}, g, g, kLambda), std::invalid_argument);
    EXPECT_THROW(los_channel({10.0, kPi / 2, 0.0}, g, g, kLambda), std::invalid_argument);
    EXPECT_THROW(los_channel({10.0, 0.0, -kPi}, g, g, kLambda), std::invalid_argument);
    EXPECT_THROW(los_channel({10.0, 0.0, 0.0}, g, g, 0.0), std::invalid_argument);
}

TEST(Nlos, Examples)
{
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(16, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(8, kLambda);
    const PathComponent a{cplx(1.0, 0.0), 0.2, -0.3, 20.0, 35.0};
    EXPECT_NEAR(nlos_channel({a}, gt, gr, kLambda).entries.norm(), 1.0, 1e-13);
    PathComponent b = a;
    b.gain = -a.gain;
    EXPECT_LT(nlos_channel({a, b}, gt, gr, kLambda).entries.norm(), 1e-15);
    EXPECT_THROW(nlos_channel({}, gt, gr, kLambda), std::invalid_argument);
    EXPECT_EQ(nlos_channel({}, gt, gr, kLambda, true).entries.norm(), 0.0);
    PathComponent bad = a;
    bad.dist_r = 0.0;
    EXPECT_THROW(nlos_channel({bad}, gt, gr, kLambda), std::invalid_argument);
}

TEST(Nlos, MatchesBruteForce)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ua(-1.2, 1.2), ud(1.0, 200.0), ug(-1.0, 1.0);
    for (int t = 0; t < 10; ++t)
    {
        const std::size_t n1 = 1 + rng() % 16, n2 = 1 + rng() % 16, num = 1 + rng() % 4;
        const ArrayGeometry gt = ArrayGeometry::half_wavelength(n1, kLambda);
        const ArrayGeometry gr = ArrayGeometry::half_wavelength(n2, kLambda);
        std::vector<PathComponent> paths;
        for (std::size_t l = 0; l < num; ++l)
            paths.push_back({cplx(ug(rng), ug(rng)), ua(rng), ua(rng), ud(rng), ud(rng)});
        const CMat h = nlos_channel(paths, gt, gr, kLambda).entries;
        const double k = 2.0 * kPi / kLambda;
        for (std::size_t i = 1; i <= n2; ++i)
            for (std::size_t j = 1; j <= n1; ++j)
            {
                cplx want = 0.0;
                for (const auto &p : paths)
                {
                    const double rr = std::hypot(p.dist_r * std::cos(p.theta_r),
                                                 p.dist_r * std::sin(p.theta_r) - gr.centered_offset(i));
                    const double rt = std::hypot(p.dist_t * std::cos(p.theta_t),
                                                 p.dist_t * std::sin(p.theta_t) - gt.centered_offset(j));
                    want += p.gain * std::exp(cplx(0.0, k * ((rr - p.dist_r) - (rt - p.dist_t)))) /
                            std::sqrt(double(n1 * n2));
                }
                EXPECT_LT(std::abs(h(Eigen::Index(i - 1), Eigen::Index(j - 1)) - want), 1e-9);
            }
        EXPECT_LT(Eigen::FullPivLU<CMat>(h).setThreshold(1e-9).rank(), Eigen::Index(num + 1));
    }
}

TEST(Mixed, Examples)
{
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(8, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(4, kLambda);
    const ChannelMatrix los = los_channel({30.0, 0.1, 0.05}, gt, gr, kLambda);
    const ChannelMatrix nlos = nlos_channel({{cplx(0.01, 0.02), 0.2, 0.3, 10.0, 40.0}}, gt, gr, kLambda);
    ChannelMatrix zero_n = nlos;
    zero_n.entries.setZero();
    ChannelMatrix zero_l = los;
    zero_l.entries.setZero();
    EXPECT_EQ(mixed_channel(los, zero_n).entries, los.entries);
    EXPECT_EQ(mixed_channel(zero_l, nlos).entries, nlos.entries);
    const ChannelMatrix h = mixed_channel(los, nlos);
    EXPECT_LE(h.entries.norm(), los.entries.norm() + nlos.entries.norm());
    ASSERT_TRUE(h.los_part && h.nlos_part);
    EXPECT_EQ(h.entries, *h.los_part + *h.nlos_part);
    EXPECT_THROW(mixed_channel(los, nlos_channel({{cplx(1, 0), 0.2, 0.3, 10.0, 40.0}}, gt, gt, kLambda)),
                 std::invalid_argument);
}

TEST(Scene, DeterministicAndInRange)
{
    SceneConfig cfg;
    Rng a(42), b(42);
    const Scene s1 = sample_scene(a, cfg, 64, 32), s2 = sample_scene(b, cfg, 64, 32);
    EXPECT_EQ(s1.los, s2.los);
    ASSERT_EQ(s1.paths.size(), 3u);
    for (std::size_t l = 0; l < 3; ++l)
        EXPECT_EQ(s1.paths[l].gain, s2.paths[l].gain);

    Rng rng(1);
    double sum = 0.0, amin = 10.0, amax = -10.0;
    const int count = 10000;
    for (int i = 0; i < count; ++i)
    {
        const Scene s = sample_scene(rng, cfg, 64, 32);
        amin = std::min({amin, s.los.theta, s.paths[0].theta_t});
        amax = std::max({amax, s.los.theta, s.paths[0].theta_r});
        EXPECT_GE(s.los.r, 50.0);
        EXPECT_LE(s.los.r, 500.0);
        EXPECT_GE(s.los.phi, -kPi / 8);
        EXPECT_LE(s.los.phi, kPi / 8);
        sum += s.los.r;
    }
    EXPECT_GT(amin, -kPi / 3);
    EXPECT_LT(amax, kPi / 3);
    const double sigma_mean = 450.0 / std::sqrt(12.0) / std::sqrt(double(count));
    EXPECT_LT(std::abs(sum / count - 275.0), 3.0 * sigma_mean);
}

TEST(Scene, GainVarianceFollowsKappa)
{
    SceneConfig cfg;
    cfg.kappa_mode = KappaMode::per_scene;
    cfg.kappa = 0.2;
    EXPECT_DOUBLE_EQ(nlos_gain_variance(cfg, 64, 32, 100.0), 0.2 * 2048 / 1e4);
    cfg.kappa_mode = KappaMode::fixed_distance;
    EXPECT_DOUBLE_EQ(nlos_gain_variance(cfg, 64, 32, 400.0), 0.2 * 2048 / 1e4);

    // Empirical NLoS-to-LoS power at r = r_ref is about kappa.
    cfg.kappa = 0.1;
    Rng rng(8);
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(16, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(8, kLambda);
    double ratio = 0.0;
    const int count = 2000;
    for (int i = 0; i < count; ++i)
    {
        const Scene s = sample_scene(rng, cfg, 16, 8, 100.0);
        const ChannelMatrix h = scene_channel(s, gt, gr, kLambda);
        ratio += h.nlos_part->squaredNorm() / h.los_part->squaredNorm();
    }
    EXPECT_NEAR(ratio / count, 0.1, 0.01);
}

TEST(Scene, RejectsEmptyRanges)
{
    Rng rng(1);
    SceneConfig cfg;
    cfg.dist_min = cfg.dist_max = 100.0;
    EXPECT_THROW(sample_scene(rng, cfg, 4, 4), std::invalid_argument);
    cfg = SceneConfig{};
    cfg.angle_min = 0.5;
    cfg.angle_max = 0.5;
    EXPECT_THROW(sample_scene(rng, cfg, 4, 4), std::invalid_argument);
}
