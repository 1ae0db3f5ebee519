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
#include "xlmimo/estimation.hpp"
#include "xlmimo/measurement.hpp"
#include "xlmimo/metrics.hpp"
#include "xlmimo/omp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

using namespace xlmimo;

namespace {

constexpr double kLambda = 0.01;

struct Dictionaries
{
    ArrayGeometry gt = ArrayGeometry::half_wavelength(16, kLambda);
    ArrayGeometry gr = ArrayGeometry::half_wavelength(8, kLambda);
    PolarCodebook dt = build_codebook(sample_grid(gt, kLambda, 1.2, 0.02, 50), gt, kLambda);
    PolarCodebook dr = build_codebook(sample_grid(gr, kLambda, 1.2, 0.02, 50), gr, kLambda);
};

CMat forward(const CMat &h, const RMat &p, const RMat &w) { return w.cast<cplx>() * h * p.cast<cplx>(); }

CodebookSpec small_codebook()
{
    CodebookSpec cb;
    cb.r_min = 0.02;
    cb.r_max = 50.0;
    return cb;
}

TwoStageOptions small_options()
{
    TwoStageOptions o;
    o.grid.r_min = 1.0;
    o.grid.r_max = 5.0;
    o.grid.r_steps = 8;
    o.grid.theta_min = -0.6;
    o.grid.theta_max = 0.6;
    o.grid.theta_steps = 12;
    o.grid.phi_min = -0.2;
    o.grid.phi_max = 0.2;
    o.grid.phi_steps = 4;
    o.sparsity = 3;
    return o;
}

} // namespace

TEST(Omp, SplitFlatIndex)
{
    EXPECT_EQ(split_flat_index(1, 7), (AtomPair{1, 1}));
    EXPECT_EQ(split_flat_index(8, 7), (AtomPair{2, 1}));
    EXPECT_EQ(split_flat_index(7, 7), (AtomPair{1, 7}));
    EXPECT_EQ(split_flat_index(15, 7), (AtomPair{3, 1}));
    EXPECT_THROW(split_flat_index(0, 7), std::invalid_argument);
    EXPECT_THROW(split_flat_index(3, 0), std::invalid_argument);
}

TEST(Omp, FirstPickIsFlatArgmax)
{
    const Dictionaries d;
    Rng rng(1);
    const RMat p = gen_pilot(16, 12, rng), w = gen_combiner(4, 8, rng);
    const CMat y = observe(CMat::Random(8, 16), p, w, 0.0, rng).y;
    // vec(A_r^H Y A_t^H) flattened column-major; Step 3 split with the receive codebook size.
    const CMat z = (w.cast<cplx>() * d.dr.atoms).adjoint() * y * (d.dt.atoms.adjoint() * p.cast<cplx>()).adjoint();
    Eigen::Index best = 0;
    for (Eigen::Index n = 0; n < z.size(); ++n)
        if (std::norm(z.data()[n]) > std::norm(z.data()[best]))
            best = n;
    const AtomPair want = split_flat_index(std::size_t(best) + 1, std::size_t(d.dr.size()));
    const OmpResult res = estimate_nlos(y, p, w, d.dt, d.dr, 1);
    EXPECT_EQ(res.support[0].tx + 1, want.tx);
    EXPECT_EQ(res.support[0].rx + 1, want.rx);
}

TEST(Omp, ExactOnGridSinglePath)
{
    const Dictionaries d;
    Rng rng(2);
    // Orthogonal sensing keeps the atom Gram matrix, so the true pair has the largest correlation.
    const RMat p = hadamard(16) / 4.0, w = hadamard(8) / std::sqrt(8.0);
    for (int t = 0; t < 20; ++t)
    {
        const std::size_t it = rng() % std::size_t(d.dt.size()), ir = rng() % std::size_t(d.dr.size());
        const cplx g(0.3 + double(t) / 10, -0.7);
        const CMat h = g * d.dr.atoms.col(Eigen::Index(ir)) * d.dt.atoms.col(Eigen::Index(it)).adjoint();
        const OmpResult res = estimate_nlos(forward(h, p, w), p, w, d.dt, d.dr, 1);
        ASSERT_EQ(res.support.size(), 1u);
        EXPECT_EQ(res.support[0], (AtomPair{it, ir}));
        EXPECT_LT(nmse(h, res.channel.entries), 1e-10);
        EXPECT_LT(res.residual_norms.back(), 1e-10 * res.residual_norms.front());
        EXPECT_LT(std::abs(res.coefficients(0) - g), 1e-9);
    }
}

TEST(Omp, ZeroObservation)
{
    const Dictionaries d;
    Rng rng(3);
    const RMat p = gen_pilot(16, 8, rng), w = gen_combiner(4, 8, rng);
    const OmpResult res = estimate_nlos(CMat::Zero(4, 8), p, w, d.dt, d.dr, 3);
    EXPECT_EQ(res.support.size(), 3u);
    EXPECT_EQ(res.coefficients.norm(), 0.0);
    EXPECT_EQ(res.channel.entries.norm(), 0.0);
}

TEST(Omp, ResidualMonotoneAndSupportDistinct)
{
    const Dictionaries d;
    Rng rng(4);
    for (int t = 0; t < 10; ++t)
    {
        const RMat p = gen_pilot(16, 8, rng), w = gen_combiner(4, 8, rng);
        const CMat y = observe(CMat::Random(8, 16), p, w, 0.1, rng).y;
        const OmpResult res = estimate_nlos(y, p, w, d.dt, d.dr, 12);
        ASSERT_EQ(res.residual_norms.size(), 13u);
        for (std::size_t i = 1; i < res.residual_norms.size(); ++i)
            EXPECT_LE(res.residual_norms[i], res.residual_norms[i - 1] * (1 + 1e-12));
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto &a : res.support)
            EXPECT_TRUE(seen.insert({a.tx, a.rx}).second);
    }
}

TEST(Omp, CollidingAtomsAreRegularised)
{
    const ArrayGeometry gt = ArrayGeometry::half_wavelength(8, kLambda);
    const ArrayGeometry gr = ArrayGeometry::half_wavelength(4, kLambda);
    // The same grid point twice makes two identical columns.
    const PolarGrid twin{{0.1, 0.1}, {{3.0}, {3.0}}};
    const PolarCodebook dt = build_codebook(twin, gt, kLambda);
    const PolarCodebook dr = build_codebook(PolarGrid{{0.2}, {{2.0}}}, gr, kLambda);
    Rng rng(5);
    const RMat p = gen_pilot(8, 8, rng), w = gen_combiner(4, 4, rng);
    const CMat h = dr.atoms.col(0) * dt.atoms.col(0).adjoint();
    const OmpResult res = estimate_nlos(forward(h, p, w), p, w, dt, dr, 2);
    EXPECT_TRUE(res.regularized);
    EXPECT_TRUE(res.channel.entries.allFinite());
    EXPECT_LT(nmse(h, res.channel.entries), 1e-8);
}

TEST(Omp, RejectsBadInput)
{
    const Dictionaries d;
    Rng rng(6);
    const RMat p = gen_pilot(16, 8, rng), w = gen_combiner(4, 8, rng);
    const CMat y = CMat::Zero(4, 8);
    EXPECT_THROW(estimate_nlos(y, p, w, d.dt, d.dr, 0), std::invalid_argument);
    EXPECT_THROW(estimate_nlos(y, p, w, d.dr, d.dt, 1), std::invalid_argument);
    EXPECT_THROW(estimate_nlos(y.leftCols(3), p, w, d.dt, d.dr, 1), std::invalid_argument);
    const PolarCodebook tiny = build_codebook(PolarGrid{{0.0}, {{3.0}}}, d.gt, kLambda);
    const PolarCodebook tiny_r = build_codebook(PolarGrid{{0.0}, {{3.0}}}, d.gr, kLambda);
    EXPECT_THROW(estimate_nlos(y, p, w, tiny, tiny_r, 2), std::invalid_argument);
}

TEST(TwoStage, LosOnlySceneLeavesLittleForNlos)
{
    const Dictionaries d;
    const EstimationContext ctx = make_context(d.gt, d.gr, kLambda, small_codebook());
    const TwoStageOptions opt = small_options();
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        Rng rng(100 + seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const LosParams truth{3.0 + 1.5 * u(rng), 0.5 * u(rng), 0.15 * u(rng)};
        const RMat p = gen_pilot(16, 16, rng), w = gen_combiner(4, 8, rng);
        const CMat h = los_channel(truth, d.gt, d.gr, kLambda).entries;
        const EstimateReport rep = two_stage(forward(h, p, w), p, w, ctx, opt);
        EXPECT_LE(rep.h_nlos_hat.entries.squaredNorm(), 0.01 * rep.h_los_hat.entries.squaredNorm());
        EXPECT_LT(nmse(h, rep.h_los_hat.entries), 1e-4);
        ASSERT_TRUE(rep.los_params_hat.has_value());
    }
}

TEST(TwoStage, ReportInvariants)
{
    const Dictionaries d;
    const EstimationContext ctx = make_context(d.gt, d.gr, kLambda, small_codebook());
    const TwoStageOptions opt = small_options();
    Rng rng(7);
    SceneConfig sc;
    sc.dist_min = 1.5;
    sc.dist_max = 4.5;
    sc.angle_min = -0.5;
    sc.angle_max = 0.5;
    sc.phi_min = -0.15;
    sc.phi_max = 0.15;
    sc.kappa_mode = KappaMode::per_scene;
    const ChannelMatrix h = scene_channel(sample_scene(rng, sc, 16, 8), d.gt, d.gr, kLambda);
    const RMat p = gen_pilot(16, 16, rng), w = gen_combiner(4, 8, rng);
    const CMat y = observe(h, p, w, 1e-4, rng).y;
    const EstimateReport a = two_stage(y, p, w, ctx, opt), b = two_stage(y, p, w, ctx, opt);
    EXPECT_EQ(a.h_hat.entries, a.h_los_hat.entries + a.h_nlos_hat.entries);
    EXPECT_EQ(a.support.size(), opt.sparsity);
    EXPECT_EQ(a.h_hat.entries, b.h_hat.entries);
    EXPECT_EQ(a.support, b.support);
    for (std::size_t i = 1; i < a.objective_trace.size(); ++i)
        EXPECT_LE(a.objective_trace[i], a.objective_trace[i - 1]);
}

TEST(TwoStage, NegligibleLosReducesToOmp)
{
    const Dictionaries d;
    const EstimationContext ctx = make_context(d.gt, d.gr, kLambda, small_codebook());
    TwoStageOptions opt = small_options();
    opt.grid.r_min = opt.grid.r_max = 1e7;
    opt.refine.max_iters = 1;
    Rng rng(8);
    ASSERT_GT(d.dt.size(), 77);
    ASSERT_GT(d.dr.size(), 17);
    CMat h = CMat::Zero(8, 16);
    for (auto [it, ir] : {std::pair{5, 3}, {40, 9}, {77, 17}})
        h += cplx(1.0, 0.5) * d.dr.atoms.col(ir) * d.dt.atoms.col(it).adjoint();
    const RMat p = gen_pilot(16, 16, rng), w = gen_combiner(8, 8, rng);
    const CMat y = forward(h, p, w);
    const EstimateReport rep = two_stage(y, p, w, ctx, opt);
    const OmpResult ref = estimate_nlos(y, p, w, ctx.near_t, ctx.near_r, 3);
    EXPECT_EQ(rep.support, ref.support);
    EXPECT_LT(rep.h_los_hat.entries.norm(), 1e-6 * h.norm());
    EXPECT_LT((rep.h_nlos_hat.entries - ref.channel.entries).norm(), 1e-5 * h.norm());
}

TEST(Baseline, NearModeExactSupport)
{
    const Dictionaries d;
    const EstimationContext ctx = make_context(d.gt, d.gr, kLambda, small_codebook());
    const RMat p = hadamard(16) / 4.0, w = hadamard(8) / std::sqrt(8.0);
    ASSERT_GT(ctx.near_t.size(), 30);
    ASSERT_GT(ctx.near_r.size(), 11);
    const CMat h = ctx.near_r.atoms.col(11) * ctx.near_t.atoms.col(30).adjoint();
    const EstimateReport rep = baseline_omp(forward(h, p, w), p, w, ctx, 1, OmpMode::near);
    ASSERT_EQ(rep.support.size(), 1u);
    EXPECT_EQ(rep.support[0], (AtomPair{30, 11}));
    EXPECT_LT(nmse(h, rep.h_hat.entries), 1e-10);
}

TEST(Baseline, FarModeOnFarFieldChannel)
{
    const Dictionaries d;
    const EstimationContext ctx = make_context(d.gt, d.gr, kLambda, small_codebook());
    // Departure and arrival sines on the far grids, range far beyond the Rayleigh distance.
    const double th = std::asin(0.25), ph = std::asin(0.5) - th;
    const CMat h = los_channel({1e5, th, ph}, d.gt, d.gr, kLambda).entries;
    Rng rng(10);
    const RMat p = gen_pilot(16, 16, rng), w = gen_combiner(8, 8, rng);
    for (OmpMode mode : {OmpMode::far, OmpMode::near})
    {
        const EstimateReport rep = baseline_omp(forward(h, p, w), p, w, ctx, 4, mode);
        EXPECT_EQ(rep.support.size(), 4u);
        EXPECT_EQ(rep.h_hat.entries, rep.h_los_hat.entries + rep.h_nlos_hat.entries);
        if (mode == OmpMode::far)
            EXPECT_LT(to_db(nmse(h, rep.h_hat.entries)), -20.0);
    }
}
