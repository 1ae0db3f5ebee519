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
#include "xlmimo/measurement.hpp"
#include "xlmimo/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace xlmimo;

namespace {

// Monte-Carlo mean of ||H - H_ls||_F^2 over noise draws.
double ls_mse(const CMat &h, const RMat &p, const RMat &w, double sigma2, int draws, Rng &rng)
{
    double acc = 0.0;
    for (int t = 0; t < draws; ++t)
        acc += (ls_oracle(observe(h, p, w, sigma2, rng).y, p, w).entries - h).squaredNorm();
    return acc / draws;
}

RMat full_rank_random_pilot(std::size_t n1, std::size_t m, Rng &rng)
{
    for (;;)
    {
        RMat p = gen_pilot(n1, m, rng);
        if (Eigen::FullPivLU<RMat>(p).rank() == Eigen::Index(n1))
            return p;
    }
}

} // namespace

TEST(Nmse, Examples)
{
    const CMat h = CMat::Random(4, 6);
    EXPECT_EQ(nmse(h, h), 0.0);
    EXPECT_DOUBLE_EQ(nmse(h, CMat::Zero(4, 6)), 1.0);
    EXPECT_NEAR(nmse(h, 2.0 * h), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(to_db(1.0), 0.0);
    EXPECT_DOUBLE_EQ(to_db(0.01), -20.0);
    EXPECT_EQ(to_db(0.0), -std::numeric_limits<double>::infinity());
    EXPECT_THROW(nmse(CMat::Zero(4, 6), h), std::invalid_argument);
    EXPECT_THROW(nmse(h, h.transpose()), std::invalid_argument);
    EXPECT_THROW(to_db(-1.0), std::invalid_argument);
}

TEST(Nmse, UnitaryInvariance)
{
    const CMat h = CMat::Random(5, 7), e = CMat::Random(5, 7) * 0.1;
    const CMat u = Eigen::HouseholderQR<CMat>(CMat::Random(5, 5)).householderQ();
    const CMat v = Eigen::HouseholderQR<CMat>(CMat::Random(7, 7)).householderQ();
    EXPECT_NEAR(nmse(u * h * v, u * (h + e) * v), nmse(h, h + e), 1e-13);
}

TEST(Nmse, AccumulatorIsRatioOfSums)
{
    NmseAccumulator a, b, all;
    a.add(1.0, 4.0);
    a.add(2.0, 6.0);
    b.add(CMat::Constant(1, 1, cplx(3.0, 0.0)), CMat::Constant(1, 1, cplx(2.0, 0.0)));
    all = a;
    all.merge(b);
    EXPECT_EQ(all.count(), 3u);
    EXPECT_DOUBLE_EQ(all.value(), (1.0 + 2.0 + 1.0) / (4.0 + 6.0 + 9.0));
    EXPECT_DOUBLE_EQ(all.mean_channel_energy(), 19.0 / 3.0);
    // Merge order does not matter.
    NmseAccumulator other = b;
    other.merge(a);
    EXPECT_DOUBLE_EQ(other.value(), all.value());
    EXPECT_THROW(NmseAccumulator{}.value(), std::logic_error);
    EXPECT_THROW(a.add(-1.0, 1.0), std::invalid_argument);
}

TEST(Crlb, Examples)
{
    EXPECT_DOUBLE_EQ(crlb(0.1, 4, 2, 8, 2), 0.1);
    EXPECT_EQ(crlb(0.0, 4, 2, 8, 2), 0.0);
    EXPECT_DOUBLE_EQ(crlb(0.3, 16, 8, 32, 4), 2 * crlb(0.3, 16, 8, 64, 4));
    EXPECT_THROW(crlb(0.1, 4, 2, 0, 2), std::invalid_argument);
    EXPECT_THROW(crlb(0.1, 4, 2, 8, 0), std::invalid_argument);
    EXPECT_THROW(crlb(-0.1, 4, 2, 8, 2), std::invalid_argument);
}

TEST(Crlb, ScalingLaws)
{
    const double base = crlb(0.2, 8, 4, 16, 2);
    EXPECT_GT(base, 0.0);
    EXPECT_DOUBLE_EQ(crlb(0.4, 8, 4, 16, 2), 2 * base);
    EXPECT_DOUBLE_EQ(crlb(0.2, 16, 4, 16, 2), 2 * base);
    EXPECT_DOUBLE_EQ(crlb(0.2, 8, 8, 16, 2), 2 * base);
    EXPECT_DOUBLE_EQ(crlb(0.2, 8, 4, 16, 4), base / 2);
}

TEST(Crlb, NormalizedForUnitEntries)
{
    // With +-1 pilots and combiner the normalised bound is the formula at half the complex variance.
    const RMat p = hadamard(8), w = hadamard(4);
    EXPECT_DOUBLE_EQ(crlb_normalized(0.3, p, w), crlb(0.15, 8, 4, 8, 4));
    EXPECT_DOUBLE_EQ(crlb_normalized(0.3, p / std::sqrt(8.0), w / 2.0), crlb(0.15 * 8 * 4, 8, 4, 8, 4));
    EXPECT_THROW(crlb_normalized(0.3, RMat::Zero(2, 2), w), std::invalid_argument);
}

TEST(NmseBound, Examples)
{
    EXPECT_DOUBLE_EQ(nmse_bound(0.1, 1.0), 0.1);
    EXPECT_EQ(nmse_bound(0.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(nmse_bound(0.1, 4.0), nmse_bound(0.1, 1.0) / 4);
    EXPECT_THROW(nmse_bound(0.1, 0.0), std::invalid_argument);
}

TEST(LsOracle, NoiselessExact)
{
    Rng rng(1);
    const CMat h = CMat::Random(4, 8);
    const RMat p = full_rank_random_pilot(8, 12, rng), w = hadamard(4) / 2.0;
    const CMat y = observe(h, p, w, 0.0, rng).y;
    EXPECT_LT((ls_oracle(y, p, w).entries - h).norm(), 1e-10);
    EXPECT_THROW(ls_oracle(y.leftCols(4), p.leftCols(4), w), std::invalid_argument);
    EXPECT_THROW(ls_oracle(y.topRows(2), p, w.topRows(2)), std::invalid_argument);
    RMat p_bad = p;
    p_bad.row(1) = p_bad.row(0);
    EXPECT_THROW(ls_oracle(y, p_bad, w), std::invalid_argument);
}

TEST(LsOracle, OrthogonalPilotsMeetBound)
{
    Rng rng(2);
    const CMat h = CMat::Random(4, 8);
    const RMat p = hadamard(8) / std::sqrt(8.0), w = hadamard(4) / 2.0;
    const double sigma2 = 0.01;
    const double mse = ls_mse(h, p, w, sigma2, 2000, rng);
    const double bound = crlb_normalized(sigma2, p, w);
    EXPECT_LT(std::abs(mse / bound - 1.0), 0.05) << "mse " << mse << " bound " << bound;
}

TEST(LsOracle, RandomPilotsStayAboveBound)
{
    Rng rng(3);
    const CMat h = CMat::Random(4, 8);
    const RMat w = hadamard(4) / 2.0;
    for (int k = 0; k < 5; ++k)
    {
        const RMat p = full_rank_random_pilot(8, 8 + 4 * std::size_t(k), rng);
        const double mse = ls_mse(h, p, w, 0.01, 2000, rng);
        EXPECT_GT(mse, crlb_normalized(0.01, p, w)) << "M = " << p.cols();
    }
}
