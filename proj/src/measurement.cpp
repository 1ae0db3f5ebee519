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

#include <cmath>
#include <stdexcept>

namespace xlmimo {

namespace {

RMat random_sign_matrix(std::size_t rows, std::size_t cols, double magnitude, Rng &rng)
{
    std::bernoulli_distribution coin(0.5);
    RMat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            out(i, j) = coin(rng) ? magnitude : -magnitude;
    return out;
}

void check_shapes(const CMat &h, const RMat &p, const RMat &w, const char *who)
{
    if (w.cols() != h.rows() || h.cols() != p.rows())
        throw std::invalid_argument(std::string(who) + ": shapes of W (" + std::to_string(w.rows()) + "x" +
                                    std::to_string(w.cols()) + "), H (" + std::to_string(h.rows()) + "x" +
                                    std::to_string(h.cols()) + ") and P (" + std::to_string(p.rows()) + "x" +
                                    std::to_string(p.cols()) + ") are inconsistent");
}

} // namespace

RMat gen_pilot(std::size_t n1, std::size_t m, Rng &rng)
{
    if (n1 == 0 || m == 0)
        throw std::invalid_argument("gen_pilot: dimensions must be positive");
    return random_sign_matrix(n1, m, 1.0 / std::sqrt(static_cast<double>(m)), rng);
}

RMat gen_combiner(std::size_t nrf, std::size_t n2, Rng &rng)
{
    if (nrf == 0 || n2 == 0)
        throw std::invalid_argument("gen_combiner: dimensions must be positive");
    return random_sign_matrix(nrf, n2, 1.0 / std::sqrt(static_cast<double>(n2)), rng);
}

RMat hadamard(std::size_t n)
{
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("hadamard: order must be a power of two");
    RMat h = RMat::Ones(1, 1);
    while (static_cast<std::size_t>(h.rows()) < n)
    {
        const auto k = h.rows();
        RMat next(2 * k, 2 * k);
        next << h, h, h, -h;
        h = std::move(next);
    }
    return h;
}

MeasurementSet observe(const CMat &h, const RMat &p, const RMat &w, double sigma2, Rng &rng)
{
    check_shapes(h, p, w, "observe");
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("observe: sigma2 must be nonnegative");

    MeasurementSet m;
    m.p = p;
    m.w = w;
    m.sigma2 = sigma2;
    m.y = w.cast<cplx>() * h * p.cast<cplx>();
    if (sigma2 > 0.0)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(sigma2 / 2.0));
        for (Eigen::Index j = 0; j < m.y.cols(); ++j)
            for (Eigen::Index i = 0; i < m.y.rows(); ++i)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                m.y(i, j) += cplx(re, im);
            }
    }
    return m;
}

MeasurementSet observe(const ChannelMatrix &h, const RMat &p, const RMat &w, double sigma2, Rng &rng)
{
    return observe(h.entries, p, w, sigma2, rng);
}

double calibrate_sigma2(const CMat &h, const RMat &p, const RMat &w, double snr_db)
{
    check_shapes(h, p, w, "calibrate_sigma2");
    const double energy = (w.cast<cplx>() * h * p.cast<cplx>()).squaredNorm();
    if (!(energy > 0.0))
        throw std::invalid_argument("calibrate_sigma2: zero signal");
    const double entries = static_cast<double>(w.rows() * p.cols());
    return energy / (entries * std::pow(10.0, snr_db / 10.0));
}

RMat kron_sensing(const RMat &p, const RMat &w)
{
    // (P^T (x) W)(a * Nrf + i, b * N2 + k) = P(b, a) W(i, k)
    const auto m = p.cols();
    const auto n1 = p.rows();
    const auto nrf = w.rows();
    const auto n2 = w.cols();
    if (m == 0 || n1 == 0 || nrf == 0 || n2 == 0)
        throw std::invalid_argument("kron_sensing: empty pilot or combiner");
    RMat q(m * nrf, n1 * n2);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < n1; ++b)
            q.block(a * nrf, b * n2, nrf, n2) = p(b, a) * w;
    return q;
}

CVec vec(const CMat &m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

} // namespace xlmimo
