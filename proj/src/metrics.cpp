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

#include "xlmimo/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace xlmimo {

double nmse(const CMat &h_true, const CMat &h_hat)
{
    if (h_true.rows() != h_hat.rows() || h_true.cols() != h_hat.cols())
        throw std::invalid_argument("nmse: shape mismatch");
    const double e = h_true.squaredNorm();
    if (!(e > 0.0))
        throw std::invalid_argument("nmse: reference channel has zero norm");
    return (h_true - h_hat).squaredNorm() / e;
}

double to_db(double linear)
{
    if (linear < 0.0)
        throw std::invalid_argument("to_db: negative power");
    return linear == 0.0 ? -std::numeric_limits<double>::infinity() : 10.0 * std::log10(linear);
}

void NmseAccumulator::add(const CMat &h_true, const CMat &h_hat)
{
    if (h_true.rows() != h_hat.rows() || h_true.cols() != h_hat.cols())
        throw std::invalid_argument("NmseAccumulator: shape mismatch");
    add((h_true - h_hat).squaredNorm(), h_true.squaredNorm());
}

void NmseAccumulator::add(double err_energy, double true_energy)
{
    if (err_energy < 0.0 || true_energy < 0.0)
        throw std::invalid_argument("NmseAccumulator: negative energy");
    err_ += err_energy;
    energy_ += true_energy;
    ++count_;
}

void NmseAccumulator::merge(const NmseAccumulator &other)
{
    err_ += other.err_;
    energy_ += other.energy_;
    count_ += other.count_;
}

double NmseAccumulator::mean_channel_energy() const
{
    if (count_ == 0)
        throw std::logic_error("NmseAccumulator: no trials");
    return energy_ / static_cast<double>(count_);
}

double NmseAccumulator::value() const
{
    if (count_ == 0 || !(energy_ > 0.0))
        throw std::logic_error("NmseAccumulator: no channel energy accumulated");
    return err_ / energy_;
}

double crlb(double sigma2, std::size_t n1, std::size_t n2, std::size_t m, std::size_t nrf)
{
    if (sigma2 < 0.0)
        throw std::invalid_argument("crlb: sigma2 must be nonnegative");
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("crlb: array sizes must be positive");
    if (m == 0 || nrf == 0)
        throw std::invalid_argument("crlb: zero denominator");
    return 2.0 * sigma2 * static_cast<double>(n1) * static_cast<double>(n2) /
           (static_cast<double>(m) * static_cast<double>(nrf));
}

double nmse_bound(double crlb_value, double h_energy)
{
    if (!(h_energy > 0.0))
        throw std::invalid_argument("nmse_bound: channel energy must be positive");
    if (crlb_value < 0.0)
        throw std::invalid_argument("nmse_bound: negative bound");
    return crlb_value / h_energy;
}

double crlb_normalized(double sigma2_complex, const RMat &p, const RMat &w)
{
    if (p.size() == 0 || w.size() == 0)
        throw std::invalid_argument("crlb_normalized: empty pilots or combiner");
    const double pm = p.squaredNorm() / static_cast<double>(p.size());
    const double wm = w.squaredNorm() / static_cast<double>(w.size());
    if (!(pm > 0.0) || !(wm > 0.0))
        throw std::invalid_argument("crlb_normalized: zero pilots or combiner");
    return crlb(sigma2_complex / (2.0 * pm * wm), static_cast<std::size_t>(p.rows()),
                static_cast<std::size_t>(w.cols()), static_cast<std::size_t>(p.cols()),
                static_cast<std::size_t>(w.rows()));
}

ChannelMatrix ls_oracle(const CMat &y, const RMat &p, const RMat &w)
{
    if (y.rows() != w.rows() || y.cols() != p.cols())
        throw std::invalid_argument("ls_oracle: Y must be Nrf x M");
    if (p.cols() < p.rows() || w.rows() < w.cols())
        throw std::invalid_argument("ls_oracle: underdetermined system (need M >= N1 and Nrf >= N2)");
    Eigen::CompleteOrthogonalDecomposition<RMat> pw(w), pp(p);
    if (pw.rank() < w.cols() || pp.rank() < p.rows())
        throw std::invalid_argument("ls_oracle: rank-deficient pilots or combiner");
    const RMat w_pinv = pw.pseudoInverse();
    const RMat p_pinv = pp.pseudoInverse();
    ChannelMatrix out;
    out.entries = w_pinv.cast<cplx>() * y * p_pinv.cast<cplx>();
    return out;
}

} // namespace xlmimo
