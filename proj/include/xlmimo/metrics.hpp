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

#ifndef XLMIMO_METRICS_HPP
#define XLMIMO_METRICS_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/types.hpp"

#include <cstddef>
#include <string>

namespace xlmimo {

// ||H - Ĥ||^2 / ||H||^2 for a single realisation.
double nmse(const CMat &h_true, const CMat &h_hat);
double to_db(double linear);

// Sample-mean NMSE over trials: sum of error energies over sum of channel
// energies. Merging accumulators is order independent up to rounding.
class NmseAccumulator
{
public:
    void add(const CMat &h_true, const CMat &h_hat);
    void add(double err_energy, double true_energy);
    void merge(const NmseAccumulator &other);
    std::size_t count() const { return count_; }
    double error_energy() const { return err_; }
    double channel_energy() const { return energy_; }
    double mean_channel_energy() const;
    double value() const;

private:
    double err_ = 0.0;
    double energy_ = 0.0;
    std::size_t count_ = 0;
};

// 2 sigma2 N1 N2 / (M Nrf), sigma2 being the variance of each real noise
// component with +-1 pilot and combiner entries.
double crlb(double sigma2, std::size_t n1, std::size_t n2, std::size_t m, std::size_t nrf);
double nmse_bound(double crlb_value, double h_energy);

// crlb() for pilots and combiners of arbitrary entry scale: the complex noise
// power sigma2_complex is referred to unit-magnitude entries by dividing by the
// mean squared entries of P and W, then halved to a per-component variance.
double crlb_normalized(double sigma2_complex, const RMat &p, const RMat &w);

// argmin_H ||Y - W H P||_F^2 = pinv(W) Y pinv(P); requires M >= N1, Nrf >= N2.
ChannelMatrix ls_oracle(const CMat &y, const RMat &p, const RMat &w);

struct MetricRecord
{
    double nmse_db = 0.0;
    double crlb = 0.0;
    double nmse_bound_db = 0.0;
    std::size_t trial_count = 0;
    std::string config_digest;
};

} // namespace xlmimo

#endif
