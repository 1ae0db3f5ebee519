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

#include <stdexcept>

namespace xlmimo {

EstimationContext make_context(const ArrayGeometry &geom_t, const ArrayGeometry &geom_r, double wavelength,
                               const CodebookSpec &cb)
{
    auto near_t = build_codebook(sample_grid(geom_t, wavelength, cb.beta, cb.r_min, cb.r_max, cb.oversampling),
                                 geom_t, wavelength, cb.beta);
    auto near_r = build_codebook(sample_grid(geom_r, wavelength, cb.beta, cb.r_min, cb.r_max, cb.oversampling),
                                 geom_r, wavelength, cb.beta);
    auto far_t = build_codebook(sample_farfield_grid(geom_t, cb.oversampling), geom_t, wavelength);
    auto far_r = build_codebook(sample_farfield_grid(geom_r, cb.oversampling), geom_r, wavelength);
    return EstimationContext{geom_t,           geom_r,           wavelength,      std::move(near_t),
                             std::move(near_r), std::move(far_t), std::move(far_r)};
}

EstimateReport two_stage(const CMat &y, const RMat &p, const RMat &w, const EstimationContext &ctx,
                         const TwoStageOptions &opt)
{
    const LosProblem problem(y, p, w, ctx.geom_t, ctx.geom_r, ctx.wavelength);
    LosEstimate los = estimate_los(problem, opt.grid, opt.refine, opt.criterion);
    const CMat y_nlos = cancel_los(y, los.channel.entries, p, w);
    OmpResult nlos = estimate_nlos(y_nlos, p, w, ctx.near_t, ctx.near_r, opt.sparsity);

    EstimateReport rep;
    rep.h_hat.entries = los.channel.entries + nlos.channel.entries;
    rep.h_hat.los_part = los.channel.entries;
    rep.h_hat.nlos_part = nlos.channel.entries;
    rep.h_los_hat = std::move(los.channel);
    rep.h_nlos_hat = std::move(nlos.channel);
    rep.los_params_hat = los.params;
    rep.support = std::move(nlos.support);
    rep.objective_trace = std::move(los.trace);
    return rep;
}

EstimateReport baseline_omp(const CMat &y, const RMat &p, const RMat &w, const EstimationContext &ctx,
                            std::size_t atoms, OmpMode mode)
{
    const PolarCodebook &dt = mode == OmpMode::far ? ctx.far_t : ctx.near_t;
    const PolarCodebook &dr = mode == OmpMode::far ? ctx.far_r : ctx.near_r;
    OmpResult res = estimate_nlos(y, p, w, dt, dr, atoms);

    EstimateReport rep;
    rep.h_hat.entries = res.channel.entries;
    rep.h_nlos_hat = std::move(res.channel);
    rep.h_los_hat.entries = CMat::Zero(rep.h_hat.rows(), rep.h_hat.cols());
    rep.support = std::move(res.support);
    return rep;
}

} // namespace xlmimo
