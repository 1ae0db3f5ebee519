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

#ifndef XLMIMO_ESTIMATION_HPP
#define XLMIMO_ESTIMATION_HPP

#include "xlmimo/los_estimation.hpp"
#include "xlmimo/measurement.hpp"
#include "xlmimo/omp.hpp"
#include "xlmimo/polar_codebook.hpp"

#include <optional>
#include <vector>

namespace xlmimo {

struct EstimateReport
{
    ChannelMatrix h_hat;
    ChannelMatrix h_los_hat;
    ChannelMatrix h_nlos_hat;
    std::optional<LosParams> los_params_hat;
    std::vector<AtomPair> support;
    std::vector<double> objective_trace;
    std::optional<double> nmse;
};

// Array geometry and the dictionaries shared by all trials of a sweep point.
struct EstimationContext
{
    ArrayGeometry geom_t;
    ArrayGeometry geom_r;
    double wavelength;
    PolarCodebook near_t;
    PolarCodebook near_r;
    PolarCodebook far_t;
    PolarCodebook far_r;
};

struct CodebookSpec
{
    double beta = 1.2;
    double r_min = 10.0;
    double r_max = 1000.0;
    std::size_t oversampling = 1;
};

EstimationContext make_context(const ArrayGeometry &geom_t, const ArrayGeometry &geom_r, double wavelength,
                               const CodebookSpec &cb);

struct TwoStageOptions
{
    GridSpec grid;
    RefineSpec refine;
    LosCriterion criterion = LosCriterion::phase_profiled;
    std::size_t sparsity = 3;
};

// Ĥ = Ĥ_LoS + Ĥ_NLoS: geometric LoS fit, cancellation, then matrix OMP on the
// near-field dictionaries.
EstimateReport two_stage(const CMat &y, const RMat &p, const RMat &w, const EstimationContext &ctx,
                         const TwoStageOptions &opt);

enum class OmpMode
{
    far,
    near
};

// Single-stage OMP of the whole channel with `atoms` atom pairs.
EstimateReport baseline_omp(const CMat &y, const RMat &p, const RMat &w, const EstimationContext &ctx,
                            std::size_t atoms, OmpMode mode);

} // namespace xlmimo

#endif
