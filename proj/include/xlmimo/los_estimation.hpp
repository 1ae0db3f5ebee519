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

#ifndef XLMIMO_LOS_ESTIMATION_HPP
#define XLMIMO_LOS_ESTIMATION_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/geometry.hpp"
#include "xlmimo/types.hpp"

#include <array>
#include <vector>

namespace xlmimo {

// Search set for the coarse LoS stage. Each axis holds steps + 1 equally spaced
// values from min to max inclusive; an axis with min == max holds one value.
struct GridSpec
{
    double r_min = 20.0;
    double r_max = 600.0;
    double theta_min = -kPi / 3.0;
    double theta_max = kPi / 3.0;
    double phi_min = -kPi / 8.0;
    double phi_max = kPi / 8.0;
    int r_steps = 32;
    int theta_steps = 64;
    int phi_steps = 16;

    void validate() const;
    std::vector<double> r_values() const;
    std::vector<double> theta_values() const;
    std::vector<double> phi_values() const;
    std::size_t size() const;
};

struct RefineSpec
{
    int max_iters = 100;
    double tol = 1e-6;
    // Initial trial step lengths in parameter units; zero selects a default
    // scaled to the wavelength and apertures.
    double step_r = 0.0;
    double step_theta = 0.0;
    double step_phi = 0.0;
    double backtrack_factor = 0.5;
    int max_backtracks = 20;

    void validate() const;
};

enum class LosCriterion
{
    exact,         // G = ||Y - W H P||_F^2
    phase_profiled // G minimised over a free common phase of H
};

// Partial derivatives of an objective with respect to (r, theta, phi).
struct LosGradient
{
    double d_r = 0.0;
    double d_theta = 0.0;
    double d_phi = 0.0;

    double operator[](std::size_t axis) const { return axis == 0 ? d_r : axis == 1 ? d_theta : d_phi; }
};

// Fitting problem for the geometric LoS model against Y = W H P + N.
class LosProblem
{
public:
    LosProblem(CMat y, RMat p, RMat w, ArrayGeometry geom_t, ArrayGeometry geom_r, double wavelength);

    // G(r, theta, phi) = ||Y - W H_LoS P||_F^2.
    double objective(const LosParams &x) const;
    // min over psi of ||Y - exp(j psi) W H_LoS P||_F^2 = ||Y||^2 + ||W H P||^2 - 2 |<W H P, Y>|.
    double profiled_objective(const LosParams &x) const;
    double evaluate(const LosParams &x, LosCriterion c) const;

    LosGradient gradient(const LosParams &x) const;
    LosGradient profiled_gradient(const LosParams &x) const;
    LosGradient evaluate_gradient(const LosParams &x, LosCriterion c) const;

    // <W H P, Y> = sum conj(W H P) .* Y.
    cplx correlation(const LosParams &x) const;

    // The three-term expansion  sum p^H H^H W^H W H p + ||Y||^2 - 2 Re sum p^H H^H W^H y,
    // evaluated term by term per pilot column.
    double objective_expanded(const LosParams &x) const;

    CMat los_matrix(const LosParams &x) const;
    double observation_energy() const { return y_energy_; }
    double wavelength() const { return wavelength_; }
    const ArrayGeometry &geom_t() const { return geom_t_; }
    const ArrayGeometry &geom_r() const { return geom_r_; }
    const CMat &y() const { return y_; }
    const RMat &p() const { return p_; }
    const RMat &w() const { return w_; }

private:
    struct Projection
    {
        RMat h;    // [Re H, Im H], N2 x 2 N1
        RMat dist; // pair distances, N2 x N1
        RMat sr;   // Re W H P
        RMat si;   // Im W H P
    };
    Projection project(const LosParams &x) const;
    cplx correlation(const Projection &pr) const;
    LosGradient gradient_from_residual(const LosParams &x, const Projection &pr, const RMat &er,
                                       const RMat &ei) const;

    CMat y_;
    RMat yr_;
    RMat yi_;
    RMat p_;
    RMat w_;
    ArrayGeometry geom_t_;
    ArrayGeometry geom_r_;
    double wavelength_;
    double k_;
    double y_energy_;
    RVec d1_;
    RVec d2_;
};

// Grid point of the search set minimising the criterion; ties keep the
// lexicographically smallest (r, theta, phi).
LosParams coarse_search(const LosProblem &problem, const GridSpec &grid, LosCriterion c = LosCriterion::exact);

struct RefineResult
{
    LosParams params;
    std::vector<double> trace; // objective after each iteration, trace[0] at the start point
    int iterations = 0;
    bool converged = false;
};

// Block coordinate gradient descent r -> theta -> phi with per-axis
// backtracking: each accepted update lowers the objective.
RefineResult refine_los(const LosProblem &problem, const LosParams &init, const RefineSpec &spec,
                        LosCriterion c = LosCriterion::exact);

struct LosEstimate
{
    ChannelMatrix channel;
    LosParams params;
    LosParams coarse;
    std::vector<double> trace;          // exact objective trace of the final refinement
    std::vector<double> profiled_trace; // empty for the exact criterion
};

// coarse_search -> refine_los -> los_channel. With the phase-profiled criterion
// the coarse search and a first refinement run on the profiled objective, the
// residual common phase is folded into r, and a final exact refinement follows.
LosEstimate estimate_los(const LosProblem &problem, const GridSpec &grid, const RefineSpec &spec,
                         LosCriterion c = LosCriterion::exact);

// Y - W H_los P.
CMat cancel_los(const CMat &y, const CMat &h_los, const RMat &p, const RMat &w);

} // namespace xlmimo

#endif
