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

#include "xlmimo/los_estimation.hpp"

#include "los_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace xlmimo {

namespace {

std::vector<double> axis_values(double lo, double hi, int steps)
{
    if (lo == hi)
        return {lo};
    std::vector<double> v(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / steps;
    return v;
}

void check_axis(double lo, double hi, int steps, const char *name)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw std::invalid_argument(std::string("GridSpec: ") + name + " range must satisfy min <= max");
    if (steps < 1)
        throw std::invalid_argument(std::string("GridSpec: ") + name + "_steps must be >= 1");
}

bool in_domain(const LosParams &x)
{
    return x.r > 0.0 && std::isfinite(x.r) && x.theta > -kPi / 2.0 && x.theta < kPi / 2.0 && x.phi > -kPi &&
           x.phi <= kPi;
}

double &axis_ref(LosParams &x, std::size_t axis) { return axis == 0 ? x.r : axis == 1 ? x.theta : x.phi; }

double axis_val(const LosParams &x, std::size_t axis) { return axis == 0 ? x.r : axis == 1 ? x.theta : x.phi; }

} // namespace

void GridSpec::validate() const
{
    check_axis(r_min, r_max, r_steps, "r");
    check_axis(theta_min, theta_max, theta_steps, "theta");
    check_axis(phi_min, phi_max, phi_steps, "phi");
    if (!(r_min > 0.0))
        throw std::invalid_argument("GridSpec: r_min must be positive");
    if (!(theta_min > -kPi / 2.0 && theta_max < kPi / 2.0))
        throw std::invalid_argument("GridSpec: theta range must lie inside (-pi/2, pi/2)");
    if (!(phi_min > -kPi && phi_max <= kPi))
        throw std::invalid_argument("GridSpec: phi range must lie inside (-pi, pi]");
}

std::vector<double> GridSpec::r_values() const { return axis_values(r_min, r_max, r_steps); }
std::vector<double> GridSpec::theta_values() const { return axis_values(theta_min, theta_max, theta_steps); }
std::vector<double> GridSpec::phi_values() const { return axis_values(phi_min, phi_max, phi_steps); }

std::size_t GridSpec::size() const
{
    return r_values().size() * theta_values().size() * phi_values().size();
}

void RefineSpec::validate() const
{
    if (max_iters < 1)
        throw std::invalid_argument("RefineSpec: max_iters must be >= 1");
    if (!(tol > 0.0))
        throw std::invalid_argument("RefineSpec: tol must be positive");
    if (step_r < 0.0 || step_theta < 0.0 || step_phi < 0.0)
        throw std::invalid_argument("RefineSpec: step lengths must be positive (0 selects the default)");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw std::invalid_argument("RefineSpec: backtrack_factor must lie in (0, 1)");
    if (max_backtracks < 0)
        throw std::invalid_argument("RefineSpec: max_backtracks must be >= 0");
}

LosProblem::LosProblem(CMat y, RMat p, RMat w, ArrayGeometry geom_t, ArrayGeometry geom_r, double wavelength)
    : y_(std::move(y)), p_(std::move(p)), w_(std::move(w)), geom_t_(geom_t), geom_r_(geom_r),
      wavelength_(wavelength)
{
    if (!(wavelength_ > 0.0))
        throw std::invalid_argument("LosProblem: wavelength must be positive");
    const auto n1 = static_cast<Eigen::Index>(geom_t_.num_elements());
    const auto n2 = static_cast<Eigen::Index>(geom_r_.num_elements());
    if (p_.rows() != n1)
        throw std::invalid_argument("LosProblem: pilot rows must equal N1");
    if (w_.cols() != n2)
        throw std::invalid_argument("LosProblem: combiner columns must equal N2");
    if (y_.rows() != w_.rows() || y_.cols() != p_.cols())
        throw std::invalid_argument("LosProblem: Y must be Nrf x M");
    k_ = 2.0 * kPi / wavelength_;
    y_energy_ = y_.squaredNorm();
    yr_ = y_.real();
    yi_ = y_.imag();
    d1_.resize(n1);
    d2_.resize(n2);
    for (Eigen::Index i = 0; i < n1; ++i)
        d1_(i) = geom_t_.anchored_offset(static_cast<std::size_t>(i) + 1);
    for (Eigen::Index i = 0; i < n2; ++i)
        d2_(i) = geom_r_.anchored_offset(static_cast<std::size_t>(i) + 1);
}

LosProblem::Projection LosProblem::project(const LosParams &x) const
{
    const auto n1 = d1_.size();
    const auto n2 = d2_.size();
    Projection pr;
    pr.h.resize(n2, 2 * n1);
    pr.dist.resize(n2, n1);
    if (!detail::los_entries(x.r, x.theta, x.phi, k_, d1_.data(), static_cast<std::size_t>(n1), d2_.data(),
                             static_cast<std::size_t>(n2), pr.h.data(), pr.h.data() + n1 * n2, pr.dist.data()))
        throw std::domain_error("LosProblem: nonphysical LoS geometry");
    const RMat wh = w_ * pr.h;
    pr.sr = wh.leftCols(n1) * p_;
    pr.si = wh.rightCols(n1) * p_;
    return pr;
}

CMat LosProblem::los_matrix(const LosParams &x) const
{
    const Projection pr = project(x);
    const auto n1 = d1_.size();
    CMat h(d2_.size(), n1);
    h.real() = pr.h.leftCols(n1);
    h.imag() = pr.h.rightCols(n1);
    return h;
}

cplx LosProblem::correlation(const Projection &pr) const
{
    return {pr.sr.cwiseProduct(yr_).sum() + pr.si.cwiseProduct(yi_).sum(),
            pr.sr.cwiseProduct(yi_).sum() - pr.si.cwiseProduct(yr_).sum()};
}

double LosProblem::objective(const LosParams &x) const
{
    const Projection pr = project(x);
    return (pr.sr - yr_).squaredNorm() + (pr.si - yi_).squaredNorm();
}

cplx LosProblem::correlation(const LosParams &x) const { return correlation(project(x)); }

double LosProblem::profiled_objective(const LosParams &x) const
{
    const Projection pr = project(x);
    const double s2 = pr.sr.squaredNorm() + pr.si.squaredNorm();
    return std::max(0.0, y_energy_ + s2 - 2.0 * std::abs(correlation(pr)));
}

double LosProblem::evaluate(const LosParams &x, LosCriterion c) const
{
    return c == LosCriterion::exact ? objective(x) : profiled_objective(x);
}

double LosProblem::objective_expanded(const LosParams &x) const
{
    const CMat h = los_matrix(x);
    const CMat wc = w_.cast<cplx>();
    const CMat wh = wc * h;
    double quad = 0.0;
    double cross = 0.0;
    for (Eigen::Index m = 0; m < p_.cols(); ++m)
    {
        const CVec pm = p_.col(m).cast<cplx>();
        const CVec v = wh * pm;
        quad += std::real(pm.dot(h.adjoint() * (wc.adjoint() * v)));
        cross += std::real(pm.dot(h.adjoint() * (wc.adjoint() * y_.col(m))));
    }
    return quad + y_energy_ - 2.0 * cross;
}

LosGradient LosProblem::gradient_from_residual(const LosParams &x, const Projection &pr, const RMat &er,
                                               const RMat &ei) const
{
    // dG/dx = 2 Re sum conj(B) .* dH/dx with B = W^T E P^T and
    // dH/dx = -(1/r~ + j k) H dr~/dx.
    const RMat wt = w_.transpose();
    const RMat pt = p_.transpose();
    const RMat br = (wt * er) * pt;
    const RMat bi = (wt * ei) * pt;
    const auto n1 = d1_.size();
    const double sp = std::sin(x.phi + x.theta), cpt = std::cos(x.phi + x.theta);
    const double st = std::sin(x.theta), ct = std::cos(x.theta);
    const double sph = std::sin(x.phi);
    LosGradient g;
    for (Eigen::Index c = 0; c < n1; ++c)
    {
        const double a = d1_(c);
        for (Eigen::Index row = 0; row < d2_.size(); ++row)
        {
            const double bb = d2_(row);
            const double dist = pr.dist(row, c);
            const cplx h(pr.h(row, c), pr.h(row, c + n1));
            const cplx common = cplx(br(row, c), -bi(row, c)) * (-(1.0 / dist + cplx(0.0, k_)) * h) / dist;
            const double re = 2.0 * std::real(common);
            g.d_r += re * (x.r + bb * sp - a * st);
            g.d_theta += re * (x.r * bb * cpt - x.r * a * ct);
            g.d_phi += re * (x.r * bb * cpt + a * bb * sph);
        }
    }
    return g;
}

LosGradient LosProblem::gradient(const LosParams &x) const
{
    const Projection pr = project(x);
    return gradient_from_residual(x, pr, pr.sr - yr_, pr.si - yi_);
}

LosGradient LosProblem::profiled_gradient(const LosParams &x) const
{
    // At the optimal common phase e = c / |c| the profiled objective equals the
    // exact one against conj(e) Y, and the envelope theorem gives its gradient.
    const Projection pr = project(x);
    const cplx c = correlation(pr);
    const cplx e = std::abs(c) > 0.0 ? c / std::abs(c) : cplx(1.0, 0.0);
    // conj(e) Y = (er yr + ei yi) + j (er yi - ei yr)
    const RMat tr = e.real() * yr_ + e.imag() * yi_;
    const RMat ti = e.real() * yi_ - e.imag() * yr_;
    return gradient_from_residual(x, pr, pr.sr - tr, pr.si - ti);
}

LosGradient LosProblem::evaluate_gradient(const LosParams &x, LosCriterion c) const
{
    return c == LosCriterion::exact ? gradient(x) : profiled_gradient(x);
}

LosParams coarse_search(const LosProblem &problem, const GridSpec &grid, LosCriterion c)
{
    grid.validate();
    const auto rs = grid.r_values();
    const auto ts = grid.theta_values();
    const auto ps = grid.phi_values();

    LosParams best{rs.front(), ts.front(), ps.front()};
    double best_val = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double r : rs)
        for (double t : ts)
            for (double p : ps)
            {
                const LosParams x{r, t, p};
                double v;
                try
                {
                    v = problem.evaluate(x, c);
                }
                catch (const std::domain_error &)
                {
                    continue;
                }
                if (!std::isfinite(v))
                    continue;
                if (!found || v < best_val)
                {
                    best = x;
                    best_val = v;
                    found = true;
                }
            }
    if (!found)
        throw std::runtime_error("coarse_search: objective is not finite anywhere on the grid");
    return best;
}

RefineResult refine_los(const LosProblem &problem, const LosParams &init, const RefineSpec &spec, LosCriterion c)
{
    spec.validate();
    init.validate();

    const double lambda = problem.wavelength();
    const double dmax = std::max(problem.geom_t().aperture(), problem.geom_r().aperture());
    std::array<double, 3> step{
        spec.step_r > 0.0 ? spec.step_r : lambda / 16.0,
        spec.step_theta > 0.0 ? spec.step_theta : lambda / (16.0 * dmax),
        spec.step_phi > 0.0 ? spec.step_phi : lambda / (16.0 * problem.geom_r().aperture()),
    };

    auto eval = [&](const LosParams &x) {
        try
        {
            return problem.evaluate(x, c);
        }
        catch (const std::domain_error &)
        {
            return std::numeric_limits<double>::infinity();
        }
    };

    RefineResult out;
    out.params = init;
    double cur = eval(init);
    if (!std::isfinite(cur))
        throw std::runtime_error("refine_los: objective is not finite at the initial point");
    out.trace.push_back(cur);

    for (int it = 0; it < spec.max_iters; ++it)
    {
        const LosParams prev = out.params;
        for (std::size_t axis = 0; axis < 3; ++axis)
        {
            const double g = problem.evaluate_gradient(out.params, c)[axis];
            if (!std::isfinite(g))
                throw std::runtime_error("refine_los: non-finite gradient (divergent step configuration)");
            if (g == 0.0)
                continue;
            double len = step[axis];
            bool accepted = false;
            for (int bt = 0; bt <= spec.max_backtracks; ++bt)
            {
                LosParams cand = out.params;
                axis_ref(cand, axis) -= len * (g > 0.0 ? 1.0 : -1.0);
                if (in_domain(cand))
                {
                    const double v = eval(cand);
                    if (v < cur)
                    {
                        out.params = cand;
                        cur = v;
                        accepted = true;
                        break;
                    }
                }
                len *= spec.backtrack_factor;
            }
            step[axis] = accepted ? (len == step[axis] ? 2.0 * len : len) : step[axis] * spec.backtrack_factor;
        }
        if (!std::isfinite(cur))
            throw std::runtime_error("refine_los: non-finite objective (divergent step configuration)");
        out.trace.push_back(cur);
        out.iterations = it + 1;

        bool small = true;
        for (std::size_t axis = 0; axis < 3; ++axis)
        {
            const double x1 = axis_val(out.params, axis);
            if (std::abs(x1 - axis_val(prev, axis)) > spec.tol * std::max(std::abs(x1), 1.0))
                small = false;
        }
        if (small)
        {
            out.converged = true;
            break;
        }
    }
    return out;
}

LosEstimate estimate_los(const LosProblem &problem, const GridSpec &grid, const RefineSpec &spec, LosCriterion c)
{
    LosEstimate out;
    out.coarse = coarse_search(problem, grid, c);
    LosParams start = out.coarse;
    if (c == LosCriterion::phase_profiled)
    {
        const RefineResult pre = refine_los(problem, start, spec, LosCriterion::phase_profiled);
        out.profiled_trace = pre.trace;
        start = pre.params;
        // Fold the residual common phase into r: exp(-j k dr) = c / |c|.
        const cplx corr = problem.correlation(start);
        if (std::abs(corr) > 0.0)
        {
            const double k = 2.0 * kPi / problem.wavelength();
            LosParams shifted = start;
            shifted.r -= wrap_phase(std::arg(corr)) / k;
            if (in_domain(shifted))
                start = shifted;
        }
    }
    const RefineResult fin = refine_los(problem, start, spec, LosCriterion::exact);
    out.params = fin.params;
    out.trace = fin.trace;
    out.channel = los_channel(out.params, problem.geom_t(), problem.geom_r(), problem.wavelength());
    return out;
}

CMat cancel_los(const CMat &y, const CMat &h_los, const RMat &p, const RMat &w)
{
    if (h_los.rows() != w.cols() || h_los.cols() != p.rows() || y.rows() != w.rows() || y.cols() != p.cols())
        throw std::invalid_argument("cancel_los: shape mismatch");
    return y - (w.cast<cplx>() * h_los) * p.cast<cplx>();
}

} // namespace xlmimo
