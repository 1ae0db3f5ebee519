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

#include "xlmimo/bench/selftest.hpp"
#include "xlmimo/bench/experiment.hpp"
#include "xlmimo/boundaries.hpp"
#include "xlmimo/estimation.hpp"
#include "xlmimo/measurement.hpp"
#include "xlmimo/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace xlmimo::bench {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SelftestResult boundary_identities()
{
    const double lambda = 0.006;
    const double d1 = 256 * lambda / 2, d2 = 128 * lambda / 2;
    const double far = max_discrepancy_far(mimo_rd(d1, d2, lambda), d1, d2, lambda);
    const double near = max_discrepancy_near(mimo_ard(d1, d2, lambda), d1, d2, lambda);
    const double err = std::max(std::abs(far / (kPi / 8) - 1), std::abs(near / (kPi / 8) - 1));
    return {"boundary_identities", err < 1e-12, "max rel err " + num(err)};
}

SelftestResult gradient_check()
{
    Rng rng(11);
    const double lambda = 0.01;
    const auto gt = ArrayGeometry::half_wavelength(16, lambda);
    const auto gr = ArrayGeometry::half_wavelength(8, lambda);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
    {
        const RMat p = gen_pilot(16, 8, rng), w = gen_combiner(4, 8, rng);
        const LosParams truth{2 + 3 * u(rng), -0.8 + 1.6 * u(rng), -0.3 + 0.6 * u(rng)};
        const LosParams x{2 + 3 * u(rng), -0.8 + 1.6 * u(rng), -0.3 + 0.6 * u(rng)};
        const LosProblem pb(observe(los_channel(truth, gt, gr, lambda), p, w, 1e-6, rng).y, p, w, gt, gr, lambda);
        const LosGradient g = pb.gradient(x);
        const double h[3] = {1e-5 * lambda, 1e-5 * lambda / gt.aperture(), 1e-5 * lambda / gr.aperture()};
        double num2 = 0.0, den2 = 0.0;
        for (std::size_t a = 0; a < 3; ++a)
        {
            LosParams xp = x, xm = x;
            (a == 0 ? xp.r : a == 1 ? xp.theta : xp.phi) += h[a];
            (a == 0 ? xm.r : a == 1 ? xm.theta : xm.phi) -= h[a];
            const double fd = (pb.objective(xp) - pb.objective(xm)) / (2 * h[a]);
            num2 += std::pow((fd - g[a]) * h[a], 2);
            den2 += std::pow(g[a] * h[a], 2);
        }
        worst = std::max(worst, std::sqrt(num2 / den2));
    }
    return {"gradient_vs_finite_difference", worst < 1e-6, "max rel err " + num(worst)};
}

SelftestResult omp_exact_recovery()
{
    const double lambda = 0.01;
    const auto gt = ArrayGeometry::half_wavelength(16, lambda);
    const auto gr = ArrayGeometry::half_wavelength(8, lambda);
    const auto dt = build_codebook(sample_grid(gt, lambda, 1.2, 0.5, 50), gt, lambda);
    const auto dr = build_codebook(sample_grid(gr, lambda, 1.2, 0.5, 50), gr, lambda);
    const std::size_t it = 5, ir = 3;
    const CMat h = dr.atoms.col(ir) * dt.atoms.col(it).adjoint();
    Rng rng(5);
    const RMat p = gen_pilot(16, 16, rng), w = gen_combiner(8, 8, rng);
    const CMat y = (w.cast<cplx>() * h) * p.cast<cplx>();
    const OmpResult res = estimate_nlos(y, p, w, dt, dr, 1);
    const bool ok = res.support.size() == 1 && res.support[0] == AtomPair{it, ir};
    const double e = nmse(h, res.channel.entries);
    return {"omp_on_grid_recovery", ok && e < 1e-10, "nmse " + num(e)};
}

SelftestResult los_on_grid_recovery()
{
    const double lambda = 0.01;
    const auto gt = ArrayGeometry::half_wavelength(16, lambda);
    const auto gr = ArrayGeometry::half_wavelength(8, lambda);
    GridSpec g;
    g.r_min = 1.0;
    g.r_max = 5.0;
    g.r_steps = 8;
    g.theta_min = -0.6;
    g.theta_max = 0.6;
    g.theta_steps = 12;
    g.phi_min = -0.2;
    g.phi_max = 0.2;
    g.phi_steps = 4;
    const LosParams truth{g.r_values()[3], g.theta_values()[7], g.phi_values()[1]};
    const ChannelMatrix h = los_channel(truth, gt, gr, lambda);
    Rng rng(9);
    const RMat p = gen_pilot(16, 16, rng), w = gen_combiner(4, 8, rng);
    const LosProblem pb(observe(h, p, w, 0.0, rng).y, p, w, gt, gr, lambda);
    const LosEstimate est = estimate_los(pb, g, RefineSpec{}, LosCriterion::exact);
    const double e = nmse(h.entries, est.channel.entries);
    return {"los_on_grid_recovery", e < 1e-8, "nmse " + num(e)};
}

SelftestResult crlb_arithmetic()
{
    const double v = crlb(0.1, 4, 2, 8, 2);
    return {"crlb_formula", std::abs(v - 0.1) < 1e-15, "crlb " + num(v)};
}

SelftestResult kron_identity()
{
    Rng rng(3);
    const RMat p = gen_pilot(6, 4, rng), w = gen_combiner(3, 5, rng);
    CMat h = CMat::Random(5, 6);
    const CVec lhs = vec((w.cast<cplx>() * h) * p.cast<cplx>());
    const CVec rhs = kron_sensing(p, w).cast<cplx>() * vec(h);
    const double err = (lhs - rhs).norm() / lhs.norm();
    return {"kronecker_vec_identity", err < 1e-12, "rel err " + num(err)};
}

SelftestResult run_determinism()
{
    const std::string cfg_text = R"({
      "system": {"n1": 16, "n2": 8, "nrf": 4, "freq_hz": 3.0e10},
      "scene": {"dist_min": 2, "dist_max": 20, "kappa_mode": "per_scene"},
      "sweep": {"axis": "snr", "values": [0, 10]},
      "fixed": {"pilots": 8, "distance_m": 4},
      "methods": ["omp_near", "omp_far"],
      "trials": 3, "seed": 17,
      "codebook": {"r_min": 0.5, "r_max": 50}
    })";
    const ExperimentConfig cfg = parse_config(cfg_text, "selftest");
    const std::string a = format_csv(run_experiment(cfg));
    const std::string b = format_csv(run_experiment(cfg));
    return {"run_determinism", a == b, a == b ? "identical CSV" : "CSV differs"};
}

} // namespace

std::vector<SelftestResult> run_selftest()
{
    const std::vector<std::function<SelftestResult()>> checks{
        boundary_identities, gradient_check,  omp_exact_recovery, los_on_grid_recovery,
        crlb_arithmetic,     kron_identity,   run_determinism,
    };
    std::vector<SelftestResult> out;
    for (const auto &c : checks)
    {
        try
        {
            out.push_back(c());
        }
        catch (const std::exception &e)
        {
            out.push_back({"exception", false, e.what()});
        }
    }
    return out;
}

} // namespace xlmimo::bench
