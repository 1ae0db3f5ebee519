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

#include "xlmimo/bench/experiment.hpp"
#include "xlmimo/boundaries.hpp"
#include "xlmimo/matrix_io.hpp"
#include "xlmimo/measurement.hpp"
#include "xlmimo/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace xlmimo::bench {

namespace {

using Clock = std::chrono::steady_clock;

struct Setup
{
    EstimationContext ctx;
    std::vector<CMat> imported;
};

Setup make_setup(const ExperimentConfig &cfg)
{
    const double lambda = cfg.wavelength();
    const ArrayGeometry gt(cfg.system.n1, cfg.spacing());
    const ArrayGeometry gr(cfg.system.n2, cfg.spacing());
    Setup s{make_context(gt, gr, lambda, cfg.codebook), {}};
    for (const auto &f : cfg.channel_files)
    {
        MatrixFile m = read_matrix_file(f);
        if (m.data.rows() != static_cast<Eigen::Index>(cfg.system.n2) ||
            m.data.cols() != static_cast<Eigen::Index>(cfg.system.n1))
            throw ConfigError(f + ": imported channel must be N2 x N1");
        s.imported.push_back(std::move(m.data));
    }
    return s;
}

// Top-left block of a Sylvester Hadamard matrix, scaled like the random kind.
RMat hadamard_block(std::size_t rows, std::size_t cols, double scale)
{
    std::size_t n = 1;
    while (n < std::max(rows, cols))
        n *= 2;
    return hadamard(n).topLeftCorner(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)) * scale;
}

struct Trial
{
    CMat h;
    MeasurementSet meas;
};

Trial make_trial(const ExperimentConfig &cfg, const Setup &setup, double value, std::size_t t)
{
    Rng rng(split_seed(cfg.seed, t));
    Trial tr;
    if (!setup.imported.empty())
        tr.h = setup.imported[t % setup.imported.size()];
    else
    {
        std::optional<double> r = cfg.axis == SweepAxis::distance ? std::optional<double>(value) : cfg.distance;
        const Scene scene = sample_scene(rng, cfg.scene, cfg.system.n1, cfg.system.n2, r);
        tr.h = scene_channel(scene, setup.ctx.geom_t, setup.ctx.geom_r, setup.ctx.wavelength).entries;
    }
    const auto m = cfg.axis == SweepAxis::pilot_size ? static_cast<std::size_t>(value) : cfg.pilots;
    RMat p, w;
    if (cfg.pilot_kind == PilotKind::hadamard)
    {
        p = hadamard_block(cfg.system.n1, m, 1.0 / std::sqrt(static_cast<double>(m)));
        w = hadamard_block(cfg.system.nrf, cfg.system.n2, 1.0 / std::sqrt(static_cast<double>(cfg.system.n2)));
    }
    else
    {
        p = gen_pilot(cfg.system.n1, m, rng);
        w = gen_combiner(cfg.system.nrf, cfg.system.n2, rng);
    }
    const double snr = cfg.axis == SweepAxis::snr ? value : cfg.snr_db;
    const double sigma2 = calibrate_sigma2(tr.h, p, w, snr);
    tr.meas = observe(tr.h, p, w, sigma2, rng);
    tr.meas.snr_db = snr;
    return tr;
}

CMat run_method(Method m, const ExperimentConfig &cfg, const Setup &setup, const MeasurementSet &ms)
{
    switch (m)
    {
    case Method::two_stage:
    {
        TwoStageOptions opt{cfg.grid, cfg.refine, cfg.criterion, cfg.nlos_sparsity()};
        return two_stage(ms.y, ms.p, ms.w, setup.ctx, opt).h_hat.entries;
    }
    case Method::omp_near:
        return baseline_omp(ms.y, ms.p, ms.w, setup.ctx, cfg.nlos_sparsity() + 1, OmpMode::near).h_hat.entries;
    case Method::omp_far:
        return baseline_omp(ms.y, ms.p, ms.w, setup.ctx, cfg.nlos_sparsity() + 1, OmpMode::far).h_hat.entries;
    case Method::ls_oracle:
        return ls_oracle(ms.y, ms.p, ms.w).entries;
    }
    throw std::logic_error("unknown method");
}

struct TrialOutcome
{
    double energy = 0.0;
    double bound = 0.0;
    std::vector<double> err;
    std::vector<double> ms;
    std::vector<std::string> failure;
};

template <class F>
void parallel_for(std::size_t n, std::size_t threads, F &&f)
{
    threads = std::min(threads, n);
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex mu;
    for (std::size_t k = 0; k < threads; ++k)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    f(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

std::string fmt(const char *spec, double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg, const RunOptions &opt)
{
    validate(cfg);
    const Setup setup = make_setup(cfg);
    const std::string digest = config_digest(cfg);
    const auto values = cfg.resolved_values();
    const std::size_t nm = cfg.methods.size();

    std::vector<ResultRow> rows;
    for (double value : values)
    {
        std::vector<TrialOutcome> out(cfg.trials);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
            const Trial tr = make_trial(cfg, setup, value, t);
            TrialOutcome &o = out[t];
            o.energy = tr.h.squaredNorm();
            o.bound = crlb_normalized(tr.meas.sigma2, tr.meas.p, tr.meas.w);
            o.err.assign(nm, 0.0);
            o.ms.assign(nm, 0.0);
            o.failure.assign(nm, {});
            for (std::size_t k = 0; k < nm; ++k)
            {
                const auto t0 = Clock::now();
                try
                {
                    const CMat est = run_method(cfg.methods[k], cfg, setup, tr.meas);
                    o.err[k] = (tr.h - est).squaredNorm();
                    if (!std::isfinite(o.err[k]))
                        o.failure[k] = "non-finite estimate";
                }
                catch (const std::exception &e)
                {
                    o.failure[k] = e.what();
                }
                o.ms[k] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            }
        });

        // Reduce in trial order so the result does not depend on the thread count.
        double bound_sum = 0.0, energy_all = 0.0;
        for (const auto &o : out)
        {
            bound_sum += o.bound;
            energy_all += o.energy;
        }
        const double bound_db = to_db(nmse_bound(bound_sum / static_cast<double>(cfg.trials),
                                                 energy_all / static_cast<double>(cfg.trials)));
        for (std::size_t k = 0; k < nm; ++k)
        {
            NmseAccumulator acc;
            double ms = 0.0;
            std::size_t failed = 0;
            std::string first_failure;
            for (const auto &o : out)
            {
                ms += o.ms[k];
                if (o.failure[k].empty())
                    acc.add(o.err[k], o.energy);
                else if (failed++ == 0)
                    first_failure = o.failure[k];
            }
            ResultRow row;
            row.sweep_value = value;
            row.bound_db = bound_db;
            row.seed = cfg.seed;
            row.digest = digest;
            row.wall_time_ms = opt.timing ? ms : 0.0;
            if (acc.count() > 0)
            {
                row.method = to_string(cfg.methods[k]);
                row.nmse_db = to_db(acc.value());
                row.trials = acc.count();
                rows.push_back(row);
            }
            if (failed > 0)
            {
                ResultRow err = row;
                err.method = to_string(cfg.methods[k]) + ":error";
                err.nmse_db = std::numeric_limits<double>::quiet_NaN();
                err.trials = failed;
                err.error = first_failure;
                rows.push_back(err);
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        return a.sweep_value != b.sweep_value ? a.sweep_value < b.sweep_value : a.method < b.method;
    });
    return rows;
}

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows)
{
    out << "sweep,method,nmse_db,bound_db,trials,ms,seed,digest\n";
    for (const auto &r : rows)
        out << fmt("%.6g", r.sweep_value) << ',' << r.method << ',' << fmt("%.4f", r.nmse_db) << ','
            << fmt("%.4f", r.bound_db) << ',' << r.trials << ',' << fmt("%.1f", r.wall_time_ms) << ',' << r.seed
            << ',' << r.digest << '\n';
}

std::string format_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream ss;
    write_csv(ss, rows);
    return ss.str();
}

std::vector<ComplexityRow> complexity_probe(const ExperimentConfig &cfg,
                                            const std::vector<std::pair<std::size_t, std::size_t>> &sizes,
                                            std::size_t trials)
{
    if (sizes.size() < 3)
        throw std::invalid_argument("complexity_probe: at least three sizes are required");
    if (trials < 1)
        throw std::invalid_argument("complexity_probe: trials must be >= 1");
    validate(cfg);

    std::vector<ComplexityRow> table;
    for (auto m : cfg.methods)
        table.push_back(ComplexityRow{to_string(m), {}, 0.0});

    for (const auto &[n1, n2] : sizes)
    {
        // Pilot count and RF chains stay at the base values; only the arrays grow.
        ExperimentConfig c = cfg;
        c.system.n1 = n1;
        c.system.n2 = n2;
        c.system.nrf = std::min(cfg.system.nrf, n2);
        c.axis = SweepAxis::snr;
        c.values = {cfg.snr_db};
        c.values_in_ard = false;
        c.channel_files.clear();
        c.trials = trials;
        c.threads = 1;
        const Setup setup = make_setup(c);
        for (std::size_t k = 0; k < c.methods.size(); ++k)
        {
            double ms = 0.0;
            for (std::size_t t = 0; t < trials; ++t)
            {
                const Trial tr = make_trial(c, setup, c.snr_db, t);
                const auto t0 = Clock::now();
                try
                {
                    run_method(c.methods[k], c, setup, tr.meas);
                }
                catch (const std::exception &)
                {
                }
                ms += std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            }
            table[k].samples.emplace_back(static_cast<double>(n1 * n2), ms / static_cast<double>(trials));
        }
    }
    for (auto &row : table)
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(row.samples.size());
        for (const auto &[x, y] : row.samples)
        {
            const double lx = std::log(x), ly = std::log(std::max(y, 1e-6));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        row.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return table;
}

std::string codebook_info(const ExperimentConfig &cfg)
{
    validate(cfg);
    const Setup setup = make_setup(cfg);
    const auto &ctx = setup.ctx;
    auto describe = [](const PolarCodebook &cb) {
        std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
        for (const auto &d : cb.grid.distances)
        {
            lo = std::min(lo, d.size());
            hi = std::max(hi, d.size());
        }
        return nlohmann::json{{"atoms", cb.size()},
                              {"angles", cb.grid.angles.size()},
                              {"distances_per_angle_min", lo},
                              {"distances_per_angle_max", hi},
                              {"bytes", cb.atoms.size() * sizeof(cplx)}};
    };
    nlohmann::json j;
    j["n1"] = cfg.system.n1;
    j["n2"] = cfg.system.n2;
    j["wavelength"] = ctx.wavelength;
    j["spacing"] = cfg.spacing();
    j["aperture_t"] = ctx.geom_t.aperture();
    j["aperture_r"] = ctx.geom_r.aperture();
    j["mimo_rd"] = mimo_rd(ctx.geom_t.aperture(), ctx.geom_r.aperture(), ctx.wavelength);
    j["mimo_ard"] = mimo_ard(ctx.geom_t.aperture(), ctx.geom_r.aperture(), ctx.wavelength);
    j["miso_rd_t"] = miso_rd(ctx.geom_t.aperture(), ctx.wavelength);
    j["miso_rd_r"] = miso_rd(ctx.geom_r.aperture(), ctx.wavelength);
    j["near_t"] = describe(ctx.near_t);
    j["near_r"] = describe(ctx.near_r);
    j["far_t"] = describe(ctx.far_t);
    j["far_r"] = describe(ctx.far_r);
    j["los_grid_points"] = cfg.grid.size();
    j["digest"] = config_digest(cfg);
    return j.dump(2);
}

} // namespace xlmimo::bench
