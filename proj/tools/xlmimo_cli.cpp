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

// Command-line front end: experiment runs, boundary calculator, codebook
// summaries and the self-test.

#include "xlmimo/bench/config.hpp"
#include "xlmimo/bench/experiment.hpp"
#include "xlmimo/bench/selftest.hpp"
#include "xlmimo/boundaries.hpp"
#include "xlmimo/matrix_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string &spec)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        const auto x = item.find('x');
        if (x == std::string::npos)
            throw xlmimo::bench::ConfigError("--sizes: expected N1xN2 items, got \"" + item + "\"");
        try
        {
            out.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
        }
        catch (const std::exception &)
        {
            throw xlmimo::bench::ConfigError("--sizes: expected N1xN2 items, got \"" + item + "\"");
        }
    }
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    namespace xb = xlmimo::bench;

    CLI::App app{"Near-field XL-MIMO channel estimation benchmark"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    bool timing = false;
    std::size_t threads = 0;
    auto *run = app.add_subcommand("run", "Run a Monte-Carlo experiment and write CSV");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_path, "Output CSV path")->required();
    auto *seed_opt = run->add_option("--seed", seed, "Override the master seed");
    run->add_flag("--timing", timing, "Record wall time per row (makes output machine dependent)");
    run->add_option("--threads", threads, "Override the worker thread count");

    std::size_t n1 = 0, n2 = 0;
    double freq = 0.0;
    auto *bnd = app.add_subcommand("boundaries", "Print near/far-field boundaries as JSON");
    bnd->add_option("--n1", n1, "Transmit antennas")->required();
    bnd->add_option("--n2", n2, "Receive antennas")->required();
    bnd->add_option("--freq", freq, "Carrier frequency [Hz]")->required();

    std::string cache_prefix;
    auto *info = app.add_subcommand("codebook-info", "Summarise the dictionaries a config implies");
    info->add_option("config", config_path, "Experiment config (JSON)")->required();
    info->add_option("--cache", cache_prefix, "Write <prefix>_t.bin and <prefix>_r.bin near-field codebooks");

    auto *self = app.add_subcommand("selftest", "Run the built-in invariant checks");

    std::string sizes = "16x8,32x16,64x32";
    std::size_t probe_trials = 3;
    auto *cx = app.add_subcommand("complexity", "Measure run time scaling against N1*N2");
    cx->add_option("config", config_path, "Experiment config (JSON)")->required();
    cx->add_option("--sizes", sizes, "Comma separated N1xN2 list");
    cx->add_option("--trials", probe_trials, "Trials per size");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitConfig;
    }

    try
    {
        if (*run)
        {
            xb::ExperimentConfig cfg = xb::load_config(config_path);
            if (*seed_opt)
                cfg.seed = seed;
            if (threads > 0)
                cfg.threads = threads;
            const auto rows = xb::run_experiment(cfg, xb::RunOptions{timing});
            std::ofstream out(out_path, std::ios::binary);
            if (!out)
            {
                std::cerr << out_path << ": cannot open output file\n";
                return kExitRuntime;
            }
            xb::write_csv(out, rows);
            for (const auto &r : rows)
                if (!r.error.empty())
                    std::cerr << "warning: " << r.method << " at " << r.sweep_value << ": " << r.error << "\n";
        }
        else if (*bnd)
        {
            const auto b = xlmimo::boundary_report(n1, n2, freq);
            nlohmann::json j{{"n1", n1},
                             {"n2", n2},
                             {"freq_hz", freq},
                             {"wavelength", b.wavelength},
                             {"aperture_t", b.aperture_t},
                             {"aperture_r", b.aperture_r},
                             {"miso_rd_t", b.miso_rd_t},
                             {"miso_rd_r", b.miso_rd_r},
                             {"mimo_rd", b.mimo_rd},
                             {"mimo_ard", b.mimo_ard}};
            std::cout << j.dump(2) << "\n";
        }
        else if (*info)
        {
            const auto cfg = xb::load_config(config_path);
            std::cout << xb::codebook_info(cfg) << "\n";
            if (!cache_prefix.empty())
            {
                const double lambda = cfg.wavelength();
                const xlmimo::ArrayGeometry gt(cfg.system.n1, cfg.spacing()), gr(cfg.system.n2, cfg.spacing());
                const auto ctx = xlmimo::make_context(gt, gr, lambda, cfg.codebook);
                xlmimo::save_codebook_cache(cache_prefix + "_t.bin", ctx.near_t);
                xlmimo::save_codebook_cache(cache_prefix + "_r.bin", ctx.near_r);
            }
        }
        else if (*self)
        {
            bool all = true;
            for (const auto &r : xb::run_selftest())
            {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")\n";
                all = all && r.pass;
            }
            return all ? kExitOk : kExitRuntime;
        }
        else if (*cx)
        {
            const auto cfg = xb::load_config(config_path);
            const auto table = xb::complexity_probe(cfg, parse_sizes(sizes), probe_trials);
            std::cout << "method,n1n2,ms\n";
            for (const auto &row : table)
                for (const auto &[x, ms] : row.samples)
                    std::cout << row.method << ',' << x << ',' << ms << '\n';
            for (const auto &row : table)
                std::cout << "# slope " << row.method << " " << row.slope << '\n';
        }
    }
    catch (const xb::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
