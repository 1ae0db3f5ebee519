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

#ifndef XLMIMO_BENCH_EXPERIMENT_HPP
#define XLMIMO_BENCH_EXPERIMENT_HPP

#include "xlmimo/bench/config.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace xlmimo::bench {

struct ResultRow
{
    double sweep_value = 0.0;
    std::string method; // "<method>:error" when every trial failed
    double nmse_db = 0.0;
    double bound_db = 0.0;
    std::size_t trials = 0; // successful trials
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
    std::string digest;
    std::string error;
};

struct RunOptions
{
    bool timing = false; // fill wall_time_ms; otherwise 0 so CSV output is reproducible
};

// Seed of trial t: split_seed(master, t). The same trial seeds are used at
// every sweep point, so sweep points differ only in the swept quantity.
std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg, const RunOptions &opt = {});

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
std::string format_csv(const std::vector<ResultRow> &rows);

struct ComplexityRow
{
    std::string method;
    std::vector<std::pair<double, double>> samples; // (N1 N2, mean ms per trial)
    double slope = 0.0;                             // least-squares slope of log ms vs log N1 N2
};

// Times each configured method at every (N1, N2) size; needs at least three sizes.
std::vector<ComplexityRow> complexity_probe(const ExperimentConfig &cfg,
                                            const std::vector<std::pair<std::size_t, std::size_t>> &sizes,
                                            std::size_t trials = 3);

// JSON summary of the dictionaries and boundaries a config implies.
std::string codebook_info(const ExperimentConfig &cfg);

} // namespace xlmimo::bench

#endif
