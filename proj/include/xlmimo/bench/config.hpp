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

#ifndef XLMIMO_BENCH_CONFIG_HPP
#define XLMIMO_BENCH_CONFIG_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/estimation.hpp"
#include "xlmimo/los_estimation.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xlmimo::bench {

// Invalid or unreadable experiment configuration. what() carries a
// "<source>:<line>: <field>: <problem>" diagnostic where a location is known.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class SweepAxis
{
    distance,
    pilot_size,
    snr
};

enum class Method
{
    two_stage,
    omp_near,
    omp_far,
    ls_oracle
};

enum class PilotKind
{
    random,  // +-1/sqrt(M) pilots, +-1/sqrt(N2) combiner
    hadamard // orthogonal rows / columns with the same entry magnitudes
};

struct SystemConfig
{
    std::size_t n1 = 64;
    std::size_t n2 = 32;
    std::size_t nrf = 8;
    double freq_hz = 3.125e9;
    double spacing = 0.0; // 0 selects half a wavelength
};

struct ExperimentConfig
{
    std::string name = "experiment";
    SystemConfig system;
    SceneConfig scene;
    SweepAxis axis = SweepAxis::distance;
    std::vector<double> values;
    bool values_in_ard = false; // distance sweep values given in multiples of MIMO-ARD
    double snr_db = 5.0;
    std::size_t pilots = 32;
    std::optional<double> distance; // fixed LoS distance for non-distance sweeps
    std::vector<Method> methods{Method::two_stage, Method::omp_near, Method::omp_far};
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    PilotKind pilot_kind = PilotKind::random;
    std::optional<std::size_t> sparsity; // defaults to scene.num_paths
    GridSpec grid;
    RefineSpec refine;
    LosCriterion criterion = LosCriterion::phase_profiled;
    CodebookSpec codebook;
    std::vector<std::string> channel_files;

    double wavelength() const;
    double spacing() const;
    std::size_t nlos_sparsity() const;
    // Sweep values in their natural unit (metres, pilots, dB).
    std::vector<double> resolved_values() const;
};

// Parses a JSON document (comments allowed). `source` names the input in
// diagnostics. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string &text, const std::string &source = "<config>");
ExperimentConfig load_config(const std::string &path);
void validate(const ExperimentConfig &cfg);

// Canonical JSON dump with every field spelled out; the digest is FNV-1a 64 of
// this string in hex.
std::string canonical_dump(const ExperimentConfig &cfg);
std::string config_digest(const ExperimentConfig &cfg);

std::string to_string(Method m);
std::string to_string(SweepAxis a);

} // namespace xlmimo::bench

#endif
