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

#include "xlmimo/bench/config.hpp"
#include "xlmimo/boundaries.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace xlmimo::bench {

using nlohmann::json;

namespace {

using Path = std::vector<std::string>;

std::string join(const Path &p)
{
    std::string s;
    for (const auto &c : p)
        s += (s.empty() ? "" : ".") + c;
    return s;
}

// Line of the last path component, found by scanning for each quoted key in
// turn. Returns 0 when a key cannot be found.
std::size_t locate(const std::string &text, const Path &path)
{
    std::size_t pos = 0;
    for (const auto &c : path)
    {
        const auto hit = text.find("\"" + c + "\"", pos);
        if (hit == std::string::npos)
            return 0;
        pos = hit + 1;
    }
    return path.empty() ? 0 : 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

struct Source
{
    const std::string &text;
    const std::string &name;

    [[noreturn]] void fail(const Path &path, const std::string &msg) const
    {
        const std::size_t line = locate(text, path);
        std::string where = name;
        if (line > 0)
            where += ":" + std::to_string(line);
        throw ConfigError(where + ": " + (path.empty() ? std::string("<root>") : join(path)) + ": " + msg);
    }
};

class Object
{
public:
    Object(const json &j, Path path, const Source &src) : j_(j), path_(std::move(path)), src_(src)
    {
        if (!j_.is_object())
            src_.fail(path_, "expected an object");
    }

    const json *find(const std::string &key)
    {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    Path at(const std::string &key) const
    {
        Path p = path_;
        p.push_back(key);
        return p;
    }

    void number(const std::string &key, double &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_number())
                src_.fail(at(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                src_.fail(at(key), "expected a finite number");
        }
    }

    // Radians under `key`, or degrees under `key_deg`; not both.
    void angle(const std::string &key, double &out)
    {
        const bool rad = j_.contains(key), deg = j_.contains(key + "_deg");
        if (rad && deg)
            src_.fail(at(key), "give either " + key + " or " + key + "_deg");
        number(key, out);
        if (deg)
        {
            double d = 0.0;
            number(key + "_deg", d);
            out = d * kPi / 180.0;
        }
        else
            seen_.insert(key + "_deg");
    }

    void count(const std::string &key, std::size_t &out)
    {
        if (const json *v = find(key))
            out = as_count(*v, at(key));
    }

    void count(const std::string &key, int &out)
    {
        if (const json *v = find(key))
        {
            const std::size_t c = as_count(*v, at(key));
            if (c > static_cast<std::size_t>(std::numeric_limits<int>::max()))
                src_.fail(at(key), "value too large");
            out = static_cast<int>(c);
        }
    }

    void seed(const std::string &key, std::uint64_t &out)
    {
        if (const json *v = find(key))
        {
            if (v->is_number_unsigned())
                out = v->get<std::uint64_t>();
            else if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
                out = static_cast<std::uint64_t>(v->get<std::int64_t>());
            else
                src_.fail(at(key), "expected a nonnegative integer");
        }
    }

    void text(const std::string &key, std::string &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_string())
                src_.fail(at(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    template <class E>
    void choice(const std::string &key, E &out, const std::map<std::string, E> &options)
    {
        if (const json *v = find(key))
            out = pick(*v, at(key), options);
    }

    template <class E>
    E pick(const json &v, const Path &p, const std::map<std::string, E> &options) const
    {
        if (!v.is_string())
            src_.fail(p, "expected a string");
        auto it = options.find(v.get<std::string>());
        if (it == options.end())
        {
            std::string names;
            for (const auto &[k, e] : options)
                names += (names.empty() ? "" : ", ") + k;
            src_.fail(p, "unknown value \"" + v.get<std::string>() + "\" (expected one of " + names + ")");
        }
        return it->second;
    }

    std::size_t as_count(const json &v, const Path &p) const
    {
        if (v.is_number_unsigned())
            return v.get<std::size_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
            return static_cast<std::size_t>(v.get<std::int64_t>());
        src_.fail(p, "expected a nonnegative integer");
    }

    // Rejects keys that were never looked up.
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                src_.fail(at(it.key()), "unknown key");
    }

    const Source &source() const { return src_; }

private:
    const json &j_;
    Path path_;
    const Source &src_;
    std::set<std::string> seen_;
};

const std::map<std::string, Method> kMethods{{"two_stage", Method::two_stage},
                                             {"omp_near", Method::omp_near},
                                             {"omp_far", Method::omp_far},
                                             {"ls_oracle", Method::ls_oracle}};
const std::map<std::string, SweepAxis> kAxes{
    {"distance", SweepAxis::distance}, {"pilot_size", SweepAxis::pilot_size}, {"snr", SweepAxis::snr}};
const std::map<std::string, KappaMode> kKappa{{"fixed_distance", KappaMode::fixed_distance},
                                              {"per_scene", KappaMode::per_scene}};
const std::map<std::string, PilotKind> kPilots{{"random", PilotKind::random}, {"hadamard", PilotKind::hadamard}};
const std::map<std::string, LosCriterion> kCriteria{{"exact", LosCriterion::exact},
                                                    {"phase_profiled", LosCriterion::phase_profiled}};
const std::map<std::string, bool> kUnits{{"m", false}, {"ard", true}};

template <class E>
std::string name_of(const std::map<std::string, E> &m, E e)
{
    for (const auto &[k, v] : m)
        if (v == e)
            return k;
    return "?";
}

// First violated constraint as (field path, message).
std::optional<std::pair<Path, std::string>> first_violation(const ExperimentConfig &c)
{
    using R = std::optional<std::pair<Path, std::string>>;
    auto bad = [](Path p, std::string m) { return R{std::make_pair(std::move(p), std::move(m))}; };

    if (c.system.n1 < 1)
        return bad({"system", "n1"}, "must be >= 1");
    if (c.system.n2 < 1)
        return bad({"system", "n2"}, "must be >= 1");
    if (c.system.nrf < 1)
        return bad({"system", "nrf"}, "must be >= 1");
    if (!(c.system.freq_hz > 0.0))
        return bad({"system", "freq_hz"}, "must be positive");
    if (c.system.spacing < 0.0)
        return bad({"system", "spacing_m"}, "must be nonnegative");
    try
    {
        c.scene.validate();
    }
    catch (const std::invalid_argument &e)
    {
        return bad({"scene"}, e.what());
    }
    if (c.values.empty())
        return bad({"sweep", "values"}, "must not be empty");
    for (double v : c.values)
    {
        if (!std::isfinite(v))
            return bad({"sweep", "values"}, "values must be finite");
        if (c.axis == SweepAxis::distance && !(v > 0.0))
            return bad({"sweep", "values"}, "distances must be positive");
        if (c.axis == SweepAxis::pilot_size && (!(v >= 1.0) || std::floor(v) != v))
            return bad({"sweep", "values"}, "pilot sizes must be positive integers");
    }
    if (c.values_in_ard && c.axis != SweepAxis::distance)
        return bad({"sweep", "unit"}, "\"ard\" applies to distance sweeps only");
    if (c.pilots < 1)
        return bad({"fixed", "pilots"}, "must be >= 1");
    if (c.distance && !(*c.distance > 0.0))
        return bad({"fixed", "distance_m"}, "must be positive");
    if (c.methods.empty())
        return bad({"methods"}, "must not be empty");
    for (std::size_t i = 0; i < c.methods.size(); ++i)
        for (std::size_t j = i + 1; j < c.methods.size(); ++j)
            if (c.methods[i] == c.methods[j])
                return bad({"methods"}, "duplicate method " + to_string(c.methods[i]));
    if (c.trials < 1)
        return bad({"trials"}, "must be >= 1");
    if (c.threads < 1)
        return bad({"threads"}, "must be >= 1");
    if (c.sparsity && *c.sparsity < 1)
        return bad({"sparsity"}, "must be >= 1");
    try
    {
        c.grid.validate();
    }
    catch (const std::invalid_argument &e)
    {
        return bad({"grid"}, e.what());
    }
    try
    {
        c.refine.validate();
    }
    catch (const std::invalid_argument &e)
    {
        return bad({"refine"}, e.what());
    }
    if (!(c.codebook.beta > 0.0))
        return bad({"codebook", "beta"}, "must be positive");
    if (!(c.codebook.r_min > 0.0))
        return bad({"codebook", "r_min"}, "must be positive");
    if (!(c.codebook.r_max > c.codebook.r_min))
        return bad({"codebook", "r_max"}, "must exceed r_min");
    if (c.codebook.oversampling < 1)
        return bad({"codebook", "oversampling"}, "must be >= 1");
    if (!c.channel_files.empty() && c.axis == SweepAxis::distance)
        return bad({"channel_files"}, "imported channels cannot be swept over distance");
    return std::nullopt;
}

} // namespace

double ExperimentConfig::wavelength() const { return wavelength_from_frequency(system.freq_hz); }

double ExperimentConfig::spacing() const { return system.spacing > 0.0 ? system.spacing : wavelength() / 2.0; }

std::size_t ExperimentConfig::nlos_sparsity() const
{
    return sparsity ? *sparsity : static_cast<std::size_t>(std::max(scene.num_paths, 1));
}

std::vector<double> ExperimentConfig::resolved_values() const
{
    if (!values_in_ard)
        return values;
    const double ard = mimo_ard(static_cast<double>(system.n1) * spacing(),
                                static_cast<double>(system.n2) * spacing(), wavelength());
    std::vector<double> out;
    for (double v : values)
        out.push_back(v * ard);
    return out;
}

std::string to_string(Method m) { return name_of(kMethods, m); }
std::string to_string(SweepAxis a) { return name_of(kAxes, a); }

void validate(const ExperimentConfig &cfg)
{
    if (auto v = first_violation(cfg))
        throw ConfigError(join(v->first) + ": " + v->second);
}

ExperimentConfig parse_config(const std::string &text, const std::string &source)
{
    json root;
    try
    {
        root = json::parse(text, nullptr, true, true);
    }
    catch (const json::parse_error &e)
    {
        const std::size_t off = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(off), '\n');
        throw ConfigError(source + ":" + std::to_string(line) + ": syntax error: " + e.what());
    }

    const Source src{text, source};
    ExperimentConfig c;
    Object top(root, {}, src);
    top.text("name", c.name);

    if (const json *v = top.find("system"))
    {
        Object o(*v, {"system"}, src);
        o.count("n1", c.system.n1);
        o.count("n2", c.system.n2);
        o.count("nrf", c.system.nrf);
        o.number("freq_hz", c.system.freq_hz);
        o.number("spacing_m", c.system.spacing);
        o.finish();
    }
    if (const json *v = top.find("scene"))
    {
        Object o(*v, {"scene"}, src);
        o.angle("angle_min", c.scene.angle_min);
        o.angle("angle_max", c.scene.angle_max);
        o.number("dist_min", c.scene.dist_min);
        o.number("dist_max", c.scene.dist_max);
        o.angle("phi_min", c.scene.phi_min);
        o.angle("phi_max", c.scene.phi_max);
        o.count("num_paths", c.scene.num_paths);
        o.number("kappa", c.scene.kappa);
        o.number("kappa_ref_distance", c.scene.kappa_ref_distance);
        o.choice("kappa_mode", c.scene.kappa_mode, kKappa);
        o.finish();
    }
    if (const json *v = top.find("sweep"))
    {
        Object o(*v, {"sweep"}, src);
        o.choice("axis", c.axis, kAxes);
        o.choice("unit", c.values_in_ard, kUnits);
        if (const json *vals = o.find("values"))
        {
            if (!vals->is_array())
                src.fail(o.at("values"), "expected an array of numbers");
            for (const auto &x : *vals)
            {
                if (!x.is_number())
                    src.fail(o.at("values"), "expected an array of numbers");
                c.values.push_back(x.get<double>());
            }
        }
        o.finish();
    }
    else
        src.fail({"sweep"}, "missing required section");
    if (const json *v = top.find("fixed"))
    {
        Object o(*v, {"fixed"}, src);
        o.number("snr_db", c.snr_db);
        o.count("pilots", c.pilots);
        if (o.find("distance_m"))
        {
            double d = 0.0;
            o.number("distance_m", d);
            c.distance = d;
        }
        o.finish();
    }
    if (const json *v = top.find("methods"))
    {
        if (!v->is_array())
            src.fail({"methods"}, "expected an array of method names");
        c.methods.clear();
        for (const auto &m : *v)
            c.methods.push_back(top.pick(m, {"methods"}, kMethods));
    }
    top.count("trials", c.trials);
    top.seed("seed", c.seed);
    top.count("threads", c.threads);
    top.choice("pilot_kind", c.pilot_kind, kPilots);
    top.choice("los_criterion", c.criterion, kCriteria);
    if (top.find("sparsity"))
    {
        std::size_t s = 0;
        top.count("sparsity", s);
        c.sparsity = s;
    }
    if (const json *v = top.find("grid"))
    {
        Object o(*v, {"grid"}, src);
        o.number("r_min", c.grid.r_min);
        o.number("r_max", c.grid.r_max);
        o.angle("theta_min", c.grid.theta_min);
        o.angle("theta_max", c.grid.theta_max);
        o.angle("phi_min", c.grid.phi_min);
        o.angle("phi_max", c.grid.phi_max);
        o.count("r_steps", c.grid.r_steps);
        o.count("theta_steps", c.grid.theta_steps);
        o.count("phi_steps", c.grid.phi_steps);
        o.finish();
    }
    if (const json *v = top.find("refine"))
    {
        Object o(*v, {"refine"}, src);
        o.count("max_iters", c.refine.max_iters);
        o.number("tol", c.refine.tol);
        o.number("step_r", c.refine.step_r);
        o.number("step_theta", c.refine.step_theta);
        o.number("step_phi", c.refine.step_phi);
        o.number("backtrack_factor", c.refine.backtrack_factor);
        o.count("max_backtracks", c.refine.max_backtracks);
        o.finish();
    }
    if (const json *v = top.find("codebook"))
    {
        Object o(*v, {"codebook"}, src);
        o.number("beta", c.codebook.beta);
        o.number("r_min", c.codebook.r_min);
        o.number("r_max", c.codebook.r_max);
        o.count("oversampling", c.codebook.oversampling);
        o.finish();
    }
    if (const json *v = top.find("channel_files"))
    {
        if (!v->is_array())
            src.fail({"channel_files"}, "expected an array of paths");
        for (const auto &f : *v)
        {
            if (!f.is_string())
                src.fail({"channel_files"}, "expected an array of paths");
            c.channel_files.push_back(f.get<std::string>());
        }
    }
    top.finish();

    if (auto bad = first_violation(c))
        src.fail(bad->first, bad->second);
    return c;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string canonical_dump(const ExperimentConfig &c)
{
    json j;
    j["name"] = c.name;
    j["system"] = {{"n1", c.system.n1},
                   {"n2", c.system.n2},
                   {"nrf", c.system.nrf},
                   {"freq_hz", c.system.freq_hz},
                   {"spacing_m", c.spacing()}};
    j["scene"] = {{"angle_min", c.scene.angle_min},
                  {"angle_max", c.scene.angle_max},
                  {"dist_min", c.scene.dist_min},
                  {"dist_max", c.scene.dist_max},
                  {"phi_min", c.scene.phi_min},
                  {"phi_max", c.scene.phi_max},
                  {"num_paths", c.scene.num_paths},
                  {"kappa", c.scene.kappa},
                  {"kappa_ref_distance", c.scene.kappa_ref_distance},
                  {"kappa_mode", name_of(kKappa, c.scene.kappa_mode)}};
    j["sweep"] = {{"axis", to_string(c.axis)}, {"unit", c.values_in_ard ? "ard" : "m"}, {"values", c.values}};
    j["fixed"] = {{"snr_db", c.snr_db}, {"pilots", c.pilots}};
    j["fixed"]["distance_m"] = c.distance ? json(*c.distance) : json(nullptr);
    json methods = json::array();
    for (auto m : c.methods)
        methods.push_back(to_string(m));
    j["methods"] = methods;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["pilot_kind"] = name_of(kPilots, c.pilot_kind);
    j["los_criterion"] = name_of(kCriteria, c.criterion);
    j["sparsity"] = c.nlos_sparsity();
    j["grid"] = {{"r_min", c.grid.r_min},         {"r_max", c.grid.r_max},         {"theta_min", c.grid.theta_min},
                 {"theta_max", c.grid.theta_max}, {"phi_min", c.grid.phi_min},     {"phi_max", c.grid.phi_max},
                 {"r_steps", c.grid.r_steps},     {"theta_steps", c.grid.theta_steps}, {"phi_steps", c.grid.phi_steps}};
    j["refine"] = {{"max_iters", c.refine.max_iters},
                   {"tol", c.refine.tol},
                   {"step_r", c.refine.step_r},
                   {"step_theta", c.refine.step_theta},
                   {"step_phi", c.refine.step_phi},
                   {"backtrack_factor", c.refine.backtrack_factor},
                   {"max_backtracks", c.refine.max_backtracks}};
    j["codebook"] = {{"beta", c.codebook.beta},
                     {"r_min", c.codebook.r_min},
                     {"r_max", c.codebook.r_max},
                     {"oversampling", c.codebook.oversampling}};
    j["channel_files"] = c.channel_files;
    return j.dump();
}

std::string config_digest(const ExperimentConfig &cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical_dump(cfg))
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace xlmimo::bench
