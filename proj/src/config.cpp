// SPDX-License-Identifier: Apache-2.0
//
// hbf - hybrid analog/digital beamforming from implicit CSI
// Copyright (C) 2026 The hbf Authors
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

#include "hbf/error.hpp"
#include "hbf/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hbf
{

namespace
{
std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true)
    {
        const auto pos = s.find(',');
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos)
            break;
        s.remove_prefix(pos + 1);
    }
    if (out.size() == 1 && out.front().empty())
        out.clear();
    return out;
}

double parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InvalidInput("not a number: '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidInput("not a non-negative integer: '" + std::string(s) + "'");
    return v;
}

bool parse_bool(std::string_view s)
{
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw InvalidInput("not a boolean: '" + std::string(s) + "'");
}

template <class T, class F>
std::vector<T> parse_list(std::string_view s, F f)
{
    std::vector<T> out;
    for (auto item : split_list(s))
        out.push_back(f(item));
    return out;
}

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T> &v, F f)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            out += ", ";
        out += f(v[i]);
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig &, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"n_tx", [](auto &c, auto v) { c.n_tx = parse_u64(v); }},
        {"n_rx", [](auto &c, auto v) { c.n_rx = parse_u64(v); }},
        {"n_rf", [](auto &c, auto v) { c.n_rf = parse_u64(v); }},
        {"n_streams", [](auto &c, auto v) { c.n_streams = parse_u64(v); }},
        {"n_subcarriers", [](auto &c, auto v) { c.n_subcarriers = parse_u64(v); }},
        {"codebook_tx", [](auto &c, auto v) { c.codebook_tx = parse_u64(v); }},
        {"codebook_rx", [](auto &c, auto v) { c.codebook_rx = parse_u64(v); }},
        {"n_clusters", [](auto &c, auto v) { c.profile.n_clusters = parse_u64(v); }},
        {"rays_per_cluster", [](auto &c, auto v) { c.profile.rays_per_cluster = parse_u64(v); }},
        {"aod_spread_deg", [](auto &c, auto v) { c.profile.aod_spread_deg = parse_double(v); }},
        {"aoa_spread_deg", [](auto &c, auto v) { c.profile.aoa_spread_deg = parse_double(v); }},
        {"ray_offsets", [](auto &c, auto v) { c.profile.ray_offsets = parse_list<double>(v, parse_double); }},
        {"delay_max",
         [](auto &c, auto v) {
             if (v == "auto")
                 c.profile.delay_max.reset();
             else
                 c.profile.delay_max = parse_double(v);
         }},
        {"los_power_fraction", [](auto &c, auto v) { c.profile.los_power_fraction = parse_double(v); }},
        {"power_decay", [](auto &c, auto v) { c.profile.power_decay = parse_double(v); }},
        {"shared_cluster_delay", [](auto &c, auto v) { c.profile.shared_cluster_delay = parse_bool(v); }},
        {"snr_db_list", [](auto &c, auto v) { c.snr_db_list = parse_list<double>(v, parse_double); }},
        {"m_list", [](auto &c, auto v) { c.m_list = parse_list<std::size_t>(v, parse_u64); }},
        {"modes", [](auto &c, auto v) { c.modes = parse_list<Criterion>(v, parse_criterion); }},
        {"n_trials", [](auto &c, auto v) { c.n_trials = parse_u64(v); }},
        {"master_seed", [](auto &c, auto v) { c.master_seed = parse_u64(v); }},
        {"noiseless_observations", [](auto &c, auto v) { c.noiseless_observations = parse_bool(v); }},
        {"allocation", [](auto &c, auto v) { c.allocation = parse_allocation(v); }},
        {"include_oracle", [](auto &c, auto v) { c.include_oracle = parse_bool(v); }},
        {"oracle_max_pairs", [](auto &c, auto v) { c.oracle_max_pairs = parse_u64(v); }},
        {"max_m", [](auto &c, auto v) { c.max_m = parse_u64(v); }},
    };
    return table;
}
} // namespace

ExperimentConfig preset(std::string_view name)
{
    ExperimentConfig cfg;
    if (name == "desk")
        return cfg;
    if (name == "paper-fig3")
    {
        cfg.n_tx = cfg.n_rx = 32;
        cfg.n_subcarriers = 512;
        cfg.profile.n_clusters = 5;
        cfg.profile.rays_per_cluster = 8;
        cfg.profile.los_power_fraction = 0.8;
        cfg.snr_db_list = {-10.0, -5.0, 0.0, 5.0, 10.0};
        return cfg;
    }
    throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::istream &is, ExperimentConfig base)
{
    ExperimentConfig cfg = std::move(base);
    std::string line;
    std::size_t lineno = 0;
    bool seen_key = false;
    while (std::getline(is, line))
    {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty())
            continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(s.substr(0, eq));
        const auto value = trim(s.substr(eq + 1));
        try
        {
            if (key == "preset")
            {
                if (seen_key)
                    throw InvalidInput("preset must come before other keys");
                cfg = preset(value);
                continue;
            }
            const auto it = setters().find(key);
            if (it == setters().end())
                throw InvalidInput("unknown key '" + std::string(key) + "'");
            it->second(cfg, value);
            seen_key = true;
        }
        catch (const InvalidInput &e)
        {
            throw InvalidInput("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path.string() + "'");
    return parse_config(in);
}

std::string format_config(const ExperimentConfig &cfg)
{
    const auto &p = cfg.profile;
    auto u = [](std::size_t v) { return std::to_string(v); };
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    std::ostringstream os;
    os << "n_tx = " << cfg.n_tx << '\n'
       << "n_rx = " << cfg.n_rx << '\n'
       << "n_rf = " << cfg.n_rf << '\n'
       << "n_streams = " << cfg.n_streams << '\n'
       << "n_subcarriers = " << cfg.n_subcarriers << '\n'
       << "codebook_tx = " << cfg.codebook_tx << '\n'
       << "codebook_rx = " << cfg.codebook_rx << '\n'
       << "n_clusters = " << p.n_clusters << '\n'
       << "rays_per_cluster = " << p.rays_per_cluster << '\n'
       << "aod_spread_deg = " << fmt(p.aod_spread_deg) << '\n'
       << "aoa_spread_deg = " << fmt(p.aoa_spread_deg) << '\n'
       << "ray_offsets = " << join(p.ray_offsets, fmt) << '\n'
       << "delay_max = " << (p.delay_max ? fmt(*p.delay_max) : std::string("auto")) << '\n'
       << "los_power_fraction = " << fmt(p.los_power_fraction) << '\n'
       << "power_decay = " << fmt(p.power_decay) << '\n'
       << "shared_cluster_delay = " << b(p.shared_cluster_delay) << '\n'
       << "snr_db_list = " << join(cfg.snr_db_list, fmt) << '\n'
       << "m_list = " << join(cfg.m_list, u) << '\n'
       << "modes = " << join(cfg.modes, [](Criterion c) { return std::string(to_string(c)); }) << '\n'
       << "n_trials = " << cfg.n_trials << '\n'
       << "master_seed = " << cfg.master_seed << '\n'
       << "noiseless_observations = " << b(cfg.noiseless_observations) << '\n'
       << "allocation = " << to_string(cfg.allocation) << '\n'
       << "include_oracle = " << b(cfg.include_oracle) << '\n'
       << "oracle_max_pairs = " << cfg.oracle_max_pairs << '\n'
       << "max_m = " << cfg.max_m << '\n';
    return os.str();
}

} // namespace hbf
