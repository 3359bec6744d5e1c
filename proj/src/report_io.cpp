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

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hbf
{

namespace
{
constexpr std::string_view kCsvHeader = "snr_db,method,M,mode,mean_rate_bps_hz,normalized_rate,n_trials,stderr";

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <class T>
T parse_field(std::string_view s, std::size_t lineno)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidInput("csv line " + std::to_string(lineno) + ": bad field '" + std::string(s) + "'");
    return v;
}
} // namespace

void write_csv(const SweepReport &report, std::ostream &os)
{
    os << kCsvHeader << '\n';
    for (const auto &r : report.rows)
        os << fmt(r.snr_db) << ',' << r.method << ',' << r.m << ',' << r.mode << ',' << fmt(r.mean_rate) << ','
           << fmt(r.normalized_rate) << ',' << r.n_trials << ',' << fmt(r.std_error) << '\n';
}

std::vector<SweepRow> parse_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw InvalidInput("csv: missing or unexpected header");
    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string_view> f;
        std::string_view s = line;
        for (auto pos = s.find(','); pos != std::string_view::npos; pos = s.find(','))
        {
            f.push_back(s.substr(0, pos));
            s.remove_prefix(pos + 1);
        }
        f.push_back(s);
        if (f.size() != 8)
            throw InvalidInput("csv line " + std::to_string(lineno) + ": expected 8 fields");
        SweepRow r;
        r.snr_db = parse_field<double>(f[0], lineno);
        r.method = std::string(f[1]);
        r.m = parse_field<std::size_t>(f[2], lineno);
        r.mode = std::string(f[3]);
        r.mean_rate = parse_field<double>(f[4], lineno);
        r.normalized_rate = parse_field<double>(f[5], lineno);
        r.n_trials = parse_field<std::size_t>(f[6], lineno);
        r.std_error = parse_field<double>(f[7], lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string to_json(const SweepReport &report)
{
    using nlohmann::ordered_json;
    const auto &c = report.config;
    const auto &p = c.profile;

    ordered_json modes = ordered_json::array();
    for (Criterion m : c.modes)
        modes.push_back(std::string(to_string(m)));

    ordered_json cfg = {
        {"n_tx", c.n_tx},
        {"n_rx", c.n_rx},
        {"n_rf", c.n_rf},
        {"n_streams", c.n_streams},
        {"n_subcarriers", c.n_subcarriers},
        {"codebook_tx", c.n_beams_tx()},
        {"codebook_rx", c.n_beams_rx()},
        {"n_clusters", p.n_clusters},
        {"rays_per_cluster", p.rays_per_cluster},
        {"aod_spread_deg", p.aod_spread_deg},
        {"aoa_spread_deg", p.aoa_spread_deg},
        {"ray_offsets", p.ray_offsets.empty() ? default_ray_offsets(p.rays_per_cluster) : p.ray_offsets},
        {"delay_max", p.delay_max ? *p.delay_max : static_cast<double>(c.n_subcarriers) / 8.0},
        {"los_power_fraction", p.los_power_fraction},
        {"power_decay", p.power_decay},
        {"shared_cluster_delay", p.shared_cluster_delay},
        {"snr_db_list", c.snr_db_list},
        {"m_list", c.m_list},
        {"modes", modes},
        {"n_trials", c.n_trials},
        {"noiseless_observations", c.noiseless_observations},
        {"allocation", std::string(to_string(c.allocation))},
        {"oracle", c.oracle_enabled()},
        {"max_m", c.max_m},
    };

    ordered_json rows = ordered_json::array();
    for (const auto &r : report.rows)
        rows.push_back({{"snr_db", r.snr_db},
                        {"method", r.method},
                        {"M", r.m},
                        {"mode", r.mode},
                        {"mean_rate_bps_hz", r.mean_rate},
                        {"normalized_rate", r.normalized_rate},
                        {"n_trials", r.n_trials},
                        {"stderr", r.std_error}});

    ordered_json doc = {{"master_seed", c.master_seed}, {"config", cfg}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

void emit_csv(const SweepReport &report, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    write_csv(report, out);
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

void emit_json(const SweepReport &report, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out << to_json(report);
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

} // namespace hbf
