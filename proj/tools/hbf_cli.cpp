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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace
{

struct SweepOptions
{
    std::string config_path;
    std::string preset_name;
    std::string out_path;
    std::string json_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::vector<double> snr;
    std::vector<std::size_t> m;
    std::vector<std::string> modes;
    std::string allocation;
    bool noiseless = false;
    std::size_t threads = 1;
};

int run_sweep_command(const SweepOptions &o)
{
    hbf::ExperimentConfig cfg = o.preset_name.empty() ? hbf::ExperimentConfig{} : hbf::preset(o.preset_name);
    if (!o.config_path.empty())
    {
        std::ifstream in(o.config_path);
        if (!in)
            throw hbf::IoError("cannot open config file '" + o.config_path + "'");
        cfg = hbf::parse_config(in, cfg);
    }
    if (o.seed)
        cfg.master_seed = *o.seed;
    if (o.trials)
        cfg.n_trials = *o.trials;
    if (!o.snr.empty())
        cfg.snr_db_list = o.snr;
    if (!o.m.empty())
        cfg.m_list = o.m;
    if (!o.modes.empty())
    {
        cfg.modes.clear();
        for (const auto &s : o.modes)
            cfg.modes.push_back(hbf::parse_criterion(s));
    }
    if (!o.allocation.empty())
        cfg.allocation = hbf::parse_allocation(o.allocation);
    if (o.noiseless)
        cfg.noiseless_observations = true;

    const auto report = hbf::run_sweep(cfg, o.threads);
    if (o.out_path.empty())
        hbf::write_csv(report, std::cout);
    else
        hbf::emit_csv(report, o.out_path);
    if (!o.json_path.empty())
        hbf::emit_json(report, o.json_path);
    return 0;
}

int run_schematic_command()
{
    const auto r = hbf::run_schematic_example();
    auto beams = [](const std::vector<std::size_t> &b) {
        std::string s;
        for (auto i : b)
            s += (s.empty() ? "" : ",") + std::to_string(i);
        return s;
    };
    std::printf("rate_multiplexing %.4f bit/s/Hz  (tx beams %s, rx beams %s)\n", r.rate_multiplexing,
                beams(r.multiplexing.f_beams).c_str(), beams(r.multiplexing.w_beams).c_str());
    std::printf("rate_dominant     %.4f bit/s/Hz  (tx beams %s, rx beams %s)\n", r.rate_dominant,
                beams(r.dominant.f_beams).c_str(), beams(r.dominant.w_beams).c_str());
    return 0;
}

int run_oracle_check_command(std::size_t trials, std::uint64_t seed)
{
    const auto a = hbf::run_oracle_audit(trials, seed);
    std::printf("trials %zu, same selection %zu, max rate gap %.3e, ladder violations %zu\n", a.trials,
                a.same_selection, a.max_rate_gap, a.ladder_violations);
    const bool ok = a.same_selection == a.trials && a.max_rate_gap < 1e-9 && a.ladder_violations == 0;
    std::puts(ok ? "ok" : "FAILED");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid beamforming from implicit channel state information"};
    app.require_subcommand(1);

    SweepOptions so;
    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo throughput sweep");
    sweep->add_option("--config", so.config_path, "Key-value configuration file");
    sweep->add_option("--preset", so.preset_name, "Base configuration (desk, paper-fig3)");
    sweep->add_option("--out", so.out_path, "CSV output file (stdout if omitted)");
    sweep->add_option("--json", so.json_path, "JSON output file");
    sweep->add_option("--seed", so.seed, "Master seed");
    sweep->add_option("--trials", so.trials, "Number of trials");
    sweep->add_option("--snr", so.snr, "SNR list in dB")->delimiter(',');
    sweep->add_option("--M", so.m, "Retained beam pair counts")->delimiter(',');
    sweep->add_option("--mode", so.modes, "Selection criteria: eigen, fro")->delimiter(',');
    sweep->add_option("--allocation", so.allocation, "Stream power allocation: equal, waterfill");
    sweep->add_flag("--noiseless", so.noiseless, "Noiseless beam sounding");
    sweep->add_option("--threads", so.threads, "Worker threads")->check(CLI::PositiveNumber);

    auto *schematic = app.add_subcommand("schematic", "Two-path example with M = 2 and M = 4");

    std::size_t audit_trials = 20;
    std::uint64_t audit_seed = 7;
    auto *oracle = app.add_subcommand("oracle-check", "Small-size comparison against exhaustive search");
    oracle->add_option("--trials", audit_trials, "Number of trials");
    oracle->add_option("--seed", audit_seed, "Seed");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sweep)
            return run_sweep_command(so);
        if (*schematic)
            return run_schematic_command();
        if (*oracle)
            return run_oracle_check_command(audit_trials, audit_seed);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
