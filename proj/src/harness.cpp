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

#include "hbf/harness.hpp"
#include "hbf/beam_training.hpp"
#include "hbf/error.hpp"
#include "hbf/sounding.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace hbf
{

namespace
{
constexpr double kNoiseVar = 1.0;

// Stream tags for derive_seed.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kSoundingStream = 2;

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Codebook make_codebook(std::size_t n_antennas, std::size_t n_beams)
{
    return n_beams == n_antennas ? orthogonal_codebook(n_antennas) : sine_grid_codebook(n_antennas, n_beams);
}
} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
    return splitmix64(base ^ splitmix64(stream + 0x5851f42d4c957f2dull));
}

bool ExperimentConfig::oracle_enabled() const
{
    if (!include_oracle)
        return false;
    const double pairs = static_cast<double>(binomial(n_beams_tx(), n_rf)) *
                         static_cast<double>(binomial(n_beams_rx(), n_rf));
    return pairs <= static_cast<double>(oracle_max_pairs) && pairs <= kOracleMaxEvaluations;
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw InvalidInput("config: " + msg); };
    if (n_tx < 1 || n_rx < 1)
        fail("n_tx and n_rx must be >= 1");
    if (n_subcarriers < 1)
        fail("n_subcarriers must be >= 1");
    if (n_trials < 1)
        fail("n_trials must be >= 1");
    if (n_streams < 1 || n_streams > n_rf)
        fail("need 1 <= n_streams <= n_rf");
    if (n_streams > std::min(n_tx, n_rx))
        fail("n_streams exceeds min(n_tx, n_rx)");
    if (n_beams_tx() < 2 || n_beams_tx() % 2 != 0 || n_beams_rx() < 2 || n_beams_rx() % 2 != 0)
        fail("codebook sizes must be even and >= 2");
    if (snr_db_list.empty())
        fail("snr_db_list is empty");
    for (double s : snr_db_list)
        if (!std::isfinite(s))
            fail("snr_db_list has a non-finite entry");
    if (m_list.empty())
        fail("m_list is empty");
    if (modes.empty())
        fail("modes is empty");
    for (std::size_t m : m_list)
    {
        if (m < n_rf)
            fail("every M must be >= n_rf");
        if (m > max_m)
            fail("M = " + std::to_string(m) + " exceeds max_m = " + std::to_string(max_m));
        if (m > std::min(n_beams_tx(), n_beams_rx()))
            fail("M exceeds the codebook size");
    }
    profile.validate();
}

std::vector<MethodSpec> method_list(const ExperimentConfig &cfg)
{
    std::vector<MethodSpec> out;
    out.push_back({MethodKind::FullyDigital, "fully_digital", 0, "none"});
    if (cfg.oracle_enabled())
        out.push_back({MethodKind::Oracle, "oracle", 0, "eigen"});
    out.push_back({MethodKind::PowerOnly, "power_only", cfg.n_rf, "power"});
    for (std::size_t m : cfg.m_list)
        for (Criterion c : cfg.modes)
            out.push_back({MethodKind::Algorithm1, "algorithm1", m, std::string(to_string(c)), c});
    return out;
}

TrialResult run_trial(const ExperimentConfig &cfg, std::size_t trial)
{
    const Codebook f_cb = make_codebook(cfg.n_tx, cfg.n_beams_tx());
    const Codebook w_cb = make_codebook(cfg.n_rx, cfg.n_beams_rx());
    const auto methods = method_list(cfg);

    const std::uint64_t trial_seed = derive_seed(cfg.master_seed, trial);
    const auto ch = generate_cluster_channel(cfg.profile, {cfg.n_tx, cfg.n_rx, cfg.n_subcarriers},
                                             derive_seed(trial_seed, kChannelStream));
    const auto h = materialize_all(ch);
    const auto coupling = coupling_tensor(h, f_cb, w_cb);

    std::vector<std::vector<double>> h_sigmas;
    h_sigmas.reserve(h.size());
    for (const auto &hk : h)
        h_sigmas.push_back(singular_values(hk));

    std::vector<double> gammas;
    for (double s : cfg.snr_db_list)
        gammas.push_back(db_to_linear(s));

    std::vector<BeamformerSet> oracle;
    if (cfg.oracle_enabled())
        oracle = exhaustive_oracle(h, f_cb, w_cb, cfg.n_rf, cfg.n_streams, gammas);

    TrialResult res;
    res.rates.assign(gammas.size(), std::vector<double>(methods.size(), 0.0));
    res.f_beams.assign(gammas.size(), std::vector<std::vector<std::size_t>>(methods.size()));
    res.w_beams = res.f_beams;

    const std::uint64_t sounding_seed = derive_seed(trial_seed, kSoundingStream);
    for (std::size_t q = 0; q < gammas.size(); ++q)
    {
        const double gamma = gammas[q];
        const double rho = gamma * static_cast<double>(cfg.n_streams) * kNoiseVar;
        const auto t = observe(coupling, rho, cfg.noiseless_observations ? 0.0 : kNoiseVar, sounding_seed);

        for (std::size_t j = 0; j < methods.size(); ++j)
        {
            const auto &spec = methods[j];
            if (spec.kind == MethodKind::FullyDigital)
            {
                double sum = 0.0;
                for (const auto &sv : h_sigmas)
                    sum += fully_digital_throughput(sv, gamma, cfg.n_streams, cfg.allocation);
                res.rates[q][j] = sum / static_cast<double>(h.size());
                continue;
            }

            BeamformerSet bf;
            if (spec.kind == MethodKind::Oracle)
                bf = oracle[q];
            else
            {
                Algorithm1Params p;
                p.n_rf = cfg.n_rf;
                p.n_streams = cfg.n_streams;
                p.gamma = gamma;
                p.m = spec.kind == MethodKind::PowerOnly ? cfg.n_rf : spec.m;
                p.mode = spec.criterion;
                bf = run_algorithm1(t, f_cb, w_cb, p);
            }
            res.rates[q][j] = average_throughput(h, bf, rho, kNoiseVar, cfg.allocation);
            res.f_beams[q][j] = bf.f_beams;
            res.w_beams[q][j] = bf.w_beams;
        }
    }
    return res;
}

SweepReport run_sweep(const ExperimentConfig &cfg, std::size_t threads)
{
    cfg.validate();
    const auto methods = method_list(cfg);

    std::vector<TrialResult> results(cfg.n_trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (std::size_t i = next++; i < cfg.n_trials; i = next++)
        {
            try
            {
                results[i] = run_trial(cfg, i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = cfg.n_trials;
            }
        }
    };

    const std::size_t n_workers = std::max<std::size_t>(1, std::min(threads, cfg.n_trials));
    if (n_workers == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_workers; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepReport report;
    report.config = cfg;
    const double n = static_cast<double>(cfg.n_trials);
    for (std::size_t q = 0; q < cfg.snr_db_list.size(); ++q)
    {
        std::vector<double> means(methods.size());
        std::vector<double> errors(methods.size());
        for (std::size_t j = 0; j < methods.size(); ++j)
        {
            double sum = 0.0;
            for (const auto &r : results)
                sum += r.rates[q][j];
            const double mean = sum / n;
            double ss = 0.0;
            for (const auto &r : results)
                ss += (r.rates[q][j] - mean) * (r.rates[q][j] - mean);
            means[j] = mean;
            errors[j] = cfg.n_trials > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        }
        const double reference = means.front(); // fully digital
        for (std::size_t j = 0; j < methods.size(); ++j)
        {
            SweepRow row;
            row.snr_db = cfg.snr_db_list[q];
            row.method = methods[j].label;
            row.m = methods[j].m;
            row.mode = methods[j].mode;
            row.mean_rate = means[j];
            row.normalized_rate = reference > 0.0 ? means[j] / reference : 0.0;
            row.n_trials = cfg.n_trials;
            row.std_error = errors[j];
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

SchematicResult run_schematic_example()
{
    constexpr std::size_t n_antennas = 8;
    constexpr std::size_t n_rf = 2;
    constexpr double snr_db = 5.0;

    const auto ch = two_path_scenario(n_antennas, n_antennas);
    const auto cb = orthogonal_codebook(n_antennas);
    const auto h = materialize_all(ch);
    const double gamma = db_to_linear(snr_db);
    const double rho = gamma * static_cast<double>(n_rf) * kNoiseVar;
    const auto t = sound_all_pairs(ch, cb, cb, rho, 0.0, 0);

    Algorithm1Params p;
    p.n_rf = n_rf;
    p.n_streams = n_rf;
    p.gamma = gamma;
    p.mode = Criterion::Eigen;

    p.m = n_rf;
    auto multiplexing = run_algorithm1(t, cb, cb, p);
    p.m = 4;
    auto dominant = run_algorithm1(t, cb, cb, p);

    SchematicResult out{average_throughput(h, multiplexing, rho, kNoiseVar),
                        average_throughput(h, dominant, rho, kNoiseVar), std::move(multiplexing),
                        std::move(dominant)};
    return out;
}

OracleAudit run_oracle_audit(std::size_t trials, std::uint64_t seed, double snr_db)
{
    constexpr std::size_t n_antennas = 8;
    constexpr std::size_t n_rf = 2;
    constexpr double slack = 1e-9;

    ClusterProfile profile;
    const ChannelDims dims{n_antennas, n_antennas, 16};
    const auto cb = orthogonal_codebook(n_antennas);
    const double gamma = db_to_linear(snr_db);
    const double rho = gamma * static_cast<double>(n_rf) * kNoiseVar;

    OracleAudit audit;
    for (std::size_t i = 0; i < trials; ++i)
    {
        const auto ch = generate_cluster_channel(profile, dims, derive_seed(seed, i));
        const auto h = materialize_all(ch);
        const auto t = observe(coupling_tensor(h, cb, cb), rho, 0.0, 0);
        const double gammas[] = {gamma};
        const auto oracle = exhaustive_oracle(h, cb, cb, n_rf, n_rf, gammas).front();

        auto run = [&](std::size_t m) {
            return run_algorithm1(t, cb, cb, Algorithm1Params{m, n_rf, n_rf, Criterion::Eigen, gamma});
        };
        const auto full = run(n_antennas);
        const auto m3 = run(3);
        const auto m2 = run(2);

        const double r_oracle = average_throughput(h, oracle, rho, kNoiseVar);
        const double r_full = average_throughput(h, full, rho, kNoiseVar);
        const double r_m3 = average_throughput(h, m3, rho, kNoiseVar);
        const double r_m2 = average_throughput(h, m2, rho, kNoiseVar);
        double r_digital = 0.0;
        for (const auto &hk : h)
            r_digital += fully_digital_throughput(hk, gamma, n_rf);
        r_digital /= static_cast<double>(h.size());

        ++audit.trials;
        if (full.f_beams == oracle.f_beams && full.w_beams == oracle.w_beams)
            ++audit.same_selection;
        audit.max_rate_gap = std::max(audit.max_rate_gap, std::abs(r_oracle - r_full));
        if (r_digital + slack < r_oracle || r_oracle + slack < r_m3 || r_m3 + slack < r_m2)
            ++audit.ladder_violations;
    }
    return audit;
}

} // namespace hbf
