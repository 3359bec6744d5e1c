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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion fails. Tolerances are fixed below.

#include "hbf/beam_training.hpp"
#include "hbf/error.hpp"
#include "hbf/harness.hpp"
#include "hbf/sounding.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#ifndef HBF_CLI_PATH
#define HBF_CLI_PATH "hbf"
#endif

namespace
{

// Criterion 1
constexpr double kSchematicMultiplexing = 2.5;
constexpr double kSchematicDominant = 3.0;
constexpr double kSchematicTol = 0.3;
constexpr double kSchematicBudgetS = 1.0;
// Criterion 2
constexpr std::size_t kConstraintInstances = 1000;
constexpr double kConstraintTol = 1e-9;
constexpr double kConstraintBudgetS = 30.0;
// Criterion 3
constexpr std::size_t kOracleTrials = 100;
constexpr double kOracleRateTol = 1e-9;
constexpr double kOracleBudgetS = 120.0;
// Criterion 4
constexpr std::size_t kLadderTrials = 100;
constexpr double kLadderSlack = 1e-9;
// Criterion 5
constexpr std::size_t kAgreementTrials = 100;
constexpr double kAgreementRateTol = 0.02;
constexpr double kAgreementSelectionMin = 0.90;
// Criterion 6
constexpr std::size_t kLowSnrInstances = 200;
constexpr double kLowSnrGamma = 1e-6;
constexpr double kLowSnrGap = 1e-3;
// Criterion 7
constexpr std::size_t kReferenceTrials = 50;
constexpr std::array<double, 3> kReferenceSnrDb = {-10.0, 0.0, 10.0};
constexpr std::array<double, 3> kReferenceRates = {0.41, 2.17, 5.79};
constexpr double kReferenceRelTol = 0.30;
constexpr double kReferenceBudgetS = 300.0;
// Criterion 8
constexpr std::size_t kNoiseEntriesMin = 100000;
constexpr double kNoiseRelTol = 0.05;

struct Outcome
{
    bool pass;
    std::string detail;
};

double db(double x)
{
    return std::pow(10.0, x / 10.0);
}

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

Outcome schematic()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = hbf::run_schematic_example();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = std::abs(r.rate_multiplexing - kSchematicMultiplexing) <= kSchematicTol &&
                    std::abs(r.rate_dominant - kSchematicDominant) <= kSchematicTol &&
                    r.rate_dominant > r.rate_multiplexing && secs < kSchematicBudgetS;
    return {ok, fmt("rate_multiplexing=%.4f (target 2.5+-0.3) rate_dominant=%.4f (target 3.0+-0.3) "
                    "dominant>multiplexing=%s time=%.3fs",
                    r.rate_multiplexing, r.rate_dominant, r.rate_dominant > r.rate_multiplexing ? "yes" : "no", secs)};
}

Outcome constraint_suite()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20261016);
    hbf::ClusterProfile prof;
    const std::size_t sizes[] = {4, 8, 16, 32};
    double worst = 0.0;
    std::size_t sets = 0, singular = 0;
    for (std::size_t i = 0; i < kConstraintInstances; ++i)
    {
        const std::size_t n_t = sizes[rng() % 4], n_r = sizes[rng() % 4];
        const std::size_t n_rf = 1 + rng() % std::min<std::size_t>(4, std::min(n_t, n_r));
        const std::size_t n_s = 1 + rng() % n_rf;
        const std::size_t m = n_rf + rng() % (std::min<std::size_t>(8, std::min(n_t, n_r)) - n_rf + 1);
        const auto f_cb = rng() % 2 ? hbf::orthogonal_codebook(n_t) : hbf::sine_grid_codebook(n_t, 2 * n_t);
        const auto w_cb = hbf::orthogonal_codebook(n_r);
        const auto ch = hbf::generate_cluster_channel(prof, {n_t, n_r, 4}, rng());
        const double gamma = db(-10.0 + static_cast<double>(rng() % 31));
        const double noise = rng() % 2 ? 1.0 : 0.0;
        const auto t = hbf::sound_all_pairs(ch, f_cb, w_cb, gamma * static_cast<double>(n_s), noise, rng());
        const auto mode = rng() % 2 ? hbf::Criterion::Eigen : hbf::Criterion::Frobenius;
        std::vector<hbf::BeamformerSet> produced;
        try
        {
            produced.push_back(hbf::run_algorithm1(t, f_cb, w_cb, {m, n_rf, n_s, mode, gamma}));
        }
        catch (const hbf::NearSingular &)
        {
            ++singular; // collinear oversampled beams; no set produced
            continue;
        }
        if (n_t <= 8 && n_r <= 8)
            produced.push_back(hbf::exhaustive_oracle(ch, f_cb, w_cb, n_rf, n_s, gamma));
        for (const auto &bf : produced)
        {
            ++sets;
            for (std::size_t k = 0; k < bf.n_subcarriers(); ++k)
            {
                const auto r = hbf::constraint_residuals(bf, k);
                worst = std::max({worst, r.transmit_power, r.combiner_noise});
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = worst < kConstraintTol && sets >= kConstraintInstances && secs < kConstraintBudgetS;
    return {ok, fmt("%zu beamformer sets from %zu instances (%zu near-singular), max residual %.2e (limit 1e-9) "
                    "time=%.1fs",
                    sets, kConstraintInstances, singular, worst, secs)};
}

Outcome oracle_equivalence()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto cb = hbf::orthogonal_codebook(8);
    hbf::ClusterProfile prof;
    const double gamma = 1.0, rho = 2.0;
    std::size_t match = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < kOracleTrials; ++i)
    {
        const auto ch = hbf::generate_cluster_channel(prof, {8, 8, 16}, hbf::derive_seed(3, i));
        const auto h = hbf::materialize_all(ch);
        const auto t = hbf::sound_all_pairs(ch, cb, cb, rho, 0.0, 0);
        const auto a1 = hbf::run_algorithm1(t, cb, cb, {8, 2, 2, hbf::Criterion::Eigen, gamma});
        const auto orc = hbf::exhaustive_oracle(ch, cb, cb, 2, 2, gamma);
        const double gap = std::abs(hbf::average_throughput(h, a1, rho, 1.0) - hbf::average_throughput(h, orc, rho, 1.0));
        worst = std::max(worst, gap);
        if (a1.f_beams == orc.f_beams && a1.w_beams == orc.w_beams && gap < kOracleRateTol)
            ++match;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {match == kOracleTrials && secs < kOracleBudgetS,
            fmt("%zu/%zu trials identical, max rate gap %.2e time=%.1fs", match, kOracleTrials, worst, secs)};
}

hbf::ExperimentConfig desk_config()
{
    auto cfg = hbf::preset("desk");
    cfg.include_oracle = false;
    return cfg;
}

Outcome dominance_ladder()
{
    auto cfg = desk_config();
    cfg.noiseless_observations = true;
    cfg.include_oracle = true;
    cfg.modes = {hbf::Criterion::Eigen};
    cfg.m_list = {2, 3};
    cfg.snr_db_list = {-10.0, 0.0, 10.0};
    cfg.validate();
    const auto methods = hbf::method_list(cfg);
    std::size_t i_fd = 0, i_or = 0, i_m3 = 0, i_m2 = 0;
    for (std::size_t j = 0; j < methods.size(); ++j)
    {
        if (methods[j].kind == hbf::MethodKind::FullyDigital)
            i_fd = j;
        else if (methods[j].kind == hbf::MethodKind::Oracle)
            i_or = j;
        else if (methods[j].kind == hbf::MethodKind::Algorithm1)
            (methods[j].m == 3 ? i_m3 : i_m2) = j;
    }
    std::size_t violations = 0, checks = 0;
    for (std::size_t trial = 0; trial < kLadderTrials; ++trial)
    {
        const auto r = hbf::run_trial(cfg, trial);
        for (const auto &rates : r.rates)
        {
            ++checks;
            if (rates[i_fd] + kLadderSlack < rates[i_or] || rates[i_or] + kLadderSlack < rates[i_m3] ||
                rates[i_m3] + kLadderSlack < rates[i_m2])
                ++violations;
        }
    }
    return {violations == 0, fmt("%zu trials x %zu SNR points, %zu ordering violations", kLadderTrials,
                                 cfg.snr_db_list.size(), violations)};
}

Outcome criterion_agreement()
{
    auto cfg = desk_config();
    cfg.snr_db_list = {0.0};
    cfg.m_list = {3};
    cfg.modes = {hbf::Criterion::Eigen, hbf::Criterion::Frobenius};
    cfg.validate();
    const auto methods = hbf::method_list(cfg);
    std::size_t i_e = 0, i_f = 0;
    for (std::size_t j = 0; j < methods.size(); ++j)
        if (methods[j].kind == hbf::MethodKind::Algorithm1)
            (methods[j].criterion == hbf::Criterion::Eigen ? i_e : i_f) = j;
    double sum_e = 0.0, sum_f = 0.0;
    std::size_t same = 0;
    for (std::size_t trial = 0; trial < kAgreementTrials; ++trial)
    {
        const auto r = hbf::run_trial(cfg, trial);
        sum_e += r.rates[0][i_e];
        sum_f += r.rates[0][i_f];
        if (r.f_beams[0][i_e] == r.f_beams[0][i_f] && r.w_beams[0][i_e] == r.w_beams[0][i_f])
            ++same;
    }
    const double mean_e = sum_e / kAgreementTrials, mean_f = sum_f / kAgreementTrials;
    const double rel = std::abs(mean_e - mean_f) / mean_e;
    const double frac = static_cast<double>(same) / kAgreementTrials;
    return {rel < kAgreementRateTol && frac >= kAgreementSelectionMin,
            fmt("eigen mean %.4f, fro mean %.4f, rel diff %.3f%% (limit 2%%), same selection %zu/%zu (min 90%%)",
                mean_e, mean_f, 100.0 * rel, same, kAgreementTrials)};
}

Outcome low_snr_limit()
{
    const auto cb = hbf::orthogonal_codebook(8);
    hbf::ClusterProfile prof;
    std::mt19937_64 rng(606);
    std::size_t accepted = 0, agree = 0, drawn = 0;
    while (accepted < kLowSnrInstances && drawn < 100 * kLowSnrInstances)
    {
        ++drawn;
        const auto ch = hbf::generate_cluster_channel(prof, {8, 8, 8}, rng());
        const auto t = hbf::sound_all_pairs(ch, cb, cb, 2.0, 1.0, rng());
        const auto cs = hbf::build_candidate_sets(hbf::select_initial_pairs(t, 4), 2);
        std::vector<double> values;
        for (const auto &fc : cs.f_combos)
            for (const auto &wc : cs.w_combos)
                values.push_back(hbf::criterion_value(hbf::effective_channel_estimate(t, cb, cb, fc, wc),
                                                      hbf::Criterion::Eigen, kLowSnrGamma, 2));
        std::sort(values.rbegin(), values.rend());
        if (!((values[0] - values[1]) / values[0] > kLowSnrGap))
            continue;
        ++accepted;
        const auto e = hbf::select_best_pair(cs, t, cb, cb, hbf::Criterion::Eigen, kLowSnrGamma, 2);
        const auto f = hbf::select_best_pair(cs, t, cb, cb, hbf::Criterion::Frobenius, kLowSnrGamma, 2);
        if (e.estimate.index == f.estimate.index)
            ++agree;
    }
    return {accepted == kLowSnrInstances && agree == accepted,
            fmt("%zu/%zu filtered instances agree (%zu drawn)", agree, accepted, drawn)};
}

Outcome reference_magnitudes()
{
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = hbf::preset("paper-fig3");
    cfg.n_trials = kReferenceTrials;
    cfg.snr_db_list.assign(kReferenceSnrDb.begin(), kReferenceSnrDb.end());
    cfg.allocation = hbf::Allocation::Equal;
    const auto report = hbf::run_sweep(cfg);
    bool ok = true;
    std::string detail;
    for (std::size_t q = 0; q < kReferenceSnrDb.size(); ++q)
    {
        double mean = -1.0;
        for (const auto &row : report.rows)
            if (row.method == "fully_digital" && row.snr_db == kReferenceSnrDb[q])
                mean = row.mean_rate;
        const bool within = std::abs(mean - kReferenceRates[q]) <= kReferenceRelTol * kReferenceRates[q];
        ok = ok && within;
        detail += fmt("%+.0f dB: %.3f (target %.2f) ", kReferenceSnrDb[q], mean, kReferenceRates[q]);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < kReferenceBudgetS;
    return {ok, detail + fmt("tol +-30%% time=%.1fs", secs)};
}

Outcome noise_statistics()
{
    hbf::ChannelRealization zero;
    zero.n_tx = zero.n_rx = 16;
    zero.n_subcarriers = 512;
    const auto cb = hbf::orthogonal_codebook(16);
    const auto t = hbf::sound_all_pairs(zero, cb, cb, 1.0, 1.0, 8);
    double sum = 0.0;
    for (const auto &v : t.y)
        sum += std::norm(v);
    const double mean = sum / static_cast<double>(t.y.size());
    return {t.y.size() >= kNoiseEntriesMin && std::abs(mean - 1.0) < kNoiseRelTol,
            fmt("%zu entries, mean |y|^2 = %.4f (limit 1 +- 5%%)", t.y.size(), mean)};
}

std::string run_capture(const std::string &cmd, int &status)
{
    std::string out;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p)
    {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), p)) > 0)
        out.append(buf, n);
    status = pclose(p);
    return out;
}

Outcome determinism()
{
    const std::string base = std::string("\"") + HBF_CLI_PATH + "\" sweep --seed 42";
    int s1 = 0, s2 = 0, s3 = 0;
    const auto a = run_capture(base, s1);
    const auto b = run_capture(base, s2);
    const auto c = run_capture(base + " --threads 4", s3);
    const bool ok = s1 == 0 && s2 == 0 && s3 == 0 && !a.empty() && a == b && a == c;
    return {ok, fmt("%zu bytes; repeat run %s; 4 threads %s", a.size(), a == b ? "identical" : "DIFFERENT",
                    a == c ? "identical" : "DIFFERENT")};
}

} // namespace

int main()
{
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"schematic example", schematic},
        {"constraint suite", constraint_suite},
        {"oracle equivalence", oracle_equivalence},
        {"dominance ladder", dominance_ladder},
        {"criterion agreement", criterion_agreement},
        {"low-SNR argmax limit", low_snr_limit},
        {"fully digital reference magnitudes", reference_magnitudes},
        {"noise statistics", noise_statistics},
        {"determinism", determinism},
    };
    int failures = 0;
    int id = 0;
    for (const auto &[name, run] : criteria)
    {
        ++id;
        Outcome o;
        try
        {
            o = run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s: %s | %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", id - failures, id);
    return failures == 0 ? 0 : 1;
}
