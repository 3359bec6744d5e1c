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

#ifndef HBF_HARNESS_HPP
#define HBF_HARNESS_HPP

#include "hbf/array_geometry.hpp"
#include "hbf/channel.hpp"
#include "hbf/precoding.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hbf
{

// One Monte-Carlo experiment. SNR values are gamma = rho / (N_S sigma^2) in dB with
// sigma^2 = 1, so rho = gamma * N_S.
struct ExperimentConfig
{
    std::size_t n_tx = 16;
    std::size_t n_rx = 16;
    std::size_t n_rf = 2;
    std::size_t n_streams = 2;
    std::size_t n_subcarriers = 64;
    std::size_t codebook_tx = 0; // 0: same as n_tx (orthogonal codebook)
    std::size_t codebook_rx = 0;
    ClusterProfile profile;
    std::vector<double> snr_db_list = {-10.0, 0.0, 10.0};
    std::vector<std::size_t> m_list = {2, 3};
    std::vector<Criterion> modes = {Criterion::Eigen, Criterion::Frobenius};
    std::size_t n_trials = 100;
    std::uint64_t master_seed = 1;
    bool noiseless_observations = false;
    Allocation allocation = Allocation::Equal;
    bool include_oracle = true;
    std::size_t oracle_max_pairs = 20000; // skip the oracle above C(N_F,N_RF) * C(N_W,N_RF)
    std::size_t max_m = 8;

    std::size_t n_beams_tx() const { return codebook_tx == 0 ? n_tx : codebook_tx; }
    std::size_t n_beams_rx() const { return codebook_rx == 0 ? n_rx : codebook_rx; }
    bool oracle_enabled() const;

    void validate() const; // throws InvalidInput
};

// "desk" (the defaults above) or "paper-fig3" (32x32, K = 512, C = 5, R = 8).
ExperimentConfig preset(std::string_view name);

// Flat "key = value" text, '#' starts a comment, lists are comma-separated.
// A leading "preset = <name>" line selects the base configuration.
ExperimentConfig parse_config(std::istream &is, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path &path);
std::string format_config(const ExperimentConfig &cfg);

enum class MethodKind
{
    FullyDigital,
    Oracle,
    PowerOnly,
    Algorithm1
};

struct MethodSpec
{
    MethodKind kind;
    std::string label;
    std::size_t m;    // 0 where not applicable
    std::string mode; // "eigen", "fro", "power" or "none"
    Criterion criterion = Criterion::Eigen;
};

// Scored methods in report order.
std::vector<MethodSpec> method_list(const ExperimentConfig &cfg);

// Per-trial output: rates[snr][method] in bit/s/Hz and the analog beams chosen.
struct TrialResult
{
    std::vector<std::vector<double>> rates;
    std::vector<std::vector<std::vector<std::size_t>>> f_beams;
    std::vector<std::vector<std::vector<std::size_t>>> w_beams;
};

TrialResult run_trial(const ExperimentConfig &cfg, std::size_t trial);

struct SweepRow
{
    double snr_db = 0.0;
    std::string method;
    std::size_t m = 0;
    std::string mode;
    double mean_rate = 0.0;
    double normalized_rate = 0.0;
    std::size_t n_trials = 0;
    double std_error = 0.0;

    friend bool operator==(const SweepRow &, const SweepRow &) = default;
};

struct SweepReport
{
    ExperimentConfig config;
    std::vector<SweepRow> rows;
};

// Trials are spread over `threads` workers; results are reduced in trial order, so
// the report does not depend on the thread count.
SweepReport run_sweep(const ExperimentConfig &cfg, std::size_t threads = 1);

struct SchematicResult
{
    double rate_multiplexing; // M = N_RF, pairs chosen by received power only
    double rate_dominant;     // M = 4, eigen criterion
    BeamformerSet multiplexing;
    BeamformerSet dominant;
};

// Two-path channel, 8-beam orthogonal codebooks, SNR 5 dB, N_RF = N_S = 2, noiseless.
SchematicResult run_schematic_example();

struct OracleAudit
{
    std::size_t trials = 0;
    std::size_t same_selection = 0;   // run_algorithm1 with M = N_F picks the oracle's pair
    double max_rate_gap = 0.0;        // |oracle - run_algorithm1 (M = N_F)|
    std::size_t ladder_violations = 0; // fully digital >= oracle >= M=3 >= M=2 broken
};

// 8-antenna orthogonal codebooks, N_RF = N_S = 2, K = 16, noiseless observations.
OracleAudit run_oracle_audit(std::size_t trials, std::uint64_t seed, double snr_db = 0.0);

// Deterministic 64-bit seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Report output. CSV columns: snr_db,method,M,mode,mean_rate_bps_hz,normalized_rate,n_trials,stderr
void write_csv(const SweepReport &report, std::ostream &os);
std::vector<SweepRow> parse_csv(std::istream &is);
std::string to_json(const SweepReport &report);
void emit_csv(const SweepReport &report, const std::filesystem::path &path);
void emit_json(const SweepReport &report, const std::filesystem::path &path);

} // namespace hbf

#endif
