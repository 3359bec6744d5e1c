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

#include "hbf/beam_training.hpp"
#include "hbf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbf
{

std::vector<BeamPair> select_initial_pairs(const ObservationTensor &t, std::size_t m)
{
    if (m < 1 || m > std::min(t.n_f, t.n_w))
        throw InvalidInput("select_initial_pairs: M must be in 1..min(N_F, N_W), got " + std::to_string(m));

    std::vector<double> power(t.n_w * t.n_f);
    for (std::size_t w = 0; w < t.n_w; ++w)
        for (std::size_t f = 0; f < t.n_f; ++f)
            power[w * t.n_f + f] = pair_power(t, w, f);

    std::vector<bool> used_f(t.n_f, false), used_w(t.n_w, false);
    std::vector<BeamPair> out;
    out.reserve(m);
    for (std::size_t it = 0; it < m; ++it)
    {
        double best = -1.0;
        BeamPair pick{0, 0};
        for (std::size_t w = 0; w < t.n_w; ++w)
        {
            if (used_w[w])
                continue;
            for (std::size_t f = 0; f < t.n_f; ++f)
            {
                if (used_f[f])
                    continue;
                if (power[w * t.n_f + f] > best)
                {
                    best = power[w * t.n_f + f];
                    pick = BeamPair{f, w};
                }
            }
        }
        used_f[pick.n_f] = true;
        used_w[pick.n_w] = true;
        out.push_back(pick);
    }
    return out;
}

CandidateSets build_candidate_sets(std::span<const BeamPair> pairs, std::size_t n_rf)
{
    if (n_rf < 1 || n_rf > pairs.size())
        throw InvalidInput("build_candidate_sets: need 1 <= N_RF <= M");

    std::vector<std::size_t> f_beams, w_beams;
    for (const auto &p : pairs)
    {
        f_beams.push_back(p.n_f);
        w_beams.push_back(p.n_w);
    }
    std::sort(f_beams.begin(), f_beams.end());
    std::sort(w_beams.begin(), w_beams.end());

    CandidateSets cs;
    cs.selected_pairs.assign(pairs.begin(), pairs.end());
    for (const auto &idx : combinations(pairs.size(), n_rf))
    {
        std::vector<std::size_t> fc, wc;
        for (std::size_t i : idx)
        {
            fc.push_back(f_beams[i]);
            wc.push_back(w_beams[i]);
        }
        cs.f_combos.push_back(std::move(fc));
        cs.w_combos.push_back(std::move(wc));
    }
    return cs;
}

namespace
{
CMatrix columns_of(const Codebook &cb, std::span<const std::size_t> idx)
{
    CMatrix m(cb.matrix.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
    {
        if (idx[j] >= cb.size())
            throw InvalidInput("beam index out of codebook range");
        m.col(static_cast<Eigen::Index>(j)) = cb.matrix.col(static_cast<Eigen::Index>(idx[j]));
    }
    return m;
}

CMatrix gram_inv_sqrt(const Codebook &cb, std::span<const std::size_t> idx)
{
    const CMatrix cols = columns_of(cb, idx);
    return hermitian_inv_sqrt(cols.adjoint() * cols);
}

EffectiveChannelEstimate estimate_with(const ObservationTensor &t, const CMatrix &f_white,
                                       const CMatrix &w_white, std::span<const std::size_t> f_combo,
                                       std::span<const std::size_t> w_combo)
{
    const double inv_amp = 1.0 / std::sqrt(t.rho);
    const auto rows = static_cast<Eigen::Index>(w_combo.size());
    const auto cols = static_cast<Eigen::Index>(f_combo.size());

    EffectiveChannelEstimate est;
    est.per_k.reserve(t.n_k);
    CMatrix y(rows, cols);
    for (std::size_t k = 0; k < t.n_k; ++k)
    {
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
                y(r, c) = t.at(w_combo[static_cast<std::size_t>(r)], f_combo[static_cast<std::size_t>(c)], k) * inv_amp;
        est.per_k.push_back(w_white * y * f_white);
    }
    return est;
}
} // namespace

EffectiveChannelEstimate effective_channel_estimate(const ObservationTensor &t, const Codebook &f_cb,
                                                    const Codebook &w_cb, std::span<const std::size_t> f_combo,
                                                    std::span<const std::size_t> w_combo)
{
    if (f_combo.empty() || w_combo.empty())
        throw InvalidInput("effective_channel_estimate: empty beam combination");
    if (f_cb.size() != t.n_f || w_cb.size() != t.n_w)
        throw InvalidInput("effective_channel_estimate: codebooks do not match the tensor");
    for (std::size_t f : f_combo)
        if (f >= t.n_f)
            throw InvalidInput("effective_channel_estimate: transmit beam index out of range");
    for (std::size_t w : w_combo)
        if (w >= t.n_w)
            throw InvalidInput("effective_channel_estimate: receive beam index out of range");
    return estimate_with(t, gram_inv_sqrt(f_cb, f_combo), gram_inv_sqrt(w_cb, w_combo), f_combo, w_combo);
}

double criterion_value(const EffectiveChannelEstimate &est, Criterion mode, double gamma, std::size_t n_streams)
{
    double total = 0.0;
    if (mode == Criterion::Frobenius)
    {
        for (const auto &he : est.per_k)
            total += fro_norm_sq(he);
        return total;
    }

    if (!(gamma > 0.0))
        throw InvalidInput("criterion_value: gamma must be > 0 for the eigen criterion");
    for (const auto &he : est.per_k)
        total += equal_power_throughput(singular_values(he), gamma, n_streams);
    return total;
}

PairSelection select_best_pair(const CandidateSets &cs, const ObservationTensor &t, const Codebook &f_cb,
                               const Codebook &w_cb, Criterion mode, double gamma, std::size_t n_streams)
{
    if (cs.f_combos.empty() || cs.w_combos.empty())
        throw InvalidInput("select_best_pair: empty candidate sets");
    if (f_cb.size() != t.n_f || w_cb.size() != t.n_w)
        throw InvalidInput("select_best_pair: codebooks do not match the tensor");

    std::vector<CMatrix> f_white, w_white;
    for (const auto &c : cs.f_combos)
        f_white.push_back(gram_inv_sqrt(f_cb, c));
    for (const auto &c : cs.w_combos)
        w_white.push_back(gram_inv_sqrt(w_cb, c));

    const std::size_t n_iw = cs.w_combos.size();
    PairSelection best;
    best.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i_f = 0; i_f < cs.f_combos.size(); ++i_f)
        for (std::size_t i_w = 0; i_w < n_iw; ++i_w)
        {
            auto est = estimate_with(t, f_white[i_f], w_white[i_w], cs.f_combos[i_f], cs.w_combos[i_w]);
            const double v = criterion_value(est, mode, gamma, n_streams);
            ++best.evaluations;
            if (v > best.value)
            {
                best.value = v;
                best.i_f = i_f;
                best.i_w = i_w;
                best.estimate = std::move(est);
            }
        }
    best.estimate.i_f = best.i_f;
    best.estimate.i_w = best.i_w;
    best.estimate.index = best.i_f * n_iw + best.i_w;
    return best;
}

BeamformerSet run_algorithm1(const ObservationTensor &t, const Codebook &f_cb, const Codebook &w_cb,
                             const Algorithm1Params &params)
{
    if (params.n_streams < 1 || params.n_streams > params.n_rf || params.n_rf > params.m)
        throw InvalidInput("run_algorithm1: need 1 <= N_S <= N_RF <= M");

    // greedy pairs and candidate sets
    const auto pairs = select_initial_pairs(t, params.m);
    const auto cs = build_candidate_sets(pairs, params.n_rf);
    // criterion search over all cross pairs
    const auto sel = select_best_pair(cs, t, f_cb, w_cb, params.mode, params.gamma, params.n_streams);

    // analog stage
    BeamformerSet bf;
    bf.mode = params.mode;
    bf.f_beams = cs.f_combos[sel.i_f];
    bf.w_beams = cs.w_combos[sel.i_w];
    bf.f_p = columns_of(f_cb, bf.f_beams);
    bf.w_p = columns_of(w_cb, bf.w_beams);

    // digital stage per subcarrier
    auto dbf = digital_beamformers(sel.estimate, bf.f_p, bf.w_p, params.n_streams);
    bf.f_b = std::move(dbf.f_b);
    bf.w_b = std::move(dbf.w_b);
    bf.stream_sigmas = std::move(dbf.stream_sigmas);
    return bf;
}

} // namespace hbf
