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

#ifndef HBF_BEAM_TRAINING_HPP
#define HBF_BEAM_TRAINING_HPP

#include "hbf/array_geometry.hpp"
#include "hbf/precoding.hpp"
#include "hbf/sounding.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hbf
{

struct BeamPair
{
    std::size_t n_f; // transmit beam
    std::size_t n_w; // receive beam

    friend bool operator==(const BeamPair &, const BeamPair &) = default;
};

// Candidate analog matrices built from the M greedily selected pairs.
struct CandidateSets
{
    std::vector<BeamPair> selected_pairs;
    std::vector<std::vector<std::size_t>> f_combos; // N_RF-subsets of transmit beams, sorted, lexicographic
    std::vector<std::vector<std::size_t>> w_combos;

    std::size_t i_f_count() const { return f_combos.size(); }
    std::size_t i_w_count() const { return w_combos.size(); }
};

// Greedy selection of M pairs by received power. A chosen transmit beam and a chosen
// receive beam are both excluded from later iterations. Ties go to the smallest
// (n_w, n_f). Throws InvalidInput when M exceeds either codebook size.
std::vector<BeamPair> select_initial_pairs(const ObservationTensor &t, std::size_t m);

CandidateSets build_candidate_sets(std::span<const BeamPair> pairs, std::size_t n_rf);

// H_E[k] = (W^H W)^{-1/2} (Y[k] / sqrt(rho)) (F^H F)^{-1/2} with Y[k](r, c) = y[w_combo[r]][f_combo[c]][k].
EffectiveChannelEstimate effective_channel_estimate(const ObservationTensor &t, const Codebook &f_cb,
                                                    const Codebook &w_cb, std::span<const std::size_t> f_combo,
                                                    std::span<const std::size_t> w_combo);

// Eigen: sum_k sum_{s < N_S} log2(1 + gamma sigma_s^2); Frobenius: sum_k ||H_E[k]||_F^2.
double criterion_value(const EffectiveChannelEstimate &est, Criterion mode, double gamma, std::size_t n_streams);

struct PairSelection
{
    std::size_t i_f = 0;
    std::size_t i_w = 0;
    EffectiveChannelEstimate estimate;
    double value = 0.0;
    std::size_t evaluations = 0;
};

// Argmax of the criterion over all I_F x I_W cross pairs; ties go to the smallest
// combined index i_f * I_W + i_w.
PairSelection select_best_pair(const CandidateSets &cs, const ObservationTensor &t, const Codebook &f_cb,
                               const Codebook &w_cb, Criterion mode, double gamma, std::size_t n_streams);

struct Algorithm1Params
{
    std::size_t m = 3;
    std::size_t n_rf = 2;
    std::size_t n_streams = 2;
    Criterion mode = Criterion::Eigen;
    double gamma = 1.0; // linear SNR rho / (N_S sigma^2), used by the Eigen criterion
};

// Hybrid beamforming from the observation tensor alone: greedy pair selection,
// candidate sets, estimated effective channels, criterion argmax, then SVD-based
// digital beamformers for the chosen analog pair.
BeamformerSet run_algorithm1(const ObservationTensor &t, const Codebook &f_cb, const Codebook &w_cb,
                             const Algorithm1Params &params);

} // namespace hbf

#endif
