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

#ifndef HBF_PRECODING_HPP
#define HBF_PRECODING_HPP

#include "hbf/array_geometry.hpp"
#include "hbf/channel.hpp"
#include "hbf/numerics.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hbf
{

// Analog beam selection criterion: the equal-power rate of the estimated
// effective channel, or its low-SNR surrogate, the squared Frobenius norm.
enum class Criterion
{
    Eigen,
    Frobenius
};

std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view s); // "eigen" | "fro" | "frobenius"

enum class Allocation
{
    Equal,
    WaterFill
};

std::string_view to_string(Allocation a);
Allocation parse_allocation(std::string_view s); // "equal" | "waterfill"

// Whitened N_RF x N_RF effective channel per subcarrier for one analog pair.
// i_f, i_w are 0-based positions in the candidate lists; index = i_f * I_W + i_w.
struct EffectiveChannelEstimate
{
    std::vector<CMatrix> per_k;
    std::size_t i_f = 0;
    std::size_t i_w = 0;
    std::size_t index = 0;
};

// Analog matrices, per-subcarrier digital matrices and the beam indices they use.
struct BeamformerSet
{
    CMatrix f_p; // N_T x N_RF
    CMatrix w_p; // N_R x N_RF
    std::vector<CMatrix> f_b; // per k, N_RF x N_S
    std::vector<CMatrix> w_b; // per k, N_RF x N_S
    std::vector<std::size_t> f_beams;
    std::vector<std::size_t> w_beams;
    Criterion mode = Criterion::Eigen;
    std::vector<std::vector<double>> stream_sigmas; // per k, top N_S singular values the digital stage saw

    std::size_t n_streams() const { return f_b.empty() ? 0 : static_cast<std::size_t>(f_b.front().cols()); }
    std::size_t n_subcarriers() const { return f_b.size(); }
};

struct DigitalBeamformers
{
    std::vector<CMatrix> f_b;
    std::vector<CMatrix> w_b;
    std::vector<std::vector<double>> stream_sigmas;
};

// F_B[k] = (F_P^H F_P)^{-1/2} V[:, 0:N_S] and W_B[k] = (W_P^H W_P)^{-1/2} U[:, 0:N_S]
// from the SVD of the effective channel at k.
DigitalBeamformers digital_beamformers(const EffectiveChannelEstimate &est, const CMatrix &f_p,
                                       const CMatrix &w_p, std::size_t n_streams);

// log2 det(I + rho R_z^{-1} T R_s T^H), T = W_B^H W_P^H H F_P F_B,
// R_z = noise_var W_B^H W_P^H W_P W_B, R_s = diag(stream_powers).
double throughput(const CMatrix &h, const CMatrix &f_p, const CMatrix &w_p, const CMatrix &f_b,
                  const CMatrix &w_b, double rho, double noise_var, std::span<const double> stream_powers);

// Per-stream powers (summing to one) used at subcarrier k: equal, or water-filled
// on rho * sigma^2 / noise_var of the singular values stored in the set.
std::vector<double> stream_powers(const BeamformerSet &bf, std::size_t k, double rho, double noise_var,
                                  Allocation allocation);

// Subcarrier-averaged rate against the true channel matrices.
double average_throughput(std::span<const CMatrix> h, const BeamformerSet &bf, double rho,
                          double noise_var, Allocation allocation = Allocation::Equal);

// sum_{s < N_S} log2(1 + gamma sigma_s^2)
double equal_power_throughput(std::span<const double> sigmas, double gamma, std::size_t n_streams);

struct PowerAllocation
{
    std::vector<double> powers;
    double water_level = 0.0;
};

// p_i = max(0, mu - 1/gain_i) with sum p_i = budget.
PowerAllocation water_filling(std::span<const double> gains, double budget);

// sum_s log2(1 + gain_s p_s) for a given allocation.
double allocated_rate(std::span<const double> gains, std::span<const double> powers);

double fully_digital_throughput(const CMatrix &h, double gamma, std::size_t n_streams,
                                Allocation allocation = Allocation::Equal);

// Same from precomputed singular values of H (descending).
double fully_digital_throughput(std::span<const double> sigmas, double gamma, std::size_t n_streams,
                                Allocation allocation = Allocation::Equal);

struct ConstraintResiduals
{
    double transmit_power; // |tr(F_P F_B R_s F_B^H F_P^H) - tr(R_s)|
    double combiner_noise; // max |W_B^H W_P^H W_P W_B - I|
};

// Residuals of both power constraints at subcarrier k with R_s = I / N_S.
ConstraintResiduals constraint_residuals(const BeamformerSet &bf, std::size_t k);

// Global argmax of the equal-power rate over all N_RF-column analog matrices drawn
// from the codebooks, using the true channel. Throws TooLarge when
// C(N_F, N_RF) * C(N_W, N_RF) > 1e6.
BeamformerSet exhaustive_oracle(const ChannelRealization &ch, const Codebook &f_cb, const Codebook &w_cb,
                                std::size_t n_rf, std::size_t n_streams, double gamma);

// One oracle solution per SNR value, sharing the singular values across gammas.
std::vector<BeamformerSet> exhaustive_oracle(std::span<const CMatrix> h, const Codebook &f_cb,
                                             const Codebook &w_cb, std::size_t n_rf, std::size_t n_streams,
                                             std::span<const double> gammas);

inline constexpr double kOracleMaxEvaluations = 1e6;

std::size_t binomial(std::size_t n, std::size_t k);

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

} // namespace hbf

#endif
