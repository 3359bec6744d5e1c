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

#include "hbf/channel.hpp"
#include "hbf/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace hbf
{

namespace
{
// Magnitudes of the 3GPP TR 38.900 Table 7.5-3 ray offsets.
constexpr std::array<double, 10> kOffsetMagnitudes = {0.0447, 0.1413, 0.2492, 0.3715, 0.5129,
                                                      0.6797, 0.8844, 1.1481, 1.5195, 2.1551};

double clamp_angle(double deg)
{
    return std::clamp(deg, -90.0, 90.0);
}
} // namespace

std::vector<double> default_ray_offsets(std::size_t rays_per_cluster)
{
    if (rays_per_cluster < 1 || rays_per_cluster > 2 * kOffsetMagnitudes.size() + 1)
        throw InvalidInput("default_ray_offsets: need 1..21 rays, got " + std::to_string(rays_per_cluster));

    std::vector<double> out;
    if (rays_per_cluster % 2 == 1)
        out.push_back(0.0);
    for (std::size_t i = 0; i < rays_per_cluster / 2; ++i)
    {
        out.push_back(kOffsetMagnitudes[i]);
        out.push_back(-kOffsetMagnitudes[i]);
    }
    return out;
}

void ClusterProfile::validate() const
{
    if (n_clusters < 1)
        throw InvalidInput("cluster profile: n_clusters must be >= 1");
    if (rays_per_cluster < 1)
        throw InvalidInput("cluster profile: rays_per_cluster must be >= 1");
    if (!ray_offsets.empty() && ray_offsets.size() != rays_per_cluster)
        throw InvalidInput("cluster profile: ray_offsets must have rays_per_cluster entries");
    if (ray_offsets.empty() && rays_per_cluster > 2 * kOffsetMagnitudes.size() + 1)
        throw InvalidInput("cluster profile: more than 21 rays per cluster needs explicit ray_offsets");
    if (!(aod_spread_deg >= 0.0) || !(aoa_spread_deg >= 0.0))
        throw InvalidInput("cluster profile: angle spreads must be >= 0");
    if (delay_max && !(*delay_max >= 0.0))
        throw InvalidInput("cluster profile: delay_max must be >= 0");
    if (!(los_power_fraction >= 0.0 && los_power_fraction < 1.0))
        throw InvalidInput("cluster profile: los_power_fraction must be in [0, 1)");
    if (!(power_decay >= 0.0))
        throw InvalidInput("cluster profile: power_decay must be >= 0");
}

bool operator==(const RayParams &a, const RayParams &b)
{
    return a.alpha == b.alpha && a.delay == b.delay && a.aod == b.aod && a.aoa == b.aoa;
}

bool operator==(const ChannelRealization &a, const ChannelRealization &b)
{
    return a.rays == b.rays && a.n_tx == b.n_tx && a.n_rx == b.n_rx &&
           a.n_subcarriers == b.n_subcarriers && a.spacing_ratio == b.spacing_ratio;
}

ChannelRealization generate_cluster_channel(const ClusterProfile &profile, ChannelDims dims,
                                            std::uint64_t seed)
{
    profile.validate();
    if (dims.n_tx < 1 || dims.n_rx < 1 || dims.n_subcarriers < 1)
        throw InvalidInput("generate_cluster_channel: dimensions must be >= 1");

    const std::size_t C = profile.n_clusters;
    const std::size_t R = profile.rays_per_cluster;
    const std::vector<double> offsets =
        profile.ray_offsets.empty() ? default_ray_offsets(R) : profile.ray_offsets;
    const double delay_max = profile.delay_max.value_or(static_cast<double>(dims.n_subcarriers) / 8.0);

    // Deterministic cluster powers.
    std::vector<double> cluster_power(C);
    const double f_los = profile.los_power_fraction;
    if (C == 1)
        cluster_power[0] = 1.0;
    else if (f_los > 0.0)
    {
        double nlos_sum = 0.0;
        for (std::size_t c = 1; c < C; ++c)
            nlos_sum += cluster_power[c] = std::exp(-profile.power_decay * static_cast<double>(c - 1));
        cluster_power[0] = f_los;
        for (std::size_t c = 1; c < C; ++c)
            cluster_power[c] *= (1.0 - f_los) / nlos_sum;
    }
    else
    {
        for (std::size_t c = 0; c < C; ++c)
            cluster_power[c] = std::exp(-profile.power_decay * static_cast<double>(c));
    }

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x63686eu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> mean_angle(-90.0, 90.0);
    std::uniform_real_distribution<double> delay_dist(0.0, delay_max);

    ChannelRealization ch;
    ch.n_tx = dims.n_tx;
    ch.n_rx = dims.n_rx;
    ch.n_subcarriers = dims.n_subcarriers;
    ch.rays.reserve(C * R);

    double power_sum = 0.0;
    for (std::size_t c = 0; c < C; ++c)
    {
        const double aod_mean = mean_angle(rng);
        const double aoa_mean = mean_angle(rng);
        const double cluster_delay = delay_max > 0.0 ? delay_dist(rng) : 0.0;
        const double alpha = std::sqrt(cluster_power[c] / static_cast<double>(R));
        for (std::size_t r = 0; r < R; ++r)
        {
            double delay = cluster_delay;
            if (!profile.shared_cluster_delay)
                delay = delay_max > 0.0 ? delay_dist(rng) : 0.0;
            ch.rays.push_back(RayParams{alpha, delay,
                                        SteeringAngle(clamp_angle(aod_mean + profile.aod_spread_deg * offsets[r])),
                                        SteeringAngle(clamp_angle(aoa_mean + profile.aoa_spread_deg * offsets[r]))});
            power_sum += alpha * alpha;
        }
    }

    const double norm = 1.0 / std::sqrt(power_sum);
    for (auto &ray : ch.rays)
        ray.alpha *= norm;
    return ch;
}

namespace
{
struct RayResponses
{
    std::vector<CVector> rx;
    std::vector<CVector> tx;
};

RayResponses responses(const ChannelRealization &ch)
{
    RayResponses out;
    out.rx.reserve(ch.rays.size());
    out.tx.reserve(ch.rays.size());
    for (const auto &ray : ch.rays)
    {
        out.rx.push_back(steering_vector(ch.n_rx, ray.aoa, ch.spacing_ratio));
        out.tx.push_back(steering_vector(ch.n_tx, ray.aod, ch.spacing_ratio));
    }
    return out;
}

CMatrix assemble(const ChannelRealization &ch, const RayResponses &resp, std::size_t k)
{
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(ch.n_rx), static_cast<Eigen::Index>(ch.n_tx));
    const double K = static_cast<double>(ch.n_subcarriers);
    for (std::size_t r = 0; r < ch.rays.size(); ++r)
    {
        const auto &ray = ch.rays[r];
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) * ray.delay / K;
        const cdouble gain = std::polar(ray.alpha, phase);
        h.noalias() += (gain * resp.rx[r]) * resp.tx[r].adjoint();
    }
    return h;
}
} // namespace

CMatrix materialize(const ChannelRealization &ch, std::size_t k)
{
    if (k >= ch.n_subcarriers)
        throw InvalidInput("materialize: subcarrier index out of range");
    return assemble(ch, responses(ch), k);
}

std::vector<CMatrix> materialize_all(const ChannelRealization &ch)
{
    const auto resp = responses(ch);
    std::vector<CMatrix> out;
    out.reserve(ch.n_subcarriers);
    for (std::size_t k = 0; k < ch.n_subcarriers; ++k)
        out.push_back(assemble(ch, resp, k));
    return out;
}

ChannelRealization two_path_scenario(std::size_t n_tx, std::size_t n_rx)
{
    ChannelRealization ch;
    ch.n_tx = n_tx;
    ch.n_rx = n_rx;
    ch.n_subcarriers = 1;
    ch.rays = {
        RayParams{std::sqrt(10.0 / 11.0), 0.0, SteeringAngle(5.0), SteeringAngle(5.0)},
        RayParams{std::sqrt(1.0 / 11.0), 0.0, SteeringAngle(30.0), SteeringAngle(-15.0)},
    };
    return ch;
}

} // namespace hbf
