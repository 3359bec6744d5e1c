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

#ifndef HBF_CHANNEL_HPP
#define HBF_CHANNEL_HPP

#include "hbf/array_geometry.hpp"
#include "hbf/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace hbf
{

struct RayParams
{
    double alpha;      // real amplitude, > 0
    double delay;      // in sampling intervals, >= 0
    SteeringAngle aod; // departure
    SteeringAngle aoa; // arrival
};

// Statistics of the simplified cluster channel.
//
// Cluster powers: with a LoS fraction f > 0 the first cluster gets f and the
// remaining C-1 clusters share 1-f with weights exp(-power_decay * (c-1)); with
// f == 0 all clusters use exp(-power_decay * c). Power is split equally over the
// rays of a cluster. Ray angles are cluster mean + spread * offset, clamped to
// [-90, 90].
struct ClusterProfile
{
    std::size_t n_clusters = 3;
    std::size_t rays_per_cluster = 4;
    double aod_spread_deg = 10.0;
    double aoa_spread_deg = 10.0;
    std::vector<double> ray_offsets;    // length R; empty selects default_ray_offsets(R)
    std::optional<double> delay_max;    // samples; unset means K/8
    double los_power_fraction = 0.5;    // in [0, 1)
    double power_decay = 1.0;           // >= 0
    bool shared_cluster_delay = true;   // false draws one delay per ray

    void validate() const; // throws InvalidInput
};

// Symmetric subset of the 3GPP fixed intra-cluster offsets, smallest magnitudes
// first; odd R gets an extra 0 offset. R <= 21.
std::vector<double> default_ray_offsets(std::size_t rays_per_cluster);

struct ChannelDims
{
    std::size_t n_tx;
    std::size_t n_rx;
    std::size_t n_subcarriers;
};

struct ChannelRealization
{
    std::vector<RayParams> rays;
    std::size_t n_tx = 0;
    std::size_t n_rx = 0;
    std::size_t n_subcarriers = 1;
    double spacing_ratio = kHalfWavelengthSpacing;
};

bool operator==(const RayParams &a, const RayParams &b);
bool operator==(const ChannelRealization &a, const ChannelRealization &b);

ChannelRealization generate_cluster_channel(const ClusterProfile &profile, ChannelDims dims,
                                            std::uint64_t seed);

// H[k] = sum_r alpha_r * exp(-j 2 pi k l_r / K) * a_rx(aoa_r) a_tx(aod_r)^H, n_rx x n_tx.
CMatrix materialize(const ChannelRealization &ch, std::size_t k);

// All K subcarrier matrices; computes the array responses once.
std::vector<CMatrix> materialize_all(const ChannelRealization &ch);

// Two rays, AoD {5, 30} deg, AoA {5, -15} deg, 10 dB power ratio, zero delay, K = 1.
ChannelRealization two_path_scenario(std::size_t n_tx = 8, std::size_t n_rx = 8);

} // namespace hbf

#endif
