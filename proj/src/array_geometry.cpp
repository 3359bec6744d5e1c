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

#include "hbf/array_geometry.hpp"
#include "hbf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hbf
{

SteeringAngle::SteeringAngle(double degrees) : deg_(degrees)
{
    if (!(degrees >= -90.0 && degrees <= 90.0))
        throw InvalidInput("steering angle out of [-90, 90] degrees: " + std::to_string(degrees));
}

double SteeringAngle::radians() const
{
    return deg_ * std::numbers::pi / 180.0;
}

CVector steering_vector(std::size_t n_antennas, SteeringAngle angle, double spacing_ratio)
{
    if (n_antennas < 1)
        throw InvalidInput("steering_vector: n_antennas must be >= 1");
    if (!(spacing_ratio > 0.0))
        throw InvalidInput("steering_vector: spacing_ratio must be > 0");

    const double phase_step = 2.0 * std::numbers::pi * spacing_ratio * std::sin(angle.radians());
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    CVector v(static_cast<Eigen::Index>(n_antennas));
    for (std::size_t m = 0; m < n_antennas; ++m)
        v(static_cast<Eigen::Index>(m)) = std::polar(scale, phase_step * static_cast<double>(m));
    return v;
}

Codebook custom_codebook(std::size_t n_antennas, std::span<const SteeringAngle> angles,
                         double spacing_ratio)
{
    if (angles.empty())
        throw InvalidInput("custom_codebook: angle list is empty");

    Codebook cb;
    cb.spacing_ratio = spacing_ratio;
    cb.angles.assign(angles.begin(), angles.end());
    cb.matrix.resize(static_cast<Eigen::Index>(n_antennas), static_cast<Eigen::Index>(angles.size()));
    for (std::size_t n = 0; n < angles.size(); ++n)
        cb.matrix.col(static_cast<Eigen::Index>(n)) = steering_vector(n_antennas, angles[n], spacing_ratio);
    return cb;
}

Codebook sine_grid_codebook(std::size_t n_antennas, std::size_t n_beams)
{
    if (n_beams < 2 || n_beams % 2 != 0)
        throw InvalidInput("sine_grid_codebook: beam count must be even and >= 2");

    const double half = static_cast<double>(n_beams) / 2.0;
    std::vector<SteeringAngle> angles;
    angles.reserve(n_beams);
    for (std::size_t n = 0; n < n_beams; ++n)
    {
        double deg = std::asin((static_cast<double>(n) - half) / half) * 180.0 / std::numbers::pi;
        angles.emplace_back(std::clamp(deg, -90.0, 90.0));
    }
    return custom_codebook(n_antennas, angles, kHalfWavelengthSpacing);
}

Codebook orthogonal_codebook(std::size_t n_antennas)
{
    if (n_antennas < 2 || n_antennas % 2 != 0)
        throw InvalidInput("orthogonal_codebook: n_antennas must be even and >= 2");
    return sine_grid_codebook(n_antennas, n_antennas);
}

} // namespace hbf
