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

#ifndef HBF_ARRAY_GEOMETRY_HPP
#define HBF_ARRAY_GEOMETRY_HPP

#include "hbf/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hbf
{

// Steering angle in degrees, restricted to [-90, 90].
class SteeringAngle
{
public:
    // Throws InvalidInput outside [-90, 90] or for NaN.
    explicit SteeringAngle(double degrees);

    double degrees() const { return deg_; }
    double radians() const;

    friend bool operator==(const SteeringAngle &, const SteeringAngle &) = default;

private:
    double deg_;
};

inline constexpr double kHalfWavelengthSpacing = 0.5;

// Unit-norm ULA response: entry m = exp(j*2*pi*spacing_ratio*sin(angle)*m) / sqrt(N).
CVector steering_vector(std::size_t n_antennas, SteeringAngle angle,
                        double spacing_ratio = kHalfWavelengthSpacing);

// A set of candidate analog beams, one steering vector per column.
struct Codebook
{
    CMatrix matrix; // n_antennas x n_beams
    std::vector<SteeringAngle> angles;
    double spacing_ratio = kHalfWavelengthSpacing;

    std::size_t n_antennas() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t size() const { return static_cast<std::size_t>(matrix.cols()); }
};

// N beams with sin(angle_n) = (n - N/2) / (N/2), n = 0..N-1, at half-wavelength
// spacing. The columns are orthonormal. N must be even and >= 2.
Codebook orthogonal_codebook(std::size_t n_antennas);

// Arbitrary steering angles; no orthogonality requirement.
Codebook custom_codebook(std::size_t n_antennas, std::span<const SteeringAngle> angles,
                         double spacing_ratio = kHalfWavelengthSpacing);

// n_beams angles on the uniform sine grid (n - B/2)/(B/2). Equals
// orthogonal_codebook when n_beams == n_antennas.
Codebook sine_grid_codebook(std::size_t n_antennas, std::size_t n_beams);

} // namespace hbf

#endif
