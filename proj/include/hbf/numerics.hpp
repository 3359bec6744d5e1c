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

#ifndef HBF_NUMERICS_HPP
#define HBF_NUMERICS_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace hbf
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Thin SVD: A = U * diag(sigmas) * V^H with p = min(rows, cols) columns in U and V.
// Phase convention: the largest-magnitude entry of every column of U is real and
// non-negative (first index wins on ties); V carries the matching phase.
struct SvdFactors
{
    CMatrix U;                  // rows x p, orthonormal columns
    std::vector<double> sigmas; // length p, descending, non-negative
    CMatrix V;                  // cols x p, orthonormal columns
};

bool all_finite(const CMatrix &a);

// Throws InvalidInput for empty or non-finite input. Deterministic.
SvdFactors svd(const CMatrix &a);

// Closed-form singular values of a 2x2 matrix, descending.
std::array<double, 2> singular_values_2x2(const Eigen::Matrix2cd &a);

// Singular values only, descending. Uses a closed form for 2x2 and an
// eigendecomposition of the Gram matrix otherwise.
std::vector<double> singular_values(const CMatrix &a);

// Returns B with B * A * B = I for a Hermitian positive-definite A.
// Default tolerance is 1e-10 times the largest eigenvalue; an eigenvalue below it
// throws NearSingular. Non-square or non-Hermitian (1e-10) input throws InvalidInput.
CMatrix hermitian_inv_sqrt(const CMatrix &a, std::optional<double> tol = std::nullopt);

// Sum of squared magnitudes of all entries.
double fro_norm_sq(const CMatrix &a);

} // namespace hbf

#endif
