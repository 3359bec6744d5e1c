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

#include "hbf/numerics.hpp"
#include "hbf/error.hpp"

#include <algorithm>
#include <cmath>

namespace hbf
{

bool all_finite(const CMatrix &a)
{
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                return false;
    return true;
}

static void require_valid(const CMatrix &a, const char *op)
{
    if (a.rows() < 1 || a.cols() < 1)
        throw InvalidInput(std::string(op) + ": empty matrix");
    if (!all_finite(a))
        throw InvalidInput(std::string(op) + ": non-finite entry");
}

SvdFactors svd(const CMatrix &a)
{
    require_valid(a, "svd");

    Eigen::JacobiSVD<CMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdFactors out;
    out.U = solver.matrixU();
    out.V = solver.matrixV();
    const auto &s = solver.singularValues();
    out.sigmas.assign(s.data(), s.data() + s.size());

    // JacobiSVD already sorts descending; fix the per-column phase.
    for (Eigen::Index j = 0; j < out.U.cols(); ++j)
    {
        Eigen::Index imax = 0;
        double amax = -1.0;
        for (Eigen::Index i = 0; i < out.U.rows(); ++i)
        {
            double m = std::abs(out.U(i, j));
            if (m > amax)
            {
                amax = m;
                imax = i;
            }
        }
        if (amax <= 0.0)
            continue;
        cdouble rot = std::conj(out.U(imax, j)) / amax;
        out.U.col(j) *= rot;
        out.V.col(j) *= rot;
        out.U(imax, j) = cdouble(std::abs(out.U(imax, j)), 0.0);
    }
    return out;
}

std::array<double, 2> singular_values_2x2(const Eigen::Matrix2cd &a)
{
    const cdouble a00 = a(0, 0), a01 = a(0, 1), a10 = a(1, 0), a11 = a(1, 1);
    const double p = std::norm(a00) + std::norm(a10); // [A^H A]_{00}
    const double q = std::norm(a01) + std::norm(a11); // [A^H A]_{11}
    const cdouble r = std::conj(a00) * a01 + std::conj(a10) * a11;
    const double l1 = 0.5 * (p + q) + std::sqrt(0.25 * (p - q) * (p - q) + std::norm(r));
    // The smaller one via |det A|^2 = l1 * l2 avoids cancellation.
    const double l2 = l1 > 0.0 ? std::norm(a00 * a11 - a01 * a10) / l1 : 0.0;
    return {std::sqrt(l1), std::sqrt(std::max(l2, 0.0))};
}

std::vector<double> singular_values(const CMatrix &a)
{
    require_valid(a, "singular_values");

    if (a.rows() == 2 && a.cols() == 2)
    {
        auto sv = singular_values_2x2(Eigen::Matrix2cd(a));
        return {sv[0], sv[1]};
    }

    CMatrix gram = a.cols() <= a.rows() ? CMatrix(a.adjoint() * a) : CMatrix(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues(); // ascending
    std::vector<double> out(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        out[static_cast<std::size_t>(i)] = std::sqrt(std::max(ev(ev.size() - 1 - i), 0.0));
    return out;
}

CMatrix hermitian_inv_sqrt(const CMatrix &a, std::optional<double> tol)
{
    require_valid(a, "hermitian_inv_sqrt");
    if (a.rows() != a.cols())
        throw InvalidInput("hermitian_inv_sqrt: matrix is not square");
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidInput("hermitian_inv_sqrt: matrix is not Hermitian");

    const Eigen::Index n = a.rows();

    // Diagonal input (the orthogonal-codebook case) is inverted exactly.
    bool diagonal = true;
    for (Eigen::Index j = 0; j < n && diagonal; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j && a(i, j) != cdouble(0.0, 0.0))
            {
                diagonal = false;
                break;
            }

    if (diagonal)
    {
        double lmax = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            lmax = std::max(lmax, a(i, i).real());
        const double limit = tol.value_or(1e-10 * lmax);
        CMatrix b = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            double l = a(i, i).real();
            if (!(l >= limit) || l <= 0.0)
                throw NearSingular("hermitian_inv_sqrt: eigenvalue below tolerance");
            b(i, i) = 1.0 / std::sqrt(l);
        }
        return b;
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const auto &ev = es.eigenvalues();
    const double lmax = ev(n - 1);
    const double limit = tol.value_or(1e-10 * lmax);
    if (!(ev(0) >= limit) || ev(0) <= 0.0)
        throw NearSingular("hermitian_inv_sqrt: eigenvalue below tolerance");

    Eigen::VectorXd inv_root = ev.array().rsqrt();
    const CMatrix &q = es.eigenvectors();
    return q * inv_root.asDiagonal() * q.adjoint();
}

double fro_norm_sq(const CMatrix &a)
{
    return a.squaredNorm();
}

} // namespace hbf
