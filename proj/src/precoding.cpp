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

#include "hbf/precoding.hpp"
#include "hbf/error.hpp"
#include "hbf/sounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace hbf
{

std::string_view to_string(Criterion c)
{
    return c == Criterion::Eigen ? "eigen" : "fro";
}

Criterion parse_criterion(std::string_view s)
{
    if (s == "eigen")
        return Criterion::Eigen;
    if (s == "fro" || s == "frobenius")
        return Criterion::Frobenius;
    throw InvalidInput("unknown criterion '" + std::string(s) + "' (expected eigen or fro)");
}

std::string_view to_string(Allocation a)
{
    return a == Allocation::Equal ? "equal" : "waterfill";
}

Allocation parse_allocation(std::string_view s)
{
    if (s == "equal")
        return Allocation::Equal;
    if (s == "waterfill" || s == "water-fill")
        return Allocation::WaterFill;
    throw InvalidInput("unknown allocation '" + std::string(s) + "' (expected equal or waterfill)");
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
    {
        // r * (n - k + i) / i is exact at every step; saturate on overflow.
        if (r > std::numeric_limits<std::size_t>::max() / (n - k + i))
            return std::numeric_limits<std::size_t>::max();
        r = r * (n - k + i) / i;
    }
    return r;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    if (k > n)
        return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true)
    {
        out.push_back(idx);
        // Rightmost position that can still advance.
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1)
            --pos;
        if (pos == 0)
            break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i)
            idx[i] = idx[i - 1] + 1;
    }
    return out;
}

DigitalBeamformers digital_beamformers(const EffectiveChannelEstimate &est, const CMatrix &f_p,
                                       const CMatrix &w_p, std::size_t n_streams)
{
    const auto n_rf = static_cast<std::size_t>(f_p.cols());
    if (static_cast<std::size_t>(w_p.cols()) != n_rf)
        throw InvalidInput("digital_beamformers: analog matrices have different RF chain counts");
    if (n_streams < 1 || n_streams > n_rf)
        throw InvalidInput("digital_beamformers: need 1 <= N_S <= N_RF");

    const CMatrix f_white = hermitian_inv_sqrt(f_p.adjoint() * f_p);
    const CMatrix w_white = hermitian_inv_sqrt(w_p.adjoint() * w_p);
    const auto ns = static_cast<Eigen::Index>(n_streams);

    DigitalBeamformers out;
    out.f_b.reserve(est.per_k.size());
    out.w_b.reserve(est.per_k.size());
    out.stream_sigmas.reserve(est.per_k.size());
    for (const auto &he : est.per_k)
    {
        if (static_cast<std::size_t>(he.rows()) != n_rf || static_cast<std::size_t>(he.cols()) != n_rf)
            throw InvalidInput("digital_beamformers: effective channel must be N_RF x N_RF");
        const SvdFactors f = svd(he);
        out.f_b.push_back(f_white * f.V.leftCols(ns));
        out.w_b.push_back(w_white * f.U.leftCols(ns));
        out.stream_sigmas.emplace_back(f.sigmas.begin(), f.sigmas.begin() + ns);
    }
    return out;
}

namespace
{
// log2 det of a Hermitian positive-definite matrix.
double log2_det_hpd(const CMatrix &a)
{
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() == Eigen::Success)
    {
        double s = 0.0;
        const auto &l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            s += std::log2(l(i, i).real());
        return 2.0 * s;
    }
    return std::log2(std::abs(a.partialPivLu().determinant()));
}
} // namespace

double throughput(const CMatrix &h, const CMatrix &f_p, const CMatrix &w_p, const CMatrix &f_b,
                  const CMatrix &w_b, double rho, double noise_var, std::span<const double> stream_powers)
{
    if (!(noise_var > 0.0))
        throw InvalidInput("throughput: noise variance must be > 0");
    if (h.rows() != w_p.rows() || h.cols() != f_p.rows() || f_p.cols() != f_b.rows() ||
        w_p.cols() != w_b.rows() || f_b.cols() != w_b.cols() ||
        stream_powers.size() != static_cast<std::size_t>(f_b.cols()))
        throw InvalidInput("throughput: inconsistent dimensions");

    const CMatrix combiner = w_p * w_b; // N_R x N_S
    const CMatrix t = combiner.adjoint() * h * (f_p * f_b);
    Eigen::VectorXd p(static_cast<Eigen::Index>(stream_powers.size()));
    for (std::size_t i = 0; i < stream_powers.size(); ++i)
        p(static_cast<Eigen::Index>(i)) = stream_powers[i];

    const CMatrix r_z = noise_var * (combiner.adjoint() * combiner);
    const CMatrix signal = t * p.asDiagonal() * t.adjoint();
    CMatrix total = r_z + rho * signal;
    // Hermitian by construction; remove rounding asymmetry before Cholesky.
    total = 0.5 * (total + total.adjoint()).eval();
    const double rate = log2_det_hpd(total) - log2_det_hpd(r_z);
    return std::max(rate, 0.0);
}

std::vector<double> stream_powers(const BeamformerSet &bf, std::size_t k, double rho, double noise_var,
                                  Allocation allocation)
{
    const std::size_t ns = bf.n_streams();
    std::vector<double> equal(ns, 1.0 / static_cast<double>(ns));
    if (allocation == Allocation::Equal || k >= bf.stream_sigmas.size())
        return equal;

    std::vector<double> gains;
    gains.reserve(ns);
    bool any = false;
    for (double s : bf.stream_sigmas[k])
    {
        gains.push_back(rho * s * s / noise_var);
        any = any || gains.back() > 0.0;
    }
    if (!any)
        return equal;
    return water_filling(gains, 1.0).powers;
}

double average_throughput(std::span<const CMatrix> h, const BeamformerSet &bf, double rho, double noise_var,
                          Allocation allocation)
{
    if (h.size() != bf.n_subcarriers())
        throw InvalidInput("average_throughput: subcarrier count mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k)
    {
        const auto p = stream_powers(bf, k, rho, noise_var, allocation);
        sum += throughput(h[k], bf.f_p, bf.w_p, bf.f_b[k], bf.w_b[k], rho, noise_var, p);
    }
    return sum / static_cast<double>(h.size());
}

double equal_power_throughput(std::span<const double> sigmas, double gamma, std::size_t n_streams)
{
    double r = 0.0;
    const std::size_t n = std::min(n_streams, sigmas.size());
    for (std::size_t i = 0; i < n; ++i)
        r += std::log2(1.0 + gamma * sigmas[i] * sigmas[i]);
    return r;
}

PowerAllocation water_filling(std::span<const double> gains, double budget)
{
    if (!(budget > 0.0))
        throw InvalidInput("water_filling: budget must be > 0");
    std::vector<double> active;
    for (double g : gains)
    {
        if (!(g >= 0.0))
            throw InvalidInput("water_filling: gains must be >= 0");
        if (g > 0.0)
            active.push_back(g);
    }
    if (active.empty())
        throw InvalidInput("water_filling: all gains are zero");

    std::sort(active.begin(), active.end(), std::greater<>());
    // Largest active set whose weakest member still sits below the water level.
    double mu = 0.0;
    double inv_sum = 0.0;
    for (std::size_t n = 1; n <= active.size(); ++n)
    {
        inv_sum += 1.0 / active[n - 1];
        const double level = (budget + inv_sum) / static_cast<double>(n);
        if (level - 1.0 / active[n - 1] <= 0.0)
            break;
        mu = level;
    }

    PowerAllocation out;
    out.water_level = mu;
    out.powers.reserve(gains.size());
    for (double g : gains)
        out.powers.push_back(g > 0.0 ? std::max(0.0, mu - 1.0 / g) : 0.0);
    return out;
}

double allocated_rate(std::span<const double> gains, std::span<const double> powers)
{
    if (gains.size() != powers.size())
        throw InvalidInput("allocated_rate: size mismatch");
    double r = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i)
        r += std::log2(1.0 + gains[i] * powers[i]);
    return r;
}

double fully_digital_throughput(const CMatrix &h, double gamma, std::size_t n_streams, Allocation allocation)
{
    if (n_streams < 1 || n_streams > static_cast<std::size_t>(std::min(h.rows(), h.cols())))
        throw InvalidInput("fully_digital_throughput: need 1 <= N_S <= min(N_T, N_R)");
    return fully_digital_throughput(singular_values(h), gamma, n_streams, allocation);
}

double fully_digital_throughput(std::span<const double> sigmas, double gamma, std::size_t n_streams,
                                Allocation allocation)
{
    if (n_streams < 1 || n_streams > sigmas.size())
        throw InvalidInput("fully_digital_throughput: need 1 <= N_S <= rank bound");
    const auto top = sigmas.first(n_streams);
    if (allocation == Allocation::Equal)
        return equal_power_throughput(top, gamma, n_streams);

    // Power fractions p with sum 1: rate_s = log2(1 + gamma N_S sigma_s^2 p_s).
    std::vector<double> gains;
    for (double s : top)
        gains.push_back(gamma * static_cast<double>(n_streams) * s * s);
    if (std::none_of(gains.begin(), gains.end(), [](double g) { return g > 0.0; }))
        return 0.0;
    return allocated_rate(gains, water_filling(gains, 1.0).powers);
}

ConstraintResiduals constraint_residuals(const BeamformerSet &bf, std::size_t k)
{
    const CMatrix &f_b = bf.f_b.at(k);
    const CMatrix &w_b = bf.w_b.at(k);
    const auto ns = f_b.cols();
    const double rs = 1.0 / static_cast<double>(ns);

    const CMatrix precoder = bf.f_p * f_b;
    const double tx_trace = rs * precoder.squaredNorm(); // tr(P R_s P^H) with R_s = rs I
    const CMatrix combiner = bf.w_p * w_b;
    const CMatrix gram = combiner.adjoint() * combiner;

    ConstraintResiduals r;
    r.transmit_power = std::abs(tx_trace - 1.0);
    r.combiner_noise = (gram - CMatrix::Identity(ns, ns)).cwiseAbs().maxCoeff();
    return r;
}

namespace
{
template <typename Mat>
Mat gather(const CMatrix &g, const std::vector<std::size_t> &rows, const std::vector<std::size_t> &cols)
{
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                g(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    return m;
}

struct ComboWhitening
{
    std::vector<std::vector<std::size_t>> combos;
    std::vector<std::optional<CMatrix>> white; // empty for nearly collinear beam sets
};

ComboWhitening whitening_for(const Codebook &cb, std::size_t n_rf)
{
    ComboWhitening out;
    out.combos = combinations(cb.size(), n_rf);
    out.white.reserve(out.combos.size());
    for (const auto &c : out.combos)
    {
        CMatrix sub(cb.matrix.rows(), static_cast<Eigen::Index>(n_rf));
        for (std::size_t j = 0; j < n_rf; ++j)
            sub.col(static_cast<Eigen::Index>(j)) = cb.matrix.col(static_cast<Eigen::Index>(c[j]));
        try
        {
            out.white.emplace_back(hermitian_inv_sqrt(sub.adjoint() * sub));
        }
        catch (const NearSingular &)
        {
            out.white.emplace_back(std::nullopt);
        }
    }
    return out;
}

// Scores every (i_f, i_w) pair at every gamma; keeps the first maximum in index order.
template <typename Mat>
void search_pairs(const std::vector<CMatrix> &g, const ComboWhitening &fw, const ComboWhitening &ww,
                  std::size_t n_streams, std::span<const double> gammas, std::vector<double> &best_value,
                  std::vector<std::size_t> &best_index)
{
    const std::size_t n_iw = ww.combos.size();
    const std::size_t n_gamma = gammas.size();
    std::vector<Mat> f_white(fw.white.size()), w_white(ww.white.size());
    for (std::size_t i = 0; i < fw.white.size(); ++i)
        if (fw.white[i])
            f_white[i] = *fw.white[i];
    for (std::size_t i = 0; i < ww.white.size(); ++i)
        if (ww.white[i])
            w_white[i] = *ww.white[i];

    std::vector<double> acc(n_gamma);
    std::vector<double> sig2;
    for (std::size_t i_f = 0; i_f < fw.combos.size(); ++i_f)
    {
        if (!fw.white[i_f])
            continue;
        for (std::size_t i_w = 0; i_w < n_iw; ++i_w)
        {
            if (!ww.white[i_w])
                continue;
            std::fill(acc.begin(), acc.end(), 0.0);
            for (const auto &gk : g)
            {
                const Mat he = w_white[i_w] * gather<Mat>(gk, ww.combos[i_w], fw.combos[i_f]) * f_white[i_f];
                if constexpr (Mat::RowsAtCompileTime == 2)
                {
                    const auto sv = singular_values_2x2(he);
                    sig2.assign({sv[0] * sv[0], sv[1] * sv[1]});
                }
                else
                {
                    const auto sv = singular_values(he);
                    sig2.clear();
                    for (double s : sv)
                        sig2.push_back(s * s);
                }
                const std::size_t ns = std::min(n_streams, sig2.size());
                for (std::size_t q = 0; q < n_gamma; ++q)
                {
                    double prod = 1.0;
                    for (std::size_t s = 0; s < ns; ++s)
                        prod *= 1.0 + gammas[q] * sig2[s];
                    acc[q] += std::log2(prod);
                }
            }
            const std::size_t index = i_f * n_iw + i_w;
            for (std::size_t q = 0; q < n_gamma; ++q)
                if (acc[q] > best_value[q])
                {
                    best_value[q] = acc[q];
                    best_index[q] = index;
                }
        }
    }
}
} // namespace

std::vector<BeamformerSet> exhaustive_oracle(std::span<const CMatrix> h, const Codebook &f_cb,
                                             const Codebook &w_cb, std::size_t n_rf, std::size_t n_streams,
                                             std::span<const double> gammas)
{
    if (n_streams < 1 || n_streams > n_rf || n_rf > std::min(f_cb.size(), w_cb.size()))
        throw InvalidInput("exhaustive_oracle: need 1 <= N_S <= N_RF <= codebook sizes");
    const double n_eval = static_cast<double>(binomial(f_cb.size(), n_rf)) *
                          static_cast<double>(binomial(w_cb.size(), n_rf));
    if (n_eval > kOracleMaxEvaluations)
        throw TooLarge("exhaustive_oracle: " + std::to_string(static_cast<long long>(n_eval)) +
                       " analog pairs exceed the enumeration guard");

    const ObservationTensor coupling = coupling_tensor(h, f_cb, w_cb);
    std::vector<CMatrix> g(coupling.n_k, CMatrix(static_cast<Eigen::Index>(coupling.n_w),
                                                  static_cast<Eigen::Index>(coupling.n_f)));
    for (std::size_t k = 0; k < coupling.n_k; ++k)
        for (std::size_t w = 0; w < coupling.n_w; ++w)
            for (std::size_t f = 0; f < coupling.n_f; ++f)
                g[k](static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(f)) = coupling.at(w, f, k);

    const ComboWhitening fw = whitening_for(f_cb, n_rf);
    const ComboWhitening ww = whitening_for(w_cb, n_rf);

    std::vector<double> best_value(gammas.size(), -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> best_index(gammas.size(), std::numeric_limits<std::size_t>::max());
    if (n_rf == 2)
        search_pairs<Eigen::Matrix2cd>(g, fw, ww, n_streams, gammas, best_value, best_index);
    else
        search_pairs<CMatrix>(g, fw, ww, n_streams, gammas, best_value, best_index);

    std::vector<BeamformerSet> out;
    out.reserve(gammas.size());
    for (std::size_t q = 0; q < gammas.size(); ++q)
    {
        if (best_index[q] == std::numeric_limits<std::size_t>::max())
            throw NearSingular("exhaustive_oracle: every analog combination is nearly singular");
        const std::size_t i_f = best_index[q] / ww.combos.size();
        const std::size_t i_w = best_index[q] % ww.combos.size();
        const auto &fc = fw.combos[i_f];
        const auto &wc = ww.combos[i_w];

        BeamformerSet bf;
        bf.mode = Criterion::Eigen;
        bf.f_beams = fc;
        bf.w_beams = wc;
        bf.f_p.resize(f_cb.matrix.rows(), static_cast<Eigen::Index>(n_rf));
        bf.w_p.resize(w_cb.matrix.rows(), static_cast<Eigen::Index>(n_rf));
        for (std::size_t j = 0; j < n_rf; ++j)
        {
            bf.f_p.col(static_cast<Eigen::Index>(j)) = f_cb.matrix.col(static_cast<Eigen::Index>(fc[j]));
            bf.w_p.col(static_cast<Eigen::Index>(j)) = w_cb.matrix.col(static_cast<Eigen::Index>(wc[j]));
        }

        EffectiveChannelEstimate est;
        est.i_f = i_f;
        est.i_w = i_w;
        est.index = best_index[q];
        est.per_k.reserve(g.size());
        for (const auto &gk : g)
            est.per_k.push_back(*ww.white[i_w] * gather<CMatrix>(gk, wc, fc) * *fw.white[i_f]);

        auto dbf = digital_beamformers(est, bf.f_p, bf.w_p, n_streams);
        bf.f_b = std::move(dbf.f_b);
        bf.w_b = std::move(dbf.w_b);
        bf.stream_sigmas = std::move(dbf.stream_sigmas);
        out.push_back(std::move(bf));
    }
    return out;
}

BeamformerSet exhaustive_oracle(const ChannelRealization &ch, const Codebook &f_cb, const Codebook &w_cb,
                                std::size_t n_rf, std::size_t n_streams, double gamma)
{
    const auto h = materialize_all(ch);
    const double gammas[] = {gamma};
    return std::move(exhaustive_oracle(h, f_cb, w_cb, n_rf, n_streams, gammas).front());
}

} // namespace hbf
