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

#include "hbf/sounding.hpp"
#include "hbf/error.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>

namespace hbf
{

ObservationTensor coupling_tensor(std::span<const CMatrix> h, const Codebook &f_cb, const Codebook &w_cb)
{
    if (h.empty())
        throw InvalidInput("coupling_tensor: no subcarriers");
    const auto n_rx = h.front().rows();
    const auto n_tx = h.front().cols();
    if (static_cast<Eigen::Index>(f_cb.n_antennas()) != n_tx || static_cast<Eigen::Index>(w_cb.n_antennas()) != n_rx)
        throw InvalidInput("coupling_tensor: codebook antenna count does not match the channel");

    ObservationTensor t;
    t.n_w = w_cb.size();
    t.n_f = f_cb.size();
    t.n_k = h.size();
    t.rho = 1.0;
    t.noise_var = 0.0;
    t.y.resize(t.n_w * t.n_f * t.n_k);

    const CMatrix w_adj = w_cb.matrix.adjoint();
    CMatrix g;
    for (std::size_t k = 0; k < t.n_k; ++k)
    {
        if (h[k].rows() != n_rx || h[k].cols() != n_tx)
            throw InvalidInput("coupling_tensor: subcarrier matrices differ in size");
        g.noalias() = w_adj * (h[k] * f_cb.matrix);
        for (std::size_t w = 0; w < t.n_w; ++w)
            for (std::size_t f = 0; f < t.n_f; ++f)
                t.at(w, f, k) = g(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(f));
    }
    return t;
}

ObservationTensor coupling_tensor(const ChannelRealization &ch, const Codebook &f_cb, const Codebook &w_cb)
{
    if (f_cb.n_antennas() != ch.n_tx || w_cb.n_antennas() != ch.n_rx)
        throw InvalidInput("sounding: codebook antenna count does not match the channel");
    const auto h = materialize_all(ch);
    return coupling_tensor(h, f_cb, w_cb);
}

ObservationTensor observe(const ObservationTensor &coupling, double rho, double noise_var,
                          std::uint64_t seed, std::span<const cdouble> pilot)
{
    if (!(rho > 0.0))
        throw InvalidInput("sounding: rho must be > 0");
    if (!(noise_var >= 0.0))
        throw InvalidInput("sounding: noise variance must be >= 0");
    if (!pilot.empty())
    {
        if (pilot.size() != coupling.n_k)
            throw InvalidInput("sounding: pilot length must equal the subcarrier count");
        for (const auto &s : pilot)
            if (std::abs(std::abs(s) - 1.0) > 1e-9)
                throw InvalidInput("sounding: pilot symbols must have unit modulus");
    }

    ObservationTensor t = coupling;
    t.rho = rho;
    t.noise_var = noise_var;
    const double amp = std::sqrt(rho);
    const double sd = std::sqrt(noise_var / 2.0);

    for (std::size_t w = 0; w < t.n_w; ++w)
        for (std::size_t f = 0; f < t.n_f; ++f)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(f)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t k = 0; k < t.n_k; ++k)
            {
                cdouble v = amp * coupling.at(w, f, k);
                if (!pilot.empty())
                {
                    const cdouble s = pilot[k];
                    v = std::conj(s) * (v * s) / std::norm(s);
                }
                if (noise_var > 0.0)
                {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    v += cdouble(sd * re, sd * im);
                }
                t.at(w, f, k) = v;
            }
        }
    return t;
}

ObservationTensor sound_all_pairs(const ChannelRealization &ch, const Codebook &f_cb, const Codebook &w_cb,
                                  double rho, double noise_var, std::uint64_t seed,
                                  std::span<const cdouble> pilot)
{
    return observe(coupling_tensor(ch, f_cb, w_cb), rho, noise_var, seed, pilot);
}

double pair_power(const ObservationTensor &t, std::size_t n_w, std::size_t n_f)
{
    if (n_w >= t.n_w || n_f >= t.n_f)
        throw InvalidInput("pair_power: beam index out of range");
    double p = 0.0;
    for (std::size_t k = 0; k < t.n_k; ++k)
        p += std::norm(t.at(n_w, n_f, k));
    return p;
}

namespace
{
void put_double(std::ostream &os, double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}

template <typename T>
void put_le(std::ostream &os, T v)
{
    static_assert(std::endian::native == std::endian::little, "binary dump assumes little-endian host");
    char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    os.write(raw, sizeof(T));
}

template <typename T>
T get_le(std::istream &is)
{
    char raw[sizeof(T)];
    if (!is.read(raw, sizeof(T)))
        throw IoError("read_tensor_binary: truncated stream");
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
}
} // namespace

void write_tensor_csv(const ObservationTensor &t, std::ostream &os)
{
    os << "n_w,n_f,k,re,im\n";
    for (std::size_t w = 0; w < t.n_w; ++w)
        for (std::size_t f = 0; f < t.n_f; ++f)
            for (std::size_t k = 0; k < t.n_k; ++k)
            {
                const auto &v = t.at(w, f, k);
                os << w << ',' << f << ',' << k << ',';
                put_double(os, v.real());
                os << ',';
                put_double(os, v.imag());
                os << '\n';
            }
}

void write_tensor_binary(const ObservationTensor &t, std::ostream &os)
{
    put_le<std::uint64_t>(os, t.n_w);
    put_le<std::uint64_t>(os, t.n_f);
    put_le<std::uint64_t>(os, t.n_k);
    put_le<double>(os, t.rho);
    put_le<double>(os, t.noise_var);
    for (const auto &v : t.y)
    {
        put_le<double>(os, v.real());
        put_le<double>(os, v.imag());
    }
}

ObservationTensor read_tensor_binary(std::istream &is)
{
    ObservationTensor t;
    t.n_w = get_le<std::uint64_t>(is);
    t.n_f = get_le<std::uint64_t>(is);
    t.n_k = get_le<std::uint64_t>(is);
    t.rho = get_le<double>(is);
    t.noise_var = get_le<double>(is);
    t.y.resize(t.n_w * t.n_f * t.n_k);
    for (auto &v : t.y)
    {
        double re = get_le<double>(is);
        double im = get_le<double>(is);
        v = cdouble(re, im);
    }
    return t;
}

} // namespace hbf
