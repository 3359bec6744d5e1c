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

#ifndef HBF_SOUNDING_HPP
#define HBF_SOUNDING_HPP

#include "hbf/array_geometry.hpp"
#include "hbf/channel.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hbf
{

// Coupling coefficients y[n_w][n_f][k] of every trained beam pair.
struct ObservationTensor
{
    std::size_t n_w = 0;
    std::size_t n_f = 0;
    std::size_t n_k = 0;
    std::vector<cdouble> y; // row-major [n_w][n_f][k]
    double rho = 1.0;
    double noise_var = 0.0;

    cdouble &at(std::size_t w, std::size_t f, std::size_t k) { return y[(w * n_f + f) * n_k + k]; }
    const cdouble &at(std::size_t w, std::size_t f, std::size_t k) const { return y[(w * n_f + f) * n_k + k]; }
};

// Noiseless couplings W^H H[k] F for every codebook pair, without the sqrt(rho) factor.
ObservationTensor coupling_tensor(const ChannelRealization &ch, const Codebook &f_cb, const Codebook &w_cb);

// Same, from pre-materialized subcarrier matrices.
ObservationTensor coupling_tensor(std::span<const CMatrix> h, const Codebook &f_cb, const Codebook &w_cb);

// Adds pilots and noise to a noiseless coupling tensor:
// y = s*[k] (sqrt(rho) g s[k]) / |s[k]|^2 + z, z ~ CN(0, noise_var) i.i.d.
// The noise stream of pair (n_w, n_f) is seeded from (seed, n_w, n_f) only.
// An empty pilot means s[k] = 1.
ObservationTensor observe(const ObservationTensor &coupling, double rho, double noise_var,
                          std::uint64_t seed, std::span<const cdouble> pilot = {});

// Exhaustive sweep of all N_W x N_F beam pairs over K subcarriers.
ObservationTensor sound_all_pairs(const ChannelRealization &ch, const Codebook &f_cb, const Codebook &w_cb,
                                  double rho, double noise_var, std::uint64_t seed,
                                  std::span<const cdouble> pilot = {});

// sum_k |y[n_w][n_f][k]|^2
double pair_power(const ObservationTensor &t, std::size_t n_w, std::size_t n_f);

// CSV dump with header "n_w,n_f,k,re,im".
void write_tensor_csv(const ObservationTensor &t, std::ostream &os);

// Little-endian binary dump: u64 n_w, n_f, n_k; f64 rho, noise_var; then re, im pairs.
void write_tensor_binary(const ObservationTensor &t, std::ostream &os);
ObservationTensor read_tensor_binary(std::istream &is);

} // namespace hbf

#endif
