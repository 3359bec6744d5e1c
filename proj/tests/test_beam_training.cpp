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

#include "catch_amalgamated.hpp"
#include "hbf/beam_training.hpp"
#include "hbf/error.hpp"
#include "hbf/sounding.hpp"
#include "oracles.hpp"

#include <set>

// Covered tests:
// - Greedy pair selection: single path, two paths, sort-and-filter oracle, ties, nesting
// - Candidate set sizes and ordering
// - Effective channel estimates against a direct computation
// - Criterion values for identity and random inputs
// - Pair selection against a brute-force loop, evaluation counts, combined index
// - run_algorithm1 on the two-path scenario and on random channels
// - Selection properties: scale invariance, low-SNR agreement, monotonicity in M

using hbf::CMatrix;
using hbf::cdouble;

namespace
{
std::vector<std::vector<double>> power_table(const hbf::ObservationTensor &t)
{
    std::vector<std::vector<double>> p(t.n_w, std::vector<double>(t.n_f));
    for (std::size_t w = 0; w < t.n_w; ++w)
        for (std::size_t f = 0; f < t.n_f; ++f)
            p[w][f] = hbf::pair_power(t, w, f);
    return p;
}

hbf::ObservationTensor random_tensor(std::mt19937_64 &rng, std::size_t n_w, std::size_t n_f, std::size_t n_k)
{
    std::normal_distribution<double> nd;
    hbf::ObservationTensor t;
    t.n_w = n_w;
    t.n_f = n_f;
    t.n_k = n_k;
    t.rho = 1.0;
    for (std::size_t i = 0; i < n_w * n_f * n_k; ++i)
        t.y.emplace_back(nd(rng), nd(rng));
    return t;
}

hbf::ObservationTensor noiseless(const hbf::ChannelRealization &ch, const hbf::Codebook &f_cb,
                                 const hbf::Codebook &w_cb, double rho = 1.0)
{
    return hbf::sound_all_pairs(ch, f_cb, w_cb, rho, 0.0, 0);
}

// Brute-force Eigen/Frobenius criterion straight from the tensor.
double oracle_criterion(const hbf::ObservationTensor &t, const CMatrix &f_cb, const CMatrix &w_cb,
                        const std::vector<std::size_t> &fc, const std::vector<std::size_t> &wc, bool eigen,
                        double gamma, std::size_t n_s)
{
    const CMatrix fw = oracle::inv_sqrt(oracle::columns(f_cb, fc).adjoint() * oracle::columns(f_cb, fc));
    const CMatrix ww = oracle::inv_sqrt(oracle::columns(w_cb, wc).adjoint() * oracle::columns(w_cb, wc));
    double total = 0.0;
    for (std::size_t k = 0; k < t.n_k; ++k)
    {
        CMatrix y(static_cast<Eigen::Index>(wc.size()), static_cast<Eigen::Index>(fc.size()));
        for (std::size_t r = 0; r < wc.size(); ++r)
            for (std::size_t c = 0; c < fc.size(); ++c)
                y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.at(wc[r], fc[c], k) / std::sqrt(t.rho);
        const CMatrix he = ww * y * fw;
        if (eigen)
            total += oracle::eigen_rate(oracle::singular_values(he), gamma, n_s);
        else
            for (Eigen::Index i = 0; i < he.size(); ++i)
                total += std::norm(he(i));
    }
    return total;
}
} // namespace

TEST_CASE("select_initial_pairs - single path, M = 1")
{
    const auto cb = hbf::orthogonal_codebook(8);
    hbf::ChannelRealization ch;
    ch.n_tx = ch.n_rx = 8;
    ch.rays = {{1.0, 0.0, hbf::SteeringAngle(21.0), hbf::SteeringAngle(-37.0)}};
    const auto t = noiseless(ch, cb, cb);
    const auto pairs = hbf::select_initial_pairs(t, 1);
    REQUIRE(pairs.size() == 1);
    const CMatrix h = hbf::materialize(ch, 0);
    double best = -1.0;
    oracle::Pair arg{0, 0};
    for (std::size_t w = 0; w < 8; ++w)
        for (std::size_t f = 0; f < 8; ++f)
        {
            const double v = std::abs(oracle::bilinear(h, cb.matrix, f, cb.matrix, w));
            if (v > best)
            {
                best = v;
                arg = {f, w};
            }
        }
    CHECK(pairs[0].n_f == arg.n_f);
    CHECK(pairs[0].n_w == arg.n_w);
}

TEST_CASE("select_initial_pairs - two-path scenario, M = 2")
{
    const auto cb = hbf::orthogonal_codebook(8);
    const auto t = noiseless(hbf::two_path_scenario(), cb, cb);
    const auto pairs = hbf::select_initial_pairs(t, 2);
    const auto ref = oracle::greedy_pairs(power_table(t), 2);
    REQUIRE(pairs.size() == 2);
    // Frozen from the exhaustive pair-power oracle: 0 deg / 0 deg, then 30 deg / -14.48 deg.
    CHECK(pairs[0] == hbf::BeamPair{4, 4});
    CHECK(pairs[1] == hbf::BeamPair{6, 3});
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(pairs[i].n_f == ref[i].n_f);
        CHECK(pairs[i].n_w == ref[i].n_w);
    }
}

TEST_CASE("select_initial_pairs - sort-and-filter oracle on random tensors")
{
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 100; ++rep)
    {
        const std::size_t n_w = 2 + rng() % 10, n_f = 2 + rng() % 10;
        const auto t = random_tensor(rng, n_w, n_f, 1 + rng() % 4);
        const std::size_t m = 1 + rng() % std::min(n_w, n_f);
        const auto pairs = hbf::select_initial_pairs(t, m);
        const auto ref = oracle::greedy_pairs(power_table(t), m);
        REQUIRE(pairs.size() == m);
        std::set<std::size_t> fs, ws;
        for (std::size_t i = 0; i < m; ++i)
        {
            CHECK(pairs[i].n_f == ref[i].n_f);
            CHECK(pairs[i].n_w == ref[i].n_w);
            fs.insert(pairs[i].n_f);
            ws.insert(pairs[i].n_w);
        }
        CHECK(fs.size() == m);
        CHECK(ws.size() == m);
        // Nesting
        if (m > 1)
        {
            const auto shorter = hbf::select_initial_pairs(t, m - 1);
            CHECK(std::equal(shorter.begin(), shorter.end(), pairs.begin()));
        }
    }
}

TEST_CASE("select_initial_pairs - ties and limits")
{
    hbf::ObservationTensor t;
    t.n_w = 3;
    t.n_f = 3;
    t.n_k = 1;
    t.y.assign(9, cdouble(1.0, 0.0));
    auto pairs = hbf::select_initial_pairs(t, 3);
    CHECK(pairs[0] == hbf::BeamPair{0, 0});
    CHECK(pairs[1] == hbf::BeamPair{1, 1});
    CHECK(pairs[2] == hbf::BeamPair{2, 2});

    t.at(2, 1, 0) = 2.0;
    t.at(1, 2, 0) = 2.0;
    pairs = hbf::select_initial_pairs(t, 2);
    CHECK(pairs[0] == hbf::BeamPair{2, 1}); // (n_w = 1, n_f = 2) precedes (n_w = 2, n_f = 1)
    CHECK(pairs[1] == hbf::BeamPair{1, 2});

    CHECK_THROWS_AS(hbf::select_initial_pairs(t, 4), hbf::InvalidInput);
    CHECK_THROWS_AS(hbf::select_initial_pairs(t, 0), hbf::InvalidInput);
}

TEST_CASE("build_candidate_sets - sizes and order")
{
    const std::vector<hbf::BeamPair> pairs = {{7, 2}, {1, 5}, {4, 0}, {3, 6}};
    auto cs = hbf::build_candidate_sets(pairs, 2);
    CHECK(cs.i_f_count() == 6);
    CHECK(cs.i_w_count() == 6);
    CHECK(cs.i_f_count() * cs.i_w_count() == 36);
    const std::vector<std::vector<std::size_t>> f_expect = {{1, 3}, {1, 4}, {1, 7}, {3, 4}, {3, 7}, {4, 7}};
    const std::vector<std::vector<std::size_t>> w_expect = {{0, 2}, {0, 5}, {0, 6}, {2, 5}, {2, 6}, {5, 6}};
    CHECK(cs.f_combos == f_expect);
    CHECK(cs.w_combos == w_expect);
    CHECK(std::is_sorted(cs.f_combos.begin(), cs.f_combos.end()));
    CHECK(cs.selected_pairs == pairs);

    cs = hbf::build_candidate_sets(std::span(pairs).first(2), 2);
    CHECK(cs.i_f_count() == 1);
    CHECK(cs.i_w_count() == 1);
    cs = hbf::build_candidate_sets(std::span(pairs).first(3), 2);
    CHECK(cs.i_f_count() == 3);
    CHECK(cs.i_w_count() == 3);
    CHECK_THROWS_AS(hbf::build_candidate_sets(std::span(pairs).first(1), 2), hbf::InvalidInput);
}

TEST_CASE("effective_channel_estimate - orthonormal codebooks")
{
    const auto cb = hbf::orthogonal_codebook(8);
    hbf::ClusterProfile p;
    const auto ch = hbf::generate_cluster_channel(p, {8, 8, 4}, 52);
    const auto t = noiseless(ch, cb, cb, 3.0);
    const std::vector<std::size_t> fc = {1, 6}, wc = {0, 3};
    const auto est = hbf::effective_channel_estimate(t, cb, cb, fc, wc);
    REQUIRE(est.per_k.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
    {
        const CMatrix direct = oracle::columns(cb.matrix, wc).adjoint() * hbf::materialize(ch, k) * oracle::columns(cb.matrix, fc);
        CHECK((est.per_k[k] - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("effective_channel_estimate - oversampled codebooks against direct computation")
{
    const auto f_cb = hbf::sine_grid_codebook(8, 16);
    const auto w_cb = hbf::sine_grid_codebook(6, 12);
    hbf::ClusterProfile p;
    const auto ch = hbf::generate_cluster_channel(p, {8, 6, 3}, 53);
    const auto t = noiseless(ch, f_cb, w_cb, 0.7);
    std::mt19937_64 rng(54);
    for (int rep = 0; rep < 20; ++rep)
    {
        const std::size_t n_rf = 2 + rep % 2;
        auto fcs = oracle::subsets(16, n_rf);
        auto wcs = oracle::subsets(12, n_rf);
        const auto &fc = fcs[rng() % fcs.size()];
        const auto &wc = wcs[rng() % wcs.size()];
        const auto est = hbf::effective_channel_estimate(t, f_cb, w_cb, fc, wc);
        for (std::size_t k = 0; k < 3; ++k)
        {
            const CMatrix ref = oracle::effective_channel(hbf::materialize(ch, k), oracle::columns(f_cb.matrix, fc),
                                                          oracle::columns(w_cb.matrix, wc));
            CHECK((est.per_k[k] - ref).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("effective_channel_estimate - zero channel and collinear beams")
{
    const auto cb = hbf::orthogonal_codebook(4);
    hbf::ChannelRealization ch;
    ch.n_tx = ch.n_rx = 4;
    const auto t = noiseless(ch, cb, cb);
    const std::vector<std::size_t> c = {0, 2};
    for (const auto &m : hbf::effective_channel_estimate(t, cb, cb, c, c).per_k)
        CHECK(m.cwiseAbs().maxCoeff() == 0.0);

    const hbf::SteeringAngle same[] = {hbf::SteeringAngle(10.0), hbf::SteeringAngle(10.0), hbf::SteeringAngle(40.0)};
    const auto dup = hbf::custom_codebook(4, same);
    const auto t2 = noiseless(ch, dup, dup);
    const std::vector<std::size_t> bad = {0, 1};
    CHECK_THROWS_AS(hbf::effective_channel_estimate(t2, dup, dup, bad, bad), hbf::NearSingular);
}

TEST_CASE("criterion_value - identity per subcarrier")
{
    hbf::EffectiveChannelEstimate est;
    est.per_k = {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
    CHECK(hbf::criterion_value(est, hbf::Criterion::Eigen, 1.0, 2) == Catch::Approx(4.0).margin(1e-12));
    CHECK(hbf::criterion_value(est, hbf::Criterion::Frobenius, 1.0, 2) == Catch::Approx(4.0).margin(1e-12));
    CHECK_THROWS_AS(hbf::criterion_value(est, hbf::Criterion::Eigen, 0.0, 2), hbf::InvalidInput);
    CHECK_NOTHROW(hbf::criterion_value(est, hbf::Criterion::Frobenius, 0.0, 2));
}

TEST_CASE("criterion_value - random matrices against SVD oracle")
{
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 50; ++rep)
    {
        hbf::EffectiveChannelEstimate est;
        for (int k = 0; k < 4; ++k)
            est.per_k.push_back(oracle::random_matrix(rng, 2, 2));
        const double gamma = 0.1 + 0.3 * rep;
        double ref = 0.0, fro = 0.0, sig2 = 0.0;
        for (const auto &m : est.per_k)
        {
            const auto s = oracle::singular_values(m);
            ref += oracle::eigen_rate(s, gamma, 2);
            for (double v : s)
                sig2 += v * v;
            fro += m.squaredNorm();
        }
        CHECK(std::abs(hbf::criterion_value(est, hbf::Criterion::Eigen, gamma, 2) - ref) < 1e-9);
        CHECK(std::abs(hbf::criterion_value(est, hbf::Criterion::Frobenius, gamma, 2) - fro) < 1e-12 * fro);
        CHECK(std::abs(fro - sig2) < 1e-9 * fro);
    }
}

TEST_CASE("select_best_pair - single candidate, counts, brute force")
{
    const auto cb = hbf::orthogonal_codebook(8);
    hbf::ClusterProfile p;
    std::mt19937_64 rng(56);
    for (int rep = 0; rep < 30; ++rep)
    {
        const auto ch = hbf::generate_cluster_channel(p, {8, 8, 4}, rng());
        auto t = hbf::sound_all_pairs(ch, cb, cb, 2.0, rep % 2 ? 1.0 : 0.0, rng());
        const bool eigen = rep % 3 != 0;
        const auto mode = eigen ? hbf::Criterion::Eigen : hbf::Criterion::Frobenius;

        const auto pairs = hbf::select_initial_pairs(t, 4);
        const auto cs = hbf::build_candidate_sets(pairs, 2);
        const auto sel = hbf::select_best_pair(cs, t, cb, cb, mode, 1.0, 2);
        CHECK(sel.evaluations == 36);

        double best = -1.0;
        std::size_t bi = 0;
        for (std::size_t i_f = 0; i_f < cs.i_f_count(); ++i_f)
            for (std::size_t i_w = 0; i_w < cs.i_w_count(); ++i_w)
            {
                const double v = oracle_criterion(t, cb.matrix, cb.matrix, cs.f_combos[i_f], cs.w_combos[i_w], eigen, 1.0, 2);
                if (v > best + 1e-12)
                {
                    best = v;
                    bi = i_f * cs.i_w_count() + i_w;
                }
            }
        CHECK(sel.estimate.index == bi);
        CHECK(sel.estimate.index == sel.i_f * cs.i_w_count() + sel.i_w);
        CHECK(sel.value == Catch::Approx(best).epsilon(1e-10));

        const auto one = hbf::build_candidate_sets(std::span(pairs).first(2), 2);
        const auto s1 = hbf::select_best_pair(one, t, cb, cb, mode, 1.0, 2);
        CHECK(s1.evaluations == 1);
        CHECK(s1.i_f == 0);
        CHECK(s1.i_w == 0);
    }
}

TEST_CASE("run_algorithm1 - two-path scenario")
{
    const auto cb = hbf::orthogonal_codebook(8);
    const auto t = noiseless(hbf::two_path_scenario(), cb, cb, 2.0 * std::pow(10.0, 0.5));
    hbf::Algorithm1Params p{4, 2, 2, hbf::Criterion::Eigen, std::pow(10.0, 0.5)};
    const auto dominant = hbf::run_algorithm1(t, cb, cb, p);
    // Both beams adjacent to the strong 5 deg / 5 deg path.
    CHECK(dominant.f_beams == std::vector<std::size_t>{4, 5});
    CHECK(dominant.w_beams == std::vector<std::size_t>{4, 5});

    p.m = 2;
    const auto greedy = hbf::run_algorithm1(t, cb, cb, p);
    CHECK(greedy.f_beams == std::vector<std::size_t>{4, 6});
    CHECK(greedy.w_beams == std::vector<std::size_t>{3, 4});
}

TEST_CASE("run_algorithm1 - M = N_RF returns the greedy beams")
{
    hbf::ClusterProfile prof;
    const auto cb = hbf::orthogonal_codebook(16);
    std::mt19937_64 rng(57);
    for (int rep = 0; rep < 10; ++rep)
    {
        const auto ch = hbf::generate_cluster_channel(prof, {16, 16, 8}, rng());
        const auto t = hbf::sound_all_pairs(ch, cb, cb, 1.0, 1.0, rng());
        for (std::size_t n_rf : {1u, 2u, 3u})
        {
            const auto bf = hbf::run_algorithm1(t, cb, cb, {n_rf, n_rf, 1, hbf::Criterion::Eigen, 1.0});
            const auto pairs = hbf::select_initial_pairs(t, n_rf);
            std::vector<std::size_t> f, w;
            for (const auto &pr : pairs)
            {
                f.push_back(pr.n_f);
                w.push_back(pr.n_w);
            }
            std::sort(f.begin(), f.end());
            std::sort(w.begin(), w.end());
            CHECK(bf.f_beams == f);
            CHECK(bf.w_beams == w);
            CHECK((bf.f_p - oracle::columns(cb.matrix, f)).norm() == 0.0);
            CHECK((bf.w_p - oracle::columns(cb.matrix, w)).norm() == 0.0);
        }
    }
}

TEST_CASE("run_algorithm1 - determinism and parameter checks")
{
    hbf::ClusterProfile prof;
    const auto cb = hbf::orthogonal_codebook(8);
    const auto ch = hbf::generate_cluster_channel(prof, {8, 8, 4}, 58);
    const auto t = hbf::sound_all_pairs(ch, cb, cb, 1.0, 1.0, 59);
    const hbf::Algorithm1Params p{3, 2, 2, hbf::Criterion::Eigen, 1.0};
    const auto a = hbf::run_algorithm1(t, cb, cb, p);
    const auto b = hbf::run_algorithm1(t, cb, cb, p);
    CHECK(a.f_beams == b.f_beams);
    CHECK(a.w_beams == b.w_beams);
    REQUIRE(a.f_b.size() == b.f_b.size());
    for (std::size_t k = 0; k < a.f_b.size(); ++k)
    {
        CHECK(a.f_b[k] == b.f_b[k]);
        CHECK(a.w_b[k] == b.w_b[k]);
    }
    CHECK_THROWS_AS(hbf::run_algorithm1(t, cb, cb, {3, 2, 3, hbf::Criterion::Eigen, 1.0}), hbf::InvalidInput);
    CHECK_THROWS_AS(hbf::run_algorithm1(t, cb, cb, {1, 2, 2, hbf::Criterion::Eigen, 1.0}), hbf::InvalidInput);
    CHECK_THROWS_AS(hbf::run_algorithm1(t, cb, cb, {9, 2, 2, hbf::Criterion::Eigen, 1.0}), hbf::InvalidInput);
}

TEST_CASE("selection properties - scale invariance of the Frobenius mode")
{
    std::mt19937_64 rng(60);
    const auto cb = hbf::orthogonal_codebook(8);
    for (int rep = 0; rep < 30; ++rep)
    {
        auto t = random_tensor(rng, 8, 8, 3);
        const hbf::Algorithm1Params p{5, 2, 2, hbf::Criterion::Frobenius, 1.0};
        const auto a = hbf::run_algorithm1(t, cb, cb, p);
        for (auto &v : t.y)
            v *= 37.5;
        const auto b = hbf::run_algorithm1(t, cb, cb, p);
        CHECK(a.f_beams == b.f_beams);
        CHECK(a.w_beams == b.w_beams);
    }
}

TEST_CASE("selection properties - low-SNR agreement of the two criteria")
{
    std::mt19937_64 rng(61);
    const auto cb = hbf::orthogonal_codebook(8);
    constexpr double gamma = 1e-6;
    std::size_t checked = 0;
    for (int rep = 0; rep < 200; ++rep)
    {
        const auto t = random_tensor(rng, 8, 8, 2);
        const auto cs = hbf::build_candidate_sets(hbf::select_initial_pairs(t, 4), 2);
        std::vector<double> values;
        for (const auto &fc : cs.f_combos)
            for (const auto &wc : cs.w_combos)
                values.push_back(hbf::criterion_value(hbf::effective_channel_estimate(t, cb, cb, fc, wc),
                                                      hbf::Criterion::Eigen, gamma, 2));
        std::sort(values.rbegin(), values.rend());
        if ((values[0] - values[1]) / values[0] <= 1e-3)
            continue;
        ++checked;
        const auto e = hbf::select_best_pair(cs, t, cb, cb, hbf::Criterion::Eigen, gamma, 2);
        const auto f = hbf::select_best_pair(cs, t, cb, cb, hbf::Criterion::Frobenius, gamma, 2);
        CHECK(e.estimate.index == f.estimate.index);
    }
    CHECK(checked > 150);
}

TEST_CASE("selection properties - noiseless Eigen throughput is non-decreasing in M")
{
    hbf::ClusterProfile prof;
    const auto cb = hbf::orthogonal_codebook(8);
    std::mt19937_64 rng(62);
    for (int rep = 0; rep < 20; ++rep)
    {
        const auto ch = hbf::generate_cluster_channel(prof, {8, 8, 8}, rng());
        const auto h = hbf::materialize_all(ch);
        const double gamma = 1.0, rho = 2.0;
        const auto t = noiseless(ch, cb, cb, rho);
        double prev = -1.0;
        for (std::size_t m = 2; m <= 8; ++m)
        {
            const auto bf = hbf::run_algorithm1(t, cb, cb, {m, 2, 2, hbf::Criterion::Eigen, gamma});
            const double r = hbf::average_throughput(h, bf, rho, 1.0);
            CHECK(r >= prev - 1e-9);
            prev = r;
        }
    }
}
