// SPDX-License-Identifier: Apache-2.0
//
// secia: secure interference alignment by rank minimization
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

#include <secia/alignment_spaces.hpp>
#include <secia/metrics.hpp>

#include <gtest/gtest.h>

#include "oracles/rate_oracle.hpp"

#include <cmath>

using namespace secia;

namespace {

using oracle::logdet_rate;

ChannelSet small_channels(int K, int Nt, int Nr, int Nre, std::uint64_t seed) {
    return generate_channels(make_config(K, Nt, Nr, Nre, std::min(Nt, Nr) / 2), seed);
}

} // namespace

TEST(UserRate, IdentityChannelClosedForm) {
    for (int d : {1, 2, 3}) {
        const double sigma2 = 0.7;
        const double Pt = d * sigma2;
        ChannelSet ch;
        ch.link = {{cmat::Identity(4, 4)}};
        ch.eve = {cmat::Zero(2, 4)};
        PrecoderSet p;
        p.F = {cmat::Identity(4, d) * std::sqrt(Pt / d)};
        EXPECT_NEAR(user_rate(ch, p, 0, sigma2), d, 1e-9);
        EXPECT_NEAR(user_rate(ch, p, 0, sigma2), d * std::log2(2.0), 1e-9);
    }
}

TEST(UserRate, ZeroPrecoder) {
    auto ch = small_channels(2, 4, 4, 2, 1);
    PrecoderSet p;
    p.F = {cmat::Zero(4, 2), cmat::Identity(4, 2)};
    EXPECT_EQ(user_rate(ch, p, 0, 1.0), 0.0);
}

TEST(UserRate, MatchesEigenvalueOracle) {
    for (std::uint64_t seed = 2; seed < 12; ++seed) {
        const auto ch = small_channels(2, 4, 4, 3, seed);
        auto gen = rng::stream(seed, 0, "prec");
        PrecoderSet p;
        for (int l = 0; l < 2; ++l)
            p.F.push_back(complex_gaussian(4, 2, gen) * (0.5 + seed));
        for (int k = 0; k < 2; ++k) {
            EXPECT_NEAR(user_rate(ch, p, k, 1.0), logdet_rate(ch.link[k], p.F, k, 1.0), 1e-9);
            EXPECT_NEAR(leakage_rate(ch, p, k, 0.5), logdet_rate(ch.eve, p.F, k, 0.5), 1e-9);
        }
    }
}

TEST(UserRate, FullSizeMatchesOracle) {
    const auto c = make_config(3, 18, 12, 9, 3, 1000.0);
    const auto ch = generate_channels(c, 13);
    const auto p = random_precoders(c, 14);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(user_rate(ch, p, k, 1.0), logdet_rate(ch.link[k], p.F, k, 1.0), 1e-9);
        EXPECT_NEAR(leakage_rate(ch, p, k, 1.0), logdet_rate(ch.eve, p.F, k, 1.0), 1e-9);
    }
}

TEST(UserRate, IndexChecked) {
    const auto ch = small_channels(2, 4, 4, 2, 15);
    PrecoderSet p;
    p.F = {cmat::Identity(4, 2), cmat::Identity(4, 2)};
    EXPECT_THROW(user_rate(ch, p, 2, 1.0), std::out_of_range);
    EXPECT_THROW(leakage_rate(ch, p, -1, 1.0), std::out_of_range);
}

TEST(UserRate, IllConditionedThrows) {
    ChannelSet ch;
    ch.link = {{cmat::Identity(2, 2), cmat::Identity(2, 2)}, {cmat::Identity(2, 2), cmat::Identity(2, 2)}};
    ch.eve = {cmat::Zero(2, 2), cmat::Zero(2, 2)};
    PrecoderSet p;
    p.F = {cmat::Identity(2, 1), cmat::Identity(2, 1) * std::nan("")};
    EXPECT_THROW(user_rate(ch, p, 0, 1.0), rate_error);
}

TEST(LeakageRate, ZeroEavesdropperChannel) {
    auto ch = small_channels(2, 4, 4, 3, 16);
    ch.eve[1].setZero();
    PrecoderSet p;
    p.F = {cmat::Identity(4, 2), cmat::Identity(4, 2)};
    EXPECT_EQ(leakage_rate(ch, p, 1, 1.0), 0.0);
}

TEST(LeakageRate, NullSpaceAlignedIsZero) {
    // every F in the null space of the eavesdropper channels: S_e = 0
    const auto c = make_config(3, 18, 12, 9, 3);
    const auto ch = generate_channels(c, 17);
    PrecoderSet p;
    for (int l = 0; l < 3; ++l) {
        Eigen::JacobiSVD<cmat> svd(ch.eve[l], Eigen::ComputeFullV);
        p.F.push_back(svd.matrixV().rightCols(3));
    }
    EXPECT_LT(wiretap_matrix(ch.eve, p.F).norm(), 1e-12);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(leakage_rate(ch, p, k, 1.0), 0.0, 1e-12);
}

TEST(SecrecySumRate, Clamp) {
    const auto r = assemble_rate_report({2, 2, 2}, {3, 3, 3});
    for (double s : r.per_user_secrecy)
        EXPECT_EQ(s, 0.0);
    EXPECT_EQ(r.ssr, 0.0);
    EXPECT_THROW(assemble_rate_report({1}, {1, 2}), dimension_error);
}

TEST(SecrecySumRate, ZeroEavesdropperGivesSumRate) {
    auto ch = small_channels(3, 6, 6, 3, 18);
    for (auto &e : ch.eve)
        e.setZero();
    const auto p = random_precoders(make_config(3, 6, 6, 3, 3, 10.0), 19);
    const auto r = secrecy_sum_rate(ch, p, 1.0);
    double sum = 0;
    for (int k = 0; k < 3; ++k)
        sum += user_rate(ch, p, k, 1.0);
    EXPECT_NEAR(r.ssr, sum, 1e-12);
}

TEST(SecrecySumRate, Recomposition) {
    const auto c = make_config(3, 15, 15, 9, 3, 100.0);
    const auto ch = generate_channels(c, 20);
    const auto p = random_precoders(c, 21);
    const auto r = secrecy_sum_rate(ch, p, 1.0);
    double want = 0;
    for (int k = 0; k < 3; ++k) {
        const double diff = logdet_rate(ch.link[k], p.F, k, 1.0) - logdet_rate(ch.eve, p.F, k, 1.0);
        want += diff > 0 ? diff : 0.0;
        EXPECT_GE(r.per_user_secrecy[k], 0.0);
        EXPECT_GE(r.per_user_rate[k], 0.0);
    }
    EXPECT_NEAR(r.ssr, want, 1e-9);
}

TEST(SecrecySumRate, PhaseInvariance) {
    const auto c = make_config(3, 15, 15, 9, 3, 100.0);
    const auto ch = generate_channels(c, 22);
    const auto p = random_precoders(c, 23);
    PrecoderSet q = p;
    for (auto &F : q.F)
        F *= std::polar(1.0, 0.7);
    EXPECT_NEAR(secrecy_sum_rate(ch, p, 1.0).ssr, secrecy_sum_rate(ch, q, 1.0).ssr, 1e-9);
}

TEST(SecrecySumRate, EavesdropperNoiseUsed) {
    const auto c = make_config(3, 15, 15, 9, 3, 100.0);
    const auto ch = generate_channels(c, 24);
    const auto p = random_precoders(c, 25);
    const auto a = secrecy_sum_rate(ch, p, 1.0, 1.0), b = secrecy_sum_rate(ch, p, 1.0, 10.0);
    for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(a.per_user_rate[k], b.per_user_rate[k]);
        EXPECT_LT(b.per_user_leakage[k], a.per_user_leakage[k]);
    }
    EXPECT_GE(b.ssr, a.ssr);
}
