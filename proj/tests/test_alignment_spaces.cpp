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

#include <gtest/gtest.h>

using namespace secia;

namespace {

// elementwise triple product, no Eigen products
cmat triple(const cmat &A, const cmat &B, const cmat &C) {
    cmat out = cmat::Zero(A.cols(), C.cols());
    for (Eigen::Index i = 0; i < A.cols(); ++i)
        for (Eigen::Index j = 0; j < C.cols(); ++j) {
            cplx s = 0;
            for (Eigen::Index p = 0; p < A.rows(); ++p)
                for (Eigen::Index q = 0; q < B.cols(); ++q)
                    s += std::conj(A(p, i)) * B(p, q) * C(q, j);
            out(i, j) = s;
        }
    return out;
}

cmat product(const cmat &B, const cmat &C) {
    cmat out = cmat::Zero(B.rows(), C.cols());
    for (Eigen::Index i = 0; i < B.rows(); ++i)
        for (Eigen::Index j = 0; j < C.cols(); ++j)
            for (Eigen::Index q = 0; q < B.cols(); ++q)
                out(i, j) += B(i, q) * C(q, j);
    return out;
}

struct Instance {
    SystemConfig c;
    ChannelSet ch;
    PrecoderSet p;
    ReceiverSet r;
};

Instance random_instance(int K, std::uint64_t seed) {
    Instance in;
    in.c = make_config(K, 18, 12, 9, 3);
    in.ch = generate_channels(in.c, seed);
    in.p = random_precoders(in.c, seed + 1);
    auto gen = rng::stream(seed, 0, "receivers");
    for (int k = 0; k < K; ++k)
        in.r.W.push_back(orthonormalize(complex_gaussian(12, 3, gen), 1.0));
    return in;
}

} // namespace

TEST(DesiredSignal, IdentityChannel) {
    const double Pt = 6.0;
    const int d = 3;
    const cmat I = cmat::Identity(5, 5);
    const cmat W = I.leftCols(d);
    const cmat F = W * std::sqrt(Pt / d);
    EXPECT_LT((desired_signal_matrix(W, I, F) - std::sqrt(Pt / d) * cmat::Identity(d, d)).norm(), 1e-14);
}

TEST(DesiredSignal, ZeroReceiver) {
    auto gen = rng::stream(1, 0, "t");
    const cmat H = complex_gaussian(12, 18, gen), F = complex_gaussian(18, 3, gen);
    EXPECT_EQ(desired_signal_matrix(cmat::Zero(12, 3), H, F).norm(), 0.0);
}

TEST(DesiredSignal, MatchesElementwiseOracle) {
    auto gen = rng::stream(2, 0, "t");
    const cmat W = complex_gaussian(12, 3, gen), H = complex_gaussian(12, 18, gen), F = complex_gaussian(18, 3, gen);
    EXPECT_LT((desired_signal_matrix(W, H, F) - triple(W, H, F)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DesiredSignal, ShapeMismatch) {
    EXPECT_THROW(desired_signal_matrix(cmat::Zero(11, 3), cmat::Zero(12, 18), cmat::Zero(18, 3)), dimension_error);
    EXPECT_THROW(desired_signal_matrix(cmat::Zero(12, 3), cmat::Zero(12, 18), cmat::Zero(17, 3)), dimension_error);
}

TEST(Interference, ShapeAndZeroCross) {
    auto in = random_instance(3, 10);
    const cmat J = interference_matrix(in.r.W[0], 0, in.ch.link[0], in.p.F);
    EXPECT_EQ(J.rows(), 3);
    EXPECT_EQ(J.cols(), 6);
    for (int l = 1; l < 3; ++l)
        in.ch.link[0][l].setZero();
    EXPECT_EQ(interference_matrix(in.r.W[0], 0, in.ch.link[0], in.p.F).norm(), 0.0);
}

TEST(Interference, BlockOrderAscending) {
    const auto in = random_instance(3, 11);
    const cmat J = interference_matrix(in.r.W[1], 1, in.ch.link[1], in.p.F);
    EXPECT_LT((J.leftCols(3) - triple(in.r.W[1], in.ch.link[1][0], in.p.F[0])).norm(), 1e-12);
    EXPECT_LT((J.rightCols(3) - triple(in.r.W[1], in.ch.link[1][2], in.p.F[2])).norm(), 1e-12);
}

TEST(Interference, TwoUsersSingleBlock) {
    const auto in = random_instance(2, 12);
    const cmat J = interference_matrix(in.r.W[0], 0, in.ch.link[0], in.p.F);
    ASSERT_EQ(J.cols(), 3);
    EXPECT_LT((J - triple(in.r.W[0], in.ch.link[0][1], in.p.F[1])).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Interference, ShapeMismatch) {
    const auto in = random_instance(3, 13);
    auto F = in.p.F;
    F[2] = cmat::Zero(17, 3);
    EXPECT_THROW(interference_matrix(in.r.W[0], 0, in.ch.link[0], F), dimension_error);
    EXPECT_THROW(interference_matrix(in.r.W[0], 3, in.ch.link[0], in.p.F), dimension_error);
}

TEST(Wiretap, ShapeZeroAndBlocks) {
    auto in = random_instance(3, 14);
    const cmat Se = wiretap_matrix(in.ch.eve, in.p.F);
    EXPECT_EQ(Se.rows(), 9);
    EXPECT_EQ(Se.cols(), 9);
    for (int l = 0; l < 3; ++l)
        EXPECT_LT((Se.middleCols(3 * l, 3) - product(in.ch.eve[l], in.p.F[l])).cwiseAbs().maxCoeff(), 1e-12);
    for (auto &e : in.ch.eve)
        e.setZero();
    EXPECT_EQ(wiretap_matrix(in.ch.eve, in.p.F).norm(), 0.0);
}

TEST(NumericalRank, Cases) {
    EXPECT_EQ(numerical_rank(cmat::Zero(3, 4)), 0);
    cmat d = cmat::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 1e-9;
    EXPECT_EQ(numerical_rank(d, 1e-6), 1);
    auto gen = rng::stream(5, 0, "t");
    EXPECT_EQ(numerical_rank(complex_gaussian(3, 6, gen), 1e-6), 3);
    const cmat a = complex_gaussian(6, 2, gen);
    EXPECT_EQ(numerical_rank(cmat(a * a.adjoint())), 2);
    EXPECT_THROW(numerical_rank(d, 0.0), std::invalid_argument);
    EXPECT_THROW(numerical_rank(d, 1.0), std::invalid_argument);
}

TEST(LeakagePowers, Cases) {
    AlignmentState s;
    for (int k = 0; k < 3; ++k)
        s.J.push_back(cmat::Zero(3, 6));
    s.Se = cmat::Zero(9, 9);
    auto lp = leakage_powers(s);
    EXPECT_EQ(lp.interference, 0.0);
    EXPECT_EQ(lp.wiretap, 0.0);
    s.J[0].leftCols(3) = cmat::Identity(3, 3);
    lp = leakage_powers(s);
    EXPECT_DOUBLE_EQ(lp.interference, 3.0);
    EXPECT_EQ(lp.wiretap, 0.0);

    const auto in = random_instance(3, 15);
    const auto st = build_alignment_state(in.ch, in.p, in.r);
    double want_i = 0, want_w = 0;
    for (const auto &J : st.J)
        for (Eigen::Index i = 0; i < J.size(); ++i)
            want_i += std::norm(J.data()[i]);
    for (Eigen::Index i = 0; i < st.Se.size(); ++i)
        want_w += std::norm(st.Se.data()[i]);
    lp = leakage_powers(st);
    EXPECT_NEAR(lp.interference, want_i, 1e-12 * want_i);
    EXPECT_NEAR(lp.wiretap, want_w, 1e-12 * want_w);
}

TEST(AlignmentState, UnitaryInvarianceAndWIndependence) {
    const auto in = random_instance(3, 16);
    const auto a = build_alignment_state(in.ch, in.p, in.r);
    auto gen = rng::stream(16, 1, "unitary");
    ReceiverSet rot = in.r;
    for (auto &W : rot.W)
        W = W * orthonormalize(complex_gaussian(3, 3, gen), 1.0);
    const auto b = build_alignment_state(in.ch, in.p, rot);
    for (int k = 0; k < 3; ++k) {
        EXPECT_LT((singular_values(a.S[k]) - singular_values(b.S[k])).norm(), 1e-10);
        EXPECT_LT((singular_values(a.J[k]) - singular_values(b.J[k])).norm(), 1e-10);
        EXPECT_EQ(numerical_rank(a.J[k]), numerical_rank(b.J[k]));
    }
    EXPECT_TRUE(a.Se == b.Se);
    EXPECT_NEAR(alignment_objective(a), alignment_objective(b), 1e-10);
}

TEST(AlignmentObjective, SumOfNuclearNorms) {
    const auto in = random_instance(3, 17);
    const auto s = build_alignment_state(in.ch, in.p, in.r);
    double want = singular_values(s.Se).sum();
    for (const auto &J : s.J)
        want += Eigen::BDCSVD<cmat>(J).singularValues().sum();
    EXPECT_NEAR(alignment_objective(s), want, 1e-10);
}
