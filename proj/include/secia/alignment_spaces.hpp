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

#pragma once

#include "linalg.hpp"
#include "system_model.hpp"

#include <vector>

namespace secia {

/// S_k = W_k^H H_kk F_k (d x d).
inline cmat desired_signal_matrix(const cmat &W, const cmat &Hkk, const cmat &F) {
    if (W.rows() != Hkk.rows() || Hkk.cols() != F.rows())
        throw dimension_error("desired_signal_matrix: W " + shape_str(W) + ", H " + shape_str(Hkk) +
                              ", F " + shape_str(F));
    return W.adjoint() * Hkk * F;
}

/// J_k = W_k^H [H_kl F_l]_{l != k}, blocks in ascending l.
/// `channels_to_k[l]` is H_{k,l}; `precoders[l]` is F_l; index k is skipped.
inline cmat interference_matrix(const cmat &W, int k, const std::vector<cmat> &channels_to_k,
                                const std::vector<cmat> &precoders) {
    const int K = static_cast<int>(precoders.size());
    if (static_cast<int>(channels_to_k.size()) != K || k < 0 || k >= K)
        throw dimension_error("interference_matrix: inconsistent user count");
    const Eigen::Index d = W.cols();
    cmat J(d, d * (K - 1));
    Eigen::Index col = 0;
    for (int l = 0; l < K; ++l) {
        if (l == k)
            continue;
        const cmat &H = channels_to_k[l];
        const cmat &F = precoders[l];
        if (H.rows() != W.rows() || H.cols() != F.rows() || F.cols() != d)
            throw dimension_error("interference_matrix: block " + std::to_string(l) + " does not conform");
        J.middleCols(col, d) = W.adjoint() * H * F;
        col += d;
    }
    return J;
}

/// S_e = [H_{K+1,l} F_l]_{l=1..K}.
inline cmat wiretap_matrix(const std::vector<cmat> &eve, const std::vector<cmat> &precoders) {
    if (eve.size() != precoders.size() || eve.empty())
        throw dimension_error("wiretap_matrix: inconsistent user count");
    const Eigen::Index rows = eve.front().rows();
    Eigen::Index cols = 0;
    for (const auto &F : precoders)
        cols += F.cols();
    cmat Se(rows, cols);
    Eigen::Index col = 0;
    for (std::size_t l = 0; l < eve.size(); ++l) {
        if (eve[l].rows() != rows || eve[l].cols() != precoders[l].rows())
            throw dimension_error("wiretap_matrix: block " + std::to_string(l) + " does not conform");
        Se.middleCols(col, precoders[l].cols()) = eve[l] * precoders[l];
        col += precoders[l].cols();
    }
    return Se;
}

/// Count of singular values above rel_tol * sigma_1; 0 for the zero matrix.
inline int numerical_rank(const cmat &m, double rel_tol = 1e-6) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("numerical_rank: rel_tol must lie in (0, 1)");
    const rvec sv = singular_values(m);
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    return static_cast<int>((sv.array() > rel_tol * sv(0)).count());
}

struct AlignmentState {
    std::vector<cmat> S; // K desired-signal matrices, d x d
    std::vector<cmat> J; // K interference matrices, d x (K-1)d
    cmat Se;             // Nre x Kd
};

inline AlignmentState build_alignment_state(const ChannelSet &ch, const PrecoderSet &p, const ReceiverSet &r) {
    const int K = ch.users();
    if (static_cast<int>(p.F.size()) != K || static_cast<int>(r.W.size()) != K)
        throw dimension_error("build_alignment_state: expected " + std::to_string(K) + " users");
    AlignmentState s;
    for (int k = 0; k < K; ++k) {
        s.S.push_back(desired_signal_matrix(r.W[k], ch.link[k][k], p.F[k]));
        s.J.push_back(interference_matrix(r.W[k], k, ch.link[k], p.F));
    }
    s.Se = wiretap_matrix(ch.eve, p.F);
    return s;
}

struct LeakagePowers {
    double interference = 0.0; // sum_k ||J_k||_F^2
    double wiretap = 0.0;      // ||S_e||_F^2
};

inline LeakagePowers leakage_powers(const AlignmentState &s) {
    LeakagePowers out;
    for (const auto &J : s.J)
        out.interference += J.squaredNorm();
    out.wiretap = s.Se.squaredNorm();
    return out;
}

/// sum_k ||J_k||_* + ||S_e||_*
inline double alignment_objective(const AlignmentState &s) {
    double v = nuclear_norm(s.Se);
    for (const auto &J : s.J)
        v += nuclear_norm(J);
    return v;
}

} // namespace secia
