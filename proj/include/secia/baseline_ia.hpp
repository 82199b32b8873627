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

#include <cstdint>
#include <vector>

namespace secia {

struct BaselineResult {
    PrecoderSet precoders;
    ReceiverSet receivers;
    /// sum_k ||J_k||_F^2 after each iteration.
    std::vector<double> leakage_history;
};

namespace detail {

/// d eigenvectors of the smallest eigenvalues of a Hermitian matrix.
inline cmat least_dominant_eigenvectors(const cmat &q, int d) {
    Eigen::SelfAdjointEigenSolver<cmat> es(q);
    if (es.info() != Eigen::Success || !es.eigenvalues().allFinite())
        throw degenerate_iterate("min-leakage IA: eigendecomposition failed");
    return es.eigenvectors().leftCols(d);
}

inline double total_leakage(const LinkGrid &links, const PrecoderSet &tx, const ReceiverSet &rx) {
    double v = 0.0;
    const int K = static_cast<int>(links.size());
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l)
            if (l != k)
                v += (rx.W[k].adjoint() * links[k][l] * tx.F[l]).squaredNorm();
    return v;
}

} // namespace detail

/// Conventional minimum-interference-leakage alignment. The eavesdropper is
/// ignored: only the legitimate links are taken.
///
/// Each iteration sets W_k to the least-dominant eigenvectors of the
/// interference covariance sum_{l!=k} H_kl F_l F_l^H H_kl^H, then F_l to the
/// least-dominant eigenvectors of the reciprocal covariance
/// sum_{k!=l} H_kl^H W_k W_k^H H_kl, scaled to F^H F = Pt/d I.
inline BaselineResult run_min_leakage_ia(const LinkGrid &links, const SystemConfig &config, int iterations,
                                         std::uint64_t seed) {
    config.validate();
    if (iterations < 1)
        throw std::invalid_argument("min-leakage IA: iterations must be >= 1");
    const int K = config.K, d = config.d;
    if (static_cast<int>(links.size()) != K)
        throw dimension_error("min-leakage IA: expected " + std::to_string(K) + " receivers");

    BaselineResult out;
    PrecoderSet F = random_precoders(config, seed);
    ReceiverSet W;
    W.W.resize(K);
    const double scale = std::sqrt(config.Pt / d);
    for (int it = 0; it < iterations; ++it) {
        for (int k = 0; k < K; ++k) {
            cmat q = cmat::Zero(config.Nr, config.Nr);
            for (int l = 0; l < K; ++l)
                if (l != k) {
                    const cmat hf = links[k][l] * F.F[l];
                    q.noalias() += hf * hf.adjoint();
                }
            W.W[k] = detail::least_dominant_eigenvectors(q, d);
        }
        for (int l = 0; l < K; ++l) {
            cmat q = cmat::Zero(config.Nt, config.Nt);
            for (int k = 0; k < K; ++k)
                if (k != l) {
                    const cmat hw = links[k][l].adjoint() * W.W[k];
                    q.noalias() += hw * hw.adjoint();
                }
            F.F[l] = detail::least_dominant_eigenvectors(q, d) * scale;
        }
        out.leakage_history.push_back(detail::total_leakage(links, F, W));
    }
    out.precoders = std::move(F);
    out.receivers = std::move(W);
    return out;
}

} // namespace secia
