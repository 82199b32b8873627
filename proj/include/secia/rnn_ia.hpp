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

#include "alignment_spaces.hpp"
#include "nn_ia.hpp"
#include "subproblems.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace secia {

struct RnnIaOptions {
    int kappa_max = 3;
    int m_max = 3;
    double epsilon = 0.1;
    double gamma = 1e-2; // smoothing for interference terms
    double zeta = 1e-2;  // smoothing for wiretap terms
    std::uint64_t seed = 0;
    double stop_tolerance = 1e-4;
    SolverOptions solver;

    void validate() const {
        if (kappa_max < 1 || m_max < 1)
            throw std::invalid_argument("kappa_max and m_max must be >= 1");
        if (!(epsilon > 0.0))
            throw std::invalid_argument("epsilon must be positive");
        if (!(gamma > 0.0) || !(zeta > 0.0))
            throw std::invalid_argument("gamma and zeta must be positive");
    }
};

namespace detail {

/// Leading `count` singular values, zero-padded when the matrix has fewer.
inline rvec leading_singular_values(const cmat &m, Eigen::Index count) {
    rvec out = rvec::Zero(count);
    const rvec sv = singular_values(m);
    const Eigen::Index n = std::min(count, sv.size());
    out.head(n) = sv.head(n);
    return out;
}

} // namespace detail

/// Log-det rank surrogate
///   sum_k sum_{i<=d} log(sigma_i(J_k) + gamma) + sum_{i<=d_e} log(sigma_i(S_e) + zeta)
/// with d_e = min(Nre, K d).
inline double surrogate_objective(const AlignmentState &s, double gamma, double zeta) {
    double v = 0.0;
    for (const auto &J : s.J)
        v += (detail::leading_singular_values(J, J.rows()).array() + gamma).log().sum();
    const Eigen::Index de = std::min(s.Se.rows(), s.Se.cols());
    v += (detail::leading_singular_values(s.Se, de).array() + zeta).log().sum();
    return v;
}

/// Xi_k = Psi_k diag(1/(sigma_i(J_k)+gamma)) Psi_k^H over the left singular
/// vectors of J_k. Phi uses the left singular vectors of S_e when Nre < K d
/// (applied on the left) and the right ones otherwise (applied on the right).
inline RnnWeights compute_weights(const std::vector<cmat> &J, const cmat &Se, double gamma, double zeta) {
    RnnWeights w;
    for (const auto &Jk : J) {
        const Eigen::Index d = Jk.rows();
        cmat psi = cmat::Identity(d, d);
        if (Jk.cols() > 0)
            psi = Eigen::JacobiSVD<cmat>(Jk, Eigen::ComputeFullU).matrixU();
        const rvec ups = (detail::leading_singular_values(Jk, d).array() + gamma).inverse().matrix();
        w.Xi.push_back(psi * ups.cast<cplx>().asDiagonal() * psi.adjoint());
    }
    w.side = Se.rows() < Se.cols() ? WeightSide::left : WeightSide::right;
    const Eigen::Index de = std::min(Se.rows(), Se.cols());
    Eigen::JacobiSVD<cmat> svd(Se, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const cmat delta = w.side == WeightSide::left ? svd.matrixU() : svd.matrixV();
    const rvec theta = (detail::leading_singular_values(Se, de).array() + zeta).inverse().matrix();
    w.Phi = delta * theta.cast<cplx>().asDiagonal() * delta.adjoint();
    return w;
}

/// sum_k ||Xi_k J_k||_* + ||Phi S_e||_* (or ||S_e Phi||_*).
inline double weighted_objective(const AlignmentState &s, const RnnWeights &w) {
    double v = 0.0;
    for (std::size_t k = 0; k < s.J.size(); ++k)
        v += nuclear_norm(w.Xi[k] * s.J[k]);
    v += nuclear_norm(w.side == WeightSide::left ? cmat(w.Phi * s.Se) : cmat(s.Se * w.Phi));
    return v;
}

struct InnerResult {
    PrecoderSet precoders;
    ReceiverSet receivers;
    /// Weighted objective after each inner iteration.
    std::vector<double> history;
    int iterations = 0;
    SolveDiagnostics diagnostics;
    /// Receivers after the first half-step, paired with the initial precoders.
    ReceiverSet first_receivers;
};

/// Coordinate descent on the weighted problem with the weights held fixed.
inline InnerResult inner_coordinate_descent(const ChannelSet &ch, const SystemConfig &config,
                                            const RnnWeights &weights, const PrecoderSet &initial,
                                            const RnnIaOptions &opt) {
    InnerResult out;
    PrecoderSet F = initial;
    ReceiverSet W;
    for (int m = 0; m < opt.m_max; ++m) {
        try {
            const ReceiverStep rs = solve_receiver_subproblem(ch, F, opt.epsilon, opt.solver, &weights);
            out.diagnostics.absorb(rs.report);
            W = orthonormalize_receivers(rs.receivers);
            if (m == 0)
                out.first_receivers = W;
            const PrecoderStep ps = solve_precoder_subproblem(ch, W, opt.epsilon, opt.solver, &weights);
            out.diagnostics.absorb(ps.report);
            F = orthonormalize_precoders(ps.precoders, config.Pt);
        } catch (const infeasible_problem &e) {
            throw infeasible_problem(std::string(e.what()) + " (inner iteration " + std::to_string(m) + ")");
        } catch (const degenerate_iterate &e) {
            throw degenerate_iterate(std::string(e.what()) + " (inner iteration " + std::to_string(m) + ")");
        }
        const double v = weighted_objective(build_alignment_state(ch, F, W), weights);
        out.history.push_back(v);
        out.iterations = m + 1;
        const auto n = out.history.size();
        if (n > 1 && detail::relative_change_below(out.history[n - 2], v, opt.stop_tolerance))
            break;
    }
    out.precoders = std::move(F);
    out.receivers = std::move(W);
    return out;
}

/// Secure reweighted-nuclear-norm alignment (majorization-minimization over
/// the log-det surrogate). `history` holds the surrogate after each outer
/// iteration; `initial_objective` is the surrogate at the initial precoders
/// and first receiver half-step.
inline IaResult run_rnn_ia(const ChannelSet &ch, const SystemConfig &config, const RnnIaOptions &opt) {
    config.validate();
    opt.validate();
    IaResult out;
    PrecoderSet F = random_precoders(config, opt.seed);
    ReceiverSet W;
    RnnWeights weights = RnnWeights::identity(config.K, config.d, config.Nre);
    for (int kappa = 0; kappa < opt.kappa_max; ++kappa) {
        InnerResult inner;
        try {
            inner = inner_coordinate_descent(ch, config, weights, F, opt);
        } catch (const infeasible_problem &e) {
            throw infeasible_problem(std::string(e.what()) + " (outer iteration " + std::to_string(kappa) + ")");
        }
        out.diagnostics.absorb(inner.diagnostics);
        if (kappa == 0)
            out.initial_objective =
                surrogate_objective(build_alignment_state(ch, F, inner.first_receivers), opt.gamma, opt.zeta);
        F = std::move(inner.precoders);
        W = std::move(inner.receivers);

        const AlignmentState state = build_alignment_state(ch, F, W);
        const double omega = surrogate_objective(state, opt.gamma, opt.zeta);
        out.history.push_back(omega);
        out.outer_iterations = kappa + 1;
        weights = compute_weights(state.J, state.Se, opt.gamma, opt.zeta);
        const auto n = out.history.size();
        if (n > 1 && detail::relative_change_below(out.history[n - 2], omega, opt.stop_tolerance))
            break;
    }
    out.precoders = std::move(F);
    out.receivers = std::move(W);
    return out;
}

} // namespace secia
