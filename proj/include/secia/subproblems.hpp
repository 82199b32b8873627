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
#include "spectral_solver.hpp"
#include "system_model.hpp"

#include <optional>
#include <vector>

namespace secia {

enum class WeightSide { left, right };

/// Reweighting matrices of the log-det surrogate: Xi[k] multiplies J_k on the
/// left; Phi multiplies S_e on `side`.
struct RnnWeights {
    std::vector<cmat> Xi;
    cmat Phi;
    WeightSide side = WeightSide::right;

    static RnnWeights identity(int K, int d, int Nre) {
        RnnWeights w;
        for (int k = 0; k < K; ++k)
            w.Xi.push_back(cmat::Identity(d, d));
        w.side = Nre < K * d ? WeightSide::left : WeightSide::right;
        const int de = std::min(Nre, K * d);
        w.Phi = cmat::Identity(de, de);
        return w;
    }
};

/// Diagnostics of one convex half-step.
struct HalfStepReport {
    double objective = 0.0;        // solver objective before orthogonalization
    double min_floor_margin = 0.0; // min_k lambda_min(herm S_k) - epsilon
    double min_desired_sigma = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct PrecoderStep {
    PrecoderSet precoders;
    HalfStepReport report;
};

struct ReceiverStep {
    ReceiverSet receivers;
    HalfStepReport report;
};

namespace detail {

inline cmat block_selector(int d, int position, int blocks) {
    cmat e = cmat::Zero(d, static_cast<Eigen::Index>(d) * blocks);
    e.middleCols(static_cast<Eigen::Index>(position) * d, d).setIdentity();
    return e;
}

inline void fold_report(HalfStepReport &rep, const SolverResult &res, const std::vector<cmat> &desired,
                        double epsilon) {
    rep.objective += res.objective;
    rep.iterations = std::max(rep.iterations, res.iterations);
    rep.converged = rep.converged && res.converged;
    for (const auto &S : desired) {
        rep.min_floor_margin = std::min(rep.min_floor_margin, check_floor(S, epsilon).margin);
        const rvec sv = singular_values(S);
        rep.min_desired_sigma = std::min(rep.min_desired_sigma, sv(sv.size() - 1));
    }
}

inline HalfStepReport empty_report() {
    HalfStepReport r;
    r.min_floor_margin = std::numeric_limits<double>::infinity();
    r.min_desired_sigma = std::numeric_limits<double>::infinity();
    return r;
}

inline void require_feasible(const SolverResult &res, const char *what) {
    if (res.status == SolveStatus::infeasible)
        throw infeasible_problem(std::string(what) + ": floor constraints unreachable (violation " +
                                 std::to_string(res.constraint_violation) + ")");
}

} // namespace detail

/// Precoder half-step with receivers fixed: blocks are F_1..F_K, objective
/// sum_k ||Xi_k J_k||_* + ||Phi S_e||_* (or ||S_e Phi||_*), floors on S_k.
inline NuclearNormProblem precoder_problem(const ChannelSet &ch, const ReceiverSet &rx, double epsilon,
                                           const RnnWeights *weights = nullptr) {
    const int K = ch.users();
    const int d = static_cast<int>(rx.W.front().cols());
    const Eigen::Index Nt = ch.link[0][0].cols();
    NuclearNormProblem p;
    for (int l = 0; l < K; ++l)
        p.blocks.push_back({Nt, d});

    if (K > 1) {
        for (int k = 0; k < K; ++k) {
            ObjectiveTerm term;
            term.map.constant = cmat::Zero(d, static_cast<Eigen::Index>(d) * (K - 1));
            int pos = 0;
            for (int l = 0; l < K; ++l) {
                if (l == k)
                    continue;
                term.map.terms.push_back({l, rx.W[k].adjoint() * ch.link[k][l], detail::block_selector(d, pos++, K - 1)});
            }
            if (weights)
                term.left_weight = weights->Xi[k];
            p.objective.push_back(std::move(term));
        }
    }
    if (!ch.eve.empty() && ch.eve.front().rows() > 0) {
        ObjectiveTerm term;
        term.map.constant = cmat::Zero(ch.eve.front().rows(), static_cast<Eigen::Index>(d) * K);
        for (int l = 0; l < K; ++l)
            term.map.terms.push_back({l, ch.eve[l], detail::block_selector(d, l, K)});
        if (weights) {
            if (weights->side == WeightSide::left)
                term.left_weight = weights->Phi;
            else
                term.right_weight = weights->Phi;
        }
        p.objective.push_back(std::move(term));
    }
    for (int k = 0; k < K; ++k) {
        FloorConstraint f;
        f.epsilon = epsilon;
        f.map.constant = cmat::Zero(d, d);
        f.map.terms.push_back({k, rx.W[k].adjoint() * ch.link[k][k], cmat::Identity(d, d)});
        p.floors.push_back(std::move(f));
    }
    return p;
}

/// Receiver half-step for a single user. The decision block is V = W_k^H
/// (d x Nr), which makes every map complex-linear.
inline NuclearNormProblem receiver_problem(const ChannelSet &ch, const PrecoderSet &tx, int k, double epsilon,
                                           const cmat *xi = nullptr) {
    const int K = ch.users();
    const int d = static_cast<int>(tx.F.front().cols());
    const Eigen::Index Nr = ch.link[0][0].rows();
    NuclearNormProblem p;
    p.blocks.push_back({d, Nr});
    if (K > 1) {
        cmat G(Nr, static_cast<Eigen::Index>(d) * (K - 1));
        int pos = 0;
        for (int l = 0; l < K; ++l)
            if (l != k)
                G.middleCols(static_cast<Eigen::Index>(d) * pos++, d) = ch.link[k][l] * tx.F[l];
        ObjectiveTerm term;
        term.map.constant = cmat::Zero(d, G.cols());
        term.map.terms.push_back({0, cmat::Identity(d, d), G});
        if (xi)
            term.left_weight = *xi;
        p.objective.push_back(std::move(term));
    }
    FloorConstraint f;
    f.epsilon = epsilon;
    f.map.constant = cmat::Zero(d, d);
    f.map.terms.push_back({0, cmat::Identity(d, d), ch.link[k][k] * tx.F[k]});
    p.floors.push_back(std::move(f));
    return p;
}

/// All K receiver problems stacked into one (block k is W_k^H). Used to
/// cross-check the per-user decomposition.
inline NuclearNormProblem joint_receiver_problem(const ChannelSet &ch, const PrecoderSet &tx, double epsilon,
                                                 const RnnWeights *weights = nullptr) {
    NuclearNormProblem joint;
    for (int k = 0; k < ch.users(); ++k) {
        NuclearNormProblem pk = receiver_problem(ch, tx, k, epsilon, weights ? &weights->Xi[k] : nullptr);
        joint.blocks.push_back(pk.blocks[0]);
        for (auto &o : pk.objective) {
            o.map.terms[0].block = k;
            joint.objective.push_back(std::move(o));
        }
        for (auto &f : pk.floors) {
            f.map.terms[0].block = k;
            joint.floors.push_back(std::move(f));
        }
    }
    return joint;
}

inline PrecoderStep solve_precoder_subproblem(const ChannelSet &ch, const ReceiverSet &rx, double epsilon,
                                              const SolverOptions &options = {},
                                              const RnnWeights *weights = nullptr) {
    const NuclearNormProblem p = precoder_problem(ch, rx, epsilon, weights);
    const SolverResult res = solve(p, options);
    detail::require_feasible(res, "precoder subproblem");
    PrecoderStep out;
    out.precoders.F = res.blocks;
    out.report = detail::empty_report();
    std::vector<cmat> desired;
    for (int k = 0; k < ch.users(); ++k)
        desired.push_back(desired_signal_matrix(rx.W[k], ch.link[k][k], res.blocks[k]));
    detail::fold_report(out.report, res, desired, epsilon);
    return out;
}

/// Solves the K decoupled per-user receiver problems.
inline ReceiverStep solve_receiver_subproblem(const ChannelSet &ch, const PrecoderSet &tx, double epsilon,
                                              const SolverOptions &options = {},
                                              const RnnWeights *weights = nullptr) {
    ReceiverStep out;
    out.report = detail::empty_report();
    for (int k = 0; k < ch.users(); ++k) {
        const NuclearNormProblem p = receiver_problem(ch, tx, k, epsilon, weights ? &weights->Xi[k] : nullptr);
        const SolverResult res = solve(p, options);
        detail::require_feasible(res, "receiver subproblem");
        cmat W = res.blocks[0].adjoint();
        detail::fold_report(out.report, res, {desired_signal_matrix(W, ch.link[k][k], tx.F[k])}, epsilon);
        out.receivers.W.push_back(std::move(W));
    }
    return out;
}

/// Orthonormal receivers (W^H W = I) and power-normalized precoders
/// (F^H F = Pt/d I). Column spans are preserved.
inline ReceiverSet orthonormalize_receivers(const ReceiverSet &rx) {
    ReceiverSet out;
    for (const auto &W : rx.W)
        out.W.push_back(orthonormalize(W, 1.0));
    return out;
}

inline PrecoderSet orthonormalize_precoders(const PrecoderSet &tx, double Pt) {
    PrecoderSet out;
    for (const auto &F : tx.F)
        out.F.push_back(orthonormalize(F, Pt / static_cast<double>(F.cols())));
    return out;
}

} // namespace secia
