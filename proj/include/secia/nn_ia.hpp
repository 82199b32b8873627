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
#include "subproblems.hpp"
#include "system_model.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace secia {

/// Aggregated diagnostics over every convex half-step of a run.
struct SolveDiagnostics {
    int solves = 0;
    int nonconverged = 0;
    int max_solver_iterations = 0;
    double min_floor_margin = std::numeric_limits<double>::infinity();
    double min_desired_sigma = std::numeric_limits<double>::infinity();

    void absorb(const HalfStepReport &r) {
        ++solves;
        nonconverged += r.converged ? 0 : 1;
        max_solver_iterations = std::max(max_solver_iterations, r.iterations);
        min_floor_margin = std::min(min_floor_margin, r.min_floor_margin);
        min_desired_sigma = std::min(min_desired_sigma, r.min_desired_sigma);
    }
    void absorb(const SolveDiagnostics &o) {
        solves += o.solves;
        nonconverged += o.nonconverged;
        max_solver_iterations = std::max(max_solver_iterations, o.max_solver_iterations);
        min_floor_margin = std::min(min_floor_margin, o.min_floor_margin);
        min_desired_sigma = std::min(min_desired_sigma, o.min_desired_sigma);
    }
};

/// Outcome of an alignment run. `history` has one entry per outer iteration,
/// evaluated at the orthonormalized operating point.
struct IaResult {
    PrecoderSet precoders;
    ReceiverSet receivers;
    std::vector<double> history;
    /// Objective at the initial precoders and the first receiver half-step.
    double initial_objective = 0.0;
    int outer_iterations = 0;
    SolveDiagnostics diagnostics;
};

struct NnIaOptions {
    int kappa_max = 5;
    double epsilon = 0.1;
    std::uint64_t seed = 0;
    /// Early stop on relative change of the recorded objective.
    double stop_tolerance = 1e-4;
    SolverOptions solver;

    void validate() const {
        if (kappa_max < 1)
            throw std::invalid_argument("kappa_max must be >= 1");
        if (!(epsilon > 0.0))
            throw std::invalid_argument("epsilon must be positive");
    }
};

namespace detail {

inline bool relative_change_below(double prev, double cur, double tol) {
    return std::abs(cur - prev) <= tol * std::abs(prev);
}

} // namespace detail

/// Secure nuclear-norm alignment: alternate receiver and precoder
/// nuclear-norm subproblems, orthonormalizing after each half-step.
inline IaResult run_nn_ia(const ChannelSet &ch, const SystemConfig &config, const NnIaOptions &opt) {
    config.validate();
    opt.validate();
    IaResult out;
    PrecoderSet F = random_precoders(config, opt.seed);
    ReceiverSet W;
    for (int kappa = 0; kappa < opt.kappa_max; ++kappa) {
        const ReceiverStep rs = solve_receiver_subproblem(ch, F, opt.epsilon, opt.solver);
        out.diagnostics.absorb(rs.report);
        W = orthonormalize_receivers(rs.receivers);
        if (kappa == 0)
            out.initial_objective = alignment_objective(build_alignment_state(ch, F, W));

        const PrecoderStep ps = solve_precoder_subproblem(ch, W, opt.epsilon, opt.solver);
        out.diagnostics.absorb(ps.report);
        F = orthonormalize_precoders(ps.precoders, config.Pt);

        const double obj = alignment_objective(build_alignment_state(ch, F, W));
        out.history.push_back(obj);
        out.outer_iterations = kappa + 1;
        const auto n = out.history.size();
        if (n > 1 && detail::relative_change_below(out.history[n - 2], obj, opt.stop_tolerance))
            break;
    }
    out.precoders = std::move(F);
    out.receivers = std::move(W);
    return out;
}

} // namespace secia
