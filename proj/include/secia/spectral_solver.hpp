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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace secia {

/// Values of the decision variables, indexed by block id.
using BlockAssignment = std::vector<cmat>;

struct VariableBlock {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
};

/// One summand left * X[block] * right of an affine map.
struct AffineTerm {
    int block = 0;
    cmat left;
    cmat right;
};

/// X -> constant + sum_t left_t * X[block_t] * right_t
struct AffineMatrixMap {
    cmat constant;
    std::vector<AffineTerm> terms;

    Eigen::Index rows() const { return constant.rows(); }
    Eigen::Index cols() const { return constant.cols(); }

    cmat evaluate(const BlockAssignment &x) const {
        cmat out = constant;
        for (const auto &t : terms) {
            if (t.block < 0 || t.block >= static_cast<int>(x.size()))
                throw dimension_error("AffineMatrixMap: unknown block " + std::to_string(t.block));
            out.noalias() += t.left * x[t.block] * t.right;
        }
        return out;
    }
};

struct ObjectiveTerm {
    AffineMatrixMap map;
    std::optional<cmat> left_weight;
    std::optional<cmat> right_weight;

    /// left_weight * map * right_weight as a single affine map.
    AffineMatrixMap weighted() const {
        AffineMatrixMap out = map;
        if (left_weight) {
            out.constant = *left_weight * out.constant;
            for (auto &t : out.terms)
                t.left = *left_weight * t.left;
        }
        if (right_weight) {
            out.constant = out.constant * *right_weight;
            for (auto &t : out.terms)
                t.right = t.right * *right_weight;
        }
        return out;
    }
};

/// Hermitian part of map(X) must dominate epsilon * I.
struct FloorConstraint {
    AffineMatrixMap map;
    double epsilon = 0.1;
};

struct NuclearNormProblem {
    std::vector<VariableBlock> blocks;
    std::vector<ObjectiveTerm> objective;
    std::vector<FloorConstraint> floors;

    void validate() const {
        auto check_map = [&](const AffineMatrixMap &m, const std::string &what) {
            for (const auto &t : m.terms) {
                if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
                    throw dimension_error(what + ": unknown block " + std::to_string(t.block));
                const auto &b = blocks[t.block];
                if (t.left.rows() != m.rows() || t.left.cols() != b.rows || t.right.rows() != b.cols ||
                    t.right.cols() != m.cols())
                    throw dimension_error(what + ": term on block " + std::to_string(t.block) +
                                          " does not conform to output " + shape_str(m.constant));
            }
        };
        for (std::size_t i = 0; i < objective.size(); ++i) {
            const auto &o = objective[i];
            const std::string what = "objective term " + std::to_string(i);
            check_map(o.map, what);
            if (o.left_weight && o.left_weight->cols() != o.map.rows())
                throw dimension_error(what + ": left weight does not conform");
            if (o.right_weight && o.right_weight->rows() != o.map.cols())
                throw dimension_error(what + ": right weight does not conform");
        }
        for (std::size_t j = 0; j < floors.size(); ++j) {
            const std::string what = "floor constraint " + std::to_string(j);
            check_map(floors[j].map, what);
            if (floors[j].map.rows() != floors[j].map.cols())
                throw dimension_error(what + ": map must be square");
            if (!(floors[j].epsilon > 0.0))
                throw std::invalid_argument(what + ": epsilon must be positive");
        }
    }

    BlockAssignment zeros() const {
        BlockAssignment x;
        for (const auto &b : blocks)
            x.push_back(cmat::Zero(b.rows, b.cols));
        return x;
    }
};

struct SolverOptions {
    double tolerance = 1e-6;
    int max_iterations = 2000;
    /// ADMM penalty relative to 1/epsilon of the smallest floor.
    double penalty = 1.0;
    /// Residual balancing of the penalty every `adapt_interval` iterations.
    bool adaptive_penalty = false;
    int adapt_interval = 10;
    /// Over-relaxation factor in (0, 2).
    double relaxation = 1.6;
    /// Largest floor violation accepted after the final feasibility correction.
    double feasibility_tolerance = 1e-6;
};

enum class SolveStatus { converged, iteration_limit, infeasible };

inline const char *to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::infeasible: return "infeasible";
    }
    return "?";
}

struct SolverResult {
    BlockAssignment blocks;
    double objective = 0.0;
    double constraint_violation = 0.0;
    int iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::iteration_limit;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// Raised by callers that cannot continue from an infeasible subproblem.
class infeasible_problem : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FloorCheck {
    bool satisfied = false;
    double margin = 0.0; // lambda_min(Hermitian part) - epsilon
};

inline double min_hermitian_eigenvalue(const cmat &m) {
    Eigen::SelfAdjointEigenSolver<cmat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline FloorCheck check_floor(const cmat &map_value, double epsilon) {
    if (map_value.rows() != map_value.cols())
        throw dimension_error("check_floor: square input required, got " + shape_str(map_value));
    const double lmin = min_hermitian_eigenvalue(map_value);
    return {lmin >= epsilon - 1e-9, lmin - epsilon};
}

/// argmin_Z tau ||Z||_* + 1/2 ||Z - m||_F^2
///
/// Computed from the eigendecomposition of the smaller Gram matrix: with
/// m^H m = V diag(sigma^2) V^H the result is m V diag((1 - tau/sigma)^+) V^H,
/// so singular values at or below tau never enter a division.
inline cmat singular_value_threshold(const cmat &m, double tau) {
    if (m.size() == 0)
        return m;
    const bool wide = m.rows() < m.cols();
    const cmat gram = wide ? cmat(m * m.adjoint()) : cmat(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<cmat> es(gram);
    rvec scale(gram.rows());
    for (Eigen::Index i = 0; i < scale.size(); ++i) {
        const double sigma = std::sqrt(std::max(es.eigenvalues()(i), 0.0));
        scale(i) = sigma > tau ? 1.0 - tau / sigma : 0.0;
    }
    const cmat &v = es.eigenvectors();
    const cmat shrink = v * scale.cast<cplx>().asDiagonal() * v.adjoint();
    return wide ? cmat(shrink * m) : cmat(m * shrink);
}

/// Frobenius-nearest matrix whose Hermitian part has lambda_min >= epsilon.
/// The skew-Hermitian part is orthogonal to the constraint and kept as is.
inline cmat project_floor(const cmat &m, double epsilon) {
    const cmat h = hermitian_part(m);
    const cmat skew = m - h;
    Eigen::SelfAdjointEigenSolver<cmat> es(h);
    const rvec lam = es.eigenvalues().array().max(epsilon).matrix();
    return skew + es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline double evaluate_objective(const NuclearNormProblem &p, const BlockAssignment &x) {
    if (x.size() != p.blocks.size())
        throw dimension_error("evaluate_objective: expected " + std::to_string(p.blocks.size()) + " blocks");
    for (std::size_t b = 0; b < x.size(); ++b)
        require_shape(x[b], p.blocks[b].rows, p.blocks[b].cols, "evaluate_objective");
    double v = 0.0;
    for (const auto &o : p.objective) {
        cmat m = o.map.evaluate(x);
        if (o.left_weight)
            m = *o.left_weight * m;
        if (o.right_weight)
            m = m * *o.right_weight;
        v += nuclear_norm(m);
    }
    return v;
}

/// max_j [epsilon_j - lambda_min(Hermitian part of map_j(x))]^+
inline double floor_violation(const NuclearNormProblem &p, const BlockAssignment &x) {
    double v = 0.0;
    for (const auto &f : p.floors)
        v = std::max(v, -check_floor(f.map.evaluate(x), f.epsilon).margin);
    return v;
}

namespace detail {

/// Affine maps flattened to vec(out) = G vec(x) + c over the concatenated
/// column-major blocks: vec(L X R) = (R^T kron L) vec(X).
struct StackedOperator {
    cmat G;
    cvec c;
    std::vector<Eigen::Index> row_offset; // per map
    std::vector<Eigen::Index> block_offset;
    Eigen::Index unknowns = 0;

    StackedOperator(const std::vector<VariableBlock> &blocks, const std::vector<const AffineMatrixMap *> &maps) {
        for (const auto &b : blocks) {
            block_offset.push_back(unknowns);
            unknowns += b.rows * b.cols;
        }
        Eigen::Index rows = 0;
        for (const auto *m : maps) {
            row_offset.push_back(rows);
            rows += m->constant.size();
        }
        G = cmat::Zero(rows, unknowns);
        c = cvec(rows);
        for (std::size_t i = 0; i < maps.size(); ++i) {
            const auto &m = *maps[i];
            const Eigen::Index r0 = row_offset[i], out_rows = m.rows();
            c.segment(r0, m.constant.size()) = m.constant.reshaped();
            for (const auto &t : m.terms) {
                const Eigen::Index c0 = block_offset[t.block];
                const Eigen::Index xr = t.left.cols(), xc = t.right.rows();
                // entry (a,b) of the output depends on X(p,q) through left(a,p) * right(q,b)
                for (Eigen::Index b = 0; b < m.cols(); ++b)
                    for (Eigen::Index q = 0; q < xc; ++q) {
                        const cplx rqb = t.right(q, b);
                        if (rqb == cplx(0.0))
                            continue;
                        G.block(r0 + b * out_rows, c0 + q * xr, out_rows, xr) += rqb * t.left;
                    }
            }
        }
    }

    cvec flatten(const BlockAssignment &x) const {
        cvec v(unknowns);
        for (std::size_t b = 0; b < x.size(); ++b)
            v.segment(block_offset[b], x[b].size()) = x[b].reshaped();
        return v;
    }

    BlockAssignment unflatten(const cvec &v, const std::vector<VariableBlock> &blocks) const {
        BlockAssignment x;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            x.push_back(v.segment(block_offset[b], blocks[b].rows * blocks[b].cols).reshaped(blocks[b].rows, blocks[b].cols));
        return x;
    }
};

inline cmat pseudo_inverse(const cmat &g) {
    if (g.size() == 0)
        return cmat::Zero(g.cols(), g.rows());
    Eigen::CompleteOrthogonalDecomposition<cmat> cod(g);
    cod.setThreshold(1e-12);
    return cod.pseudoInverse();
}

} // namespace detail

/// Minimizes sum ||W_l map W_r||_* subject to Hermitian floors by ADMM.
///
/// One auxiliary matrix per objective term (prox: singular-value soft
/// thresholding of the weighted map value) and one per floor constraint
/// (projection: eigenvalue clamp of the Hermitian part). The coupling step is
/// the minimum-norm least-squares fit of all map values to their auxiliaries.
/// The returned point is corrected onto the floors by a minimum-norm step.
inline SolverResult solve(const NuclearNormProblem &problem, const SolverOptions &options = {}) {
    problem.validate();
    if (options.max_iterations < 1)
        throw std::invalid_argument("solve: max_iterations must be >= 1");
    if (!(options.penalty > 0.0) || !(options.tolerance > 0.0))
        throw std::invalid_argument("solve: penalty and tolerance must be positive");
    if (!(options.relaxation > 0.0 && options.relaxation < 2.0))
        throw std::invalid_argument("solve: relaxation must lie in (0, 2)");

    std::vector<AffineMatrixMap> weighted;
    for (const auto &o : problem.objective)
        weighted.push_back(o.weighted());
    std::vector<const AffineMatrixMap *> maps;
    for (const auto &m : weighted)
        maps.push_back(&m);
    for (const auto &f : problem.floors)
        maps.push_back(&f.map);

    const std::size_t n_obj = weighted.size();
    const detail::StackedOperator op(problem.blocks, maps);
    const cmat pinv = detail::pseudo_inverse(op.G);
    // G x with x = pinv (w - u - c) is the orthogonal projection onto range(G).
    const cmat range_projector = op.G * pinv;
    const Eigen::Index m = op.G.rows();

    auto shape_of = [&](std::size_t i) { return std::pair{maps[i]->rows(), maps[i]->cols()}; };

    // Auxiliary w approximates G x + c; u is the scaled dual.
    cvec g = op.c;
    cvec w(m), u = cvec::Zero(m);
    auto prox_all = [&](const cvec &v, double rho) {
        cvec out(m);
        for (std::size_t i = 0; i < maps.size(); ++i) {
            const auto [r, c] = shape_of(i);
            const Eigen::Index off = op.row_offset[i];
            const cmat block = v.segment(off, r * c).reshaped(r, c);
            const cmat z = i < n_obj ? singular_value_threshold(block, 1.0 / rho)
                                     : project_floor(block, problem.floors[i - n_obj].epsilon);
            out.segment(off, r * c) = z.reshaped();
        }
        return out;
    };

    // The floors fix the scale of every minimizer, so the penalty is taken
    // relative to the smallest floor level.
    double floor_scale = std::numeric_limits<double>::infinity();
    for (const auto &f : problem.floors)
        floor_scale = std::min(floor_scale, f.epsilon);
    double rho = options.penalty / (problem.floors.empty() ? 1.0 : floor_scale);
    w = prox_all(g, rho);

    SolverResult result;
    cvec rhs = -op.c;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        rhs = w - u - op.c;
        g.noalias() = range_projector * rhs;
        g += op.c;
        const cvec w_prev = w;
        const cvec g_hat = options.relaxation * g + (1.0 - options.relaxation) * w_prev;
        w = prox_all(g_hat + u, rho);
        u += g_hat - w;

        const double r_norm = (g - w).norm();
        const double s_norm = rho * (op.G.adjoint() * (w - w_prev)).norm();
        const double eps_pri = options.tolerance * (1.0 + std::max(g.norm(), w.norm()));
        result.primal_residual = r_norm;
        result.dual_residual = s_norm;
        if (r_norm <= eps_pri && s_norm <= options.tolerance * (1.0 + rho * (op.G.adjoint() * u).norm())) {
            result.converged = true;
            ++it;
            break;
        }
        if (options.adaptive_penalty && (it + 1) % options.adapt_interval == 0) {
            if (r_norm > 10.0 * s_norm) {
                rho *= 2.0;
                u /= 2.0;
            } else if (s_norm > 10.0 * r_norm) {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }
    result.iterations = it;
    cvec x = pinv * rhs;

    BlockAssignment blocks = op.unflatten(x, problem.blocks);
    if (!problem.floors.empty() && floor_violation(problem, blocks) > 0.0) {
        std::vector<const AffineMatrixMap *> floor_maps;
        for (const auto &f : problem.floors)
            floor_maps.push_back(&f.map);
        const detail::StackedOperator fop(problem.blocks, floor_maps);
        cvec target(fop.G.rows());
        const cvec current = fop.G * x + fop.c;
        for (std::size_t j = 0; j < problem.floors.size(); ++j) {
            const Eigen::Index r = floor_maps[j]->rows(), off = fop.row_offset[j];
            const cmat v = current.segment(off, r * r).reshaped(r, r);
            target.segment(off, r * r) = project_floor(v, problem.floors[j].epsilon).reshaped();
        }
        x += detail::pseudo_inverse(fop.G) * (target - current);
        blocks = op.unflatten(x, problem.blocks);
    }

    result.blocks = std::move(blocks);
    result.objective = evaluate_objective(problem, result.blocks);
    result.constraint_violation = floor_violation(problem, result.blocks);
    if (result.constraint_violation > options.feasibility_tolerance) {
        result.status = SolveStatus::infeasible;
        result.converged = false;
    } else {
        result.status = result.converged ? SolveStatus::converged : SolveStatus::iteration_limit;
    }
    return result;
}

} // namespace secia
