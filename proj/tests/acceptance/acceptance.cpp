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

#include <secia/report.hpp>

#include "../oracles/rate_oracle.hpp"
#include "../oracles/solver_instances.hpp"
#include "../oracles/subgradient_oracle.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace secia;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

int failures = 0;

void verdict(int id, bool ok, const std::string &detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SystemConfig system_18x12() { return make_config(3, 18, 12, 9, 3); }
SystemConfig system_15x15() { return make_config(3, 15, 15, 9, 3); }

ExperimentSpec base_spec(const SystemConfig &c, const std::string &dir) {
    ExperimentSpec s;
    s.config = c;
    s.record_timing = false;
    s.output_dir = (fs::temp_directory_path() / ("secia_acceptance_" + dir)).string();
    fs::remove_all(s.output_dir);
    return s;
}

std::map<std::string, std::map<int, double>> ssr_by_trial(const ExperimentResult &r) {
    std::map<std::string, std::map<int, double>> out;
    for (const auto &rec : r.records)
        out[rec.algorithm][rec.trial] = rec.ssr;
    return out;
}

double mean(const std::vector<double> &v) {
    double s = 0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double std_error(const std::vector<double> &v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

void properness() {
    const auto t0 = clock_type::now();
    const auto a = check_properness(system_18x12());
    const auto b = check_properness(system_15x15());
    const auto c = check_properness(make_config(3, 4, 4, 2, 2));
    const bool all_a = a.tx_nullspace && a.rx_dimensions && a.eavesdropper_bound && a.proper;
    const bool all_b = b.tx_nullspace && b.rx_dimensions && b.eavesdropper_bound && b.proper;
    verdict(1, all_a && all_b && !c.proper && seconds_since(t0) < 1.0,
            fmt("18x12 proper=%d, 15x15 proper=%d, 4x4 proper=%d (%.3f s)", a.proper, b.proper, c.proper,
                seconds_since(t0)));
}

struct AlgRuns {
    std::vector<IaResult> nn, rnn;
    double nn_seconds = 0;
};

// NN and RNN on 20 harness-seeded trials at 30 dB, kept whole for histories and diagnostics
AlgRuns direct_runs(const SystemConfig &c, int trials) {
    ExperimentSpec s;
    s.config = c;
    SystemConfig cfg = c;
    cfg.Pt = s.power_at(30);
    AlgRuns out;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = generate_channels(cfg, trial_channel_seed(s.master_seed, t));
        NnIaOptions no = s.nn;
        no.kappa_max = 5;
        no.epsilon = 0.1;
        no.seed = trial_init_seed(s.master_seed, t);
        const auto t0 = clock_type::now();
        out.nn.push_back(run_nn_ia(ch, cfg, no));
        out.nn_seconds += seconds_since(t0);
        RnnIaOptions ro = s.rnn;
        ro.seed = no.seed;
        out.rnn.push_back(run_rnn_ia(ch, cfg, ro));
    }
    return out;
}

void collapse(const AlgRuns &r) {
    int hits = 0;
    double worst = 0;
    for (const auto &res : r.nn) {
        const double ratio = res.history.back() / res.initial_objective;
        hits += ratio <= 1e-3 ? 1 : 0;
        worst = std::max(worst, ratio);
    }
    const int n = static_cast<int>(r.nn.size());
    verdict(2, hits >= (8 * n + 9) / 10 && r.nn_seconds <= 900,
            fmt("%d/%d trials reach final/initial <= 1e-3 (worst ratio %.3g, %.1f s)", hits, n, worst,
                r.nn_seconds));
}

void ssr_ordering() {
    auto s = base_spec(system_18x12(), "c3");
    s.snr_grid_db = {30};
    s.trials = 20;
    const auto res = run_experiment(s);
    auto by = ssr_by_trial(res);
    std::vector<double> nn, rnn, conv;
    int wins = 0;
    for (int t = 0; t < s.trials; ++t) {
        nn.push_back(by["nn"][t]);
        rnn.push_back(by["rnn"][t]);
        conv.push_back(by["conventional"][t]);
        wins += nn.back() > conv.back() ? 1 : 0;
    }
    const bool ok = res.failures.empty() && mean(nn) > mean(conv) && mean(rnn) > mean(conv) &&
                    wins >= (9 * s.trials + 9) / 10;
    verdict(3, ok,
            fmt("mean SSR nn %.4g, rnn %.4g, conventional %.4g; nn > conventional on %d/%d trials; %zu failures",
                mean(nn), mean(rnn), mean(conv), wins, s.trials, res.failures.size()));
}

void rnn_vs_nn() {
    auto s = base_spec(system_15x15(), "c4");
    s.snr_grid_db = {50};
    s.trials = 50;
    s.algorithms = {Algorithm::nn, Algorithm::rnn};
    const auto res = run_experiment(s);
    auto by = ssr_by_trial(res);
    std::vector<double> diff;
    for (int t = 0; t < s.trials; ++t)
        if (by["nn"].count(t) && by["rnn"].count(t))
            diff.push_back(by["rnn"][t] - by["nn"][t]);
    const double m = mean(diff), se = std_error(diff);
    verdict(4, m >= 0.0,
            fmt("mean SSR(rnn) - SSR(nn) = %.4g over %zu paired trials, 95%% CI [%.4g, %.4g] (soft trend check)", m,
                diff.size(), m - 1.96 * se, m + 1.96 * se));
}

void solver_oracle() {
    const auto t0 = clock_type::now();
    int within = 0, feasible = 0;
    double worst_gap = 0, worst_violation = 0;
    for (int i = 0; i < 50; ++i) {
        const auto inst = oracle::random_instance(1, i);
        const auto r = solve(inst.problem);
        const auto ref = oracle::projected_subgradient(inst.raw, 100000);
        const double gap = std::abs(r.objective - ref.objective) / ref.objective;
        within += gap <= 1e-3 ? 1 : 0;
        feasible += r.constraint_violation <= 1e-6 ? 1 : 0;
        worst_gap = std::max(worst_gap, gap);
        worst_violation = std::max(worst_violation, r.constraint_violation);
    }
    const double secs = seconds_since(t0);
    verdict(5, within == 50 && feasible == 50 && secs < 300,
            fmt("%d/50 within 1e-3 of oracle (worst %.3g), %d/50 violation <= 1e-6 (worst %.3g), %.1f s", within,
                worst_gap, feasible, worst_violation, secs));
}

void monotonicity(const AlgRuns &a, const AlgRuns &b) {
    int ok_trials = 0, total = 0;
    double worst = -1e300;
    for (const auto *runs : {&a.rnn, &b.rnn})
        for (const auto &r : *runs) {
            bool ok = true;
            for (std::size_t i = 1; i < r.history.size(); ++i) {
                worst = std::max(worst, r.history[i] - r.history[i - 1]);
                ok = ok && r.history[i] <= r.history[i - 1] + 1e-6;
            }
            ok_trials += ok ? 1 : 0;
            ++total;
        }
    verdict(6, ok_trials == total,
            fmt("%d/%d RNN runs with non-increasing Omega (largest step %.3g)", ok_trials, total, worst));
}

void floors(const AlgRuns &a, const AlgRuns &b) {
    double margin = 1e300, sigma = 1e300;
    int solves = 0;
    for (const auto *runs : {&a.nn, &a.rnn, &b.nn, &b.rnn})
        for (const auto &r : *runs) {
            margin = std::min(margin, r.diagnostics.min_floor_margin);
            sigma = std::min(sigma, r.diagnostics.min_desired_sigma);
            solves += r.diagnostics.solves;
        }
    verdict(7, margin >= -1e-6 && sigma >= 0.1 - 1e-6,
            fmt("%d half-steps: min lambda_min(herm S_k) - eps = %.3g, min sigma_min(S_k) = %.6g", solves, margin,
                sigma));
}

void rates() {
    double worst_identity = 0, worst_random = 0;
    for (int d : {1, 2, 3}) {
        const double sigma2 = 0.7;
        ChannelSet ch;
        ch.link = {{cmat::Identity(6, 6)}};
        ch.eve = {cmat::Zero(2, 6)};
        PrecoderSet p;
        p.F = {cmat::Identity(6, d) * std::sqrt(sigma2)};
        worst_identity = std::max(worst_identity, std::abs(user_rate(ch, p, 0, sigma2) - d));
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = seed % 2 ? system_18x12() : system_15x15();
        c.Pt = std::pow(10.0, static_cast<double>(seed % 6));
        const auto ch = generate_channels(c, 1000 + seed);
        const auto p = random_precoders(c, 2000 + seed);
        for (int k = 0; k < c.K; ++k) {
            worst_random = std::max(worst_random,
                                    std::abs(user_rate(ch, p, k, c.sigma2) - oracle::logdet_rate(ch.link[k], p.F, k, c.sigma2)));
            worst_random = std::max(worst_random,
                                    std::abs(leakage_rate(ch, p, k, 1.0) - oracle::logdet_rate(ch.eve, p.F, k, 1.0)));
        }
    }
    verdict(8, worst_identity <= 1e-9 && worst_random <= 1e-9,
            fmt("identity case max |R - d| = %.3g, random instances max |R - oracle| = %.3g", worst_identity,
                worst_random));
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism() {
    std::string csv[2];
    for (int i = 0; i < 2; ++i) {
        auto s = base_spec(system_18x12(), "c9_" + std::to_string(i));
        s.snr_grid_db = {0, 10, 20, 30, 40, 50};
        s.trials = 3;
        s.workers = i == 0 ? 1 : 2;
        const auto res = run_experiment(s);
        emit_all(s, res);
        csv[i] = slurp(fs::path(s.output_dir) / "records.csv");
    }
    verdict(9, !csv[0].empty() && csv[0] == csv[1],
            fmt("records.csv of two identical specs: %zu and %zu bytes, %s", csv[0].size(), csv[1].size(),
                csv[0] == csv[1] ? "identical" : "different"));
}

} // namespace

int main() {
    properness();
    const AlgRuns a = direct_runs(system_18x12(), 20);
    const AlgRuns b = direct_runs(system_15x15(), 20);
    collapse(a);
    ssr_ordering();
    rnn_vs_nn();
    solver_oracle();
    monotonicity(a, b);
    floors(a, b);
    rates();
    determinism();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
