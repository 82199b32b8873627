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
#include "baseline_ia.hpp"
#include "config.hpp"
#include "metrics.hpp"
#include "nn_ia.hpp"
#include "rnn_ia.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace secia {

/// Hard I/O failure; the run aborts with whatever was already journalled.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TrialRecord {
    std::string algorithm;
    int trial = 0;
    double snr_db = 0.0;
    double ssr = 0.0;
    std::vector<double> rates;
    std::vector<double> leakages;
    double interference_power = 0.0;
    double wiretap_power = 0.0;
    // objective history summary
    double initial_objective = 0.0;
    double final_objective = 0.0;
    int outer_iterations = 0;
    int nonconverged_solves = 0;
    double wall_ms = 0.0;
};

struct TrialFailure {
    std::string algorithm;
    int trial = 0;
    std::string message;
};

struct SummaryRow {
    std::string algorithm;
    double snr_db = 0.0;
    double mean_ssr = 0.0;
    double std_error = 0.0;
    int count = 0;
    int failed = 0;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;
    std::vector<TrialFailure> failures;
    std::vector<SummaryRow> summary;
    int resumed_units = 0;
};

inline bool record_less(const TrialRecord &a, const TrialRecord &b) {
    return std::tie(a.algorithm, a.snr_db, a.trial) < std::tie(b.algorithm, b.snr_db, b.trial);
}

/// Mean SSR and standard error (sample sd / sqrt(n)) per algorithm and SNR.
inline std::vector<SummaryRow> summarize(const std::vector<TrialRecord> &records,
                                         const std::vector<TrialFailure> &failures = {},
                                         const std::vector<double> &snr_grid = {}) {
    std::map<std::pair<std::string, double>, std::vector<double>> groups;
    for (const auto &r : records)
        groups[{r.algorithm, r.snr_db}].push_back(r.ssr);
    std::map<std::string, int> failed;
    for (const auto &f : failures)
        ++failed[f.algorithm];
    for (const auto &[alg, n] : failed)
        for (double s : snr_grid)
            groups[{alg, s}];
    std::vector<SummaryRow> out;
    for (const auto &[key, v] : groups) {
        SummaryRow row{key.first, key.second};
        row.count = static_cast<int>(v.size());
        row.failed = failed.count(key.first) ? failed[key.first] : 0;
        if (!v.empty()) {
            row.mean_ssr = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
            if (v.size() > 1) {
                double ss = 0.0;
                for (double x : v)
                    ss += (x - row.mean_ssr) * (x - row.mean_ssr);
                row.std_error = std::sqrt(ss / (v.size() - 1) / v.size());
            }
        } else {
            row.mean_ssr = std::nan("");
        }
        out.push_back(row);
    }
    return out;
}

namespace detail {

inline std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Identifies the computation; output location, worker count and timing do not matter.
inline std::string spec_fingerprint(const ExperimentSpec &s) {
    ExperimentSpec t = s;
    t.output_dir.clear();
    t.workers = 0;
    t.record_timing = false;
    std::string text = render_spec(t);
    for (const SolverOptions *o : {&s.nn.solver, &s.rnn.solver}) {
        char extra[160];
        std::snprintf(extra, sizeof extra, "%.17g %d %.17g %d %d %.17g %.17g\n", o->tolerance, o->max_iterations,
                      o->penalty, o->adaptive_penalty ? 1 : 0, o->adapt_interval, o->relaxation,
                      o->feasibility_tolerance);
        text += extra;
    }
    text += std::to_string(s.nn.stop_tolerance) + " " + std::to_string(s.rnn.stop_tolerance);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return buf;
}

inline nlohmann::json to_json(const TrialRecord &r) {
    return {{"snr_db", r.snr_db},
            {"ssr", r.ssr},
            {"rates", r.rates},
            {"leakages", r.leakages},
            {"interf_power", r.interference_power},
            {"wiretap_power", r.wiretap_power},
            {"initial_objective", r.initial_objective},
            {"final_objective", r.final_objective},
            {"outer_iterations", r.outer_iterations},
            {"nonconverged_solves", r.nonconverged_solves},
            {"wall_ms", r.wall_ms}};
}

inline TrialRecord record_from_json(const nlohmann::json &j, const std::string &alg, int trial) {
    TrialRecord r;
    r.algorithm = alg;
    r.trial = trial;
    r.snr_db = j.at("snr_db").get<double>();
    r.ssr = j.at("ssr").get<double>();
    r.rates = j.at("rates").get<std::vector<double>>();
    r.leakages = j.at("leakages").get<std::vector<double>>();
    r.interference_power = j.at("interf_power").get<double>();
    r.wiretap_power = j.at("wiretap_power").get<double>();
    r.initial_objective = j.at("initial_objective").get<double>();
    r.final_objective = j.at("final_objective").get<double>();
    r.outer_iterations = j.at("outer_iterations").get<int>();
    r.nonconverged_solves = j.at("nonconverged_solves").get<int>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

struct Unit {
    std::vector<TrialRecord> records;
    std::optional<TrialFailure> failure;
};

using UnitKey = std::pair<int, std::string>; // (trial, algorithm)

/// Loads completed units from a journal written for the same fingerprint.
inline std::map<UnitKey, Unit> load_journal(const std::filesystem::path &path, const std::string &fingerprint) {
    std::map<UnitKey, Unit> out;
    std::ifstream in(path);
    if (!in)
        return out;
    std::string line;
    bool header_ok = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception &) {
            break; // torn tail from an interrupted write
        }
        if (!header_ok) {
            if (!j.contains("fingerprint") || j["fingerprint"] != fingerprint)
                return {};
            header_ok = true;
            continue;
        }
        const int trial = j.at("trial").get<int>();
        const std::string alg = j.at("algorithm").get<std::string>();
        Unit u;
        if (j.contains("error")) {
            u.failure = TrialFailure{alg, trial, j["error"].get<std::string>()};
        } else {
            for (const auto &rj : j.at("records"))
                u.records.push_back(record_from_json(rj, alg, trial));
        }
        out[{trial, alg}] = std::move(u);
    }
    return out;
}

inline nlohmann::json unit_json(const UnitKey &key, const Unit &u) {
    nlohmann::json j{{"trial", key.first}, {"algorithm", key.second}};
    if (u.failure) {
        j["error"] = u.failure->message;
    } else {
        j["records"] = nlohmann::json::array();
        for (const auto &r : u.records)
            j["records"].push_back(to_json(r));
    }
    return j;
}

struct Design {
    PrecoderSet precoders;
    ReceiverSet receivers;
    double initial_objective = 0.0;
    double final_objective = 0.0;
    int outer_iterations = 0;
    int nonconverged = 0;
};

inline Design optimize(const ExperimentSpec &spec, Algorithm alg, const ChannelSet &ch, double Pt,
                       std::uint64_t init_seed) {
    SystemConfig cfg = spec.config;
    cfg.Pt = Pt;
    Design out;
    switch (alg) {
    case Algorithm::nn: {
        NnIaOptions o = spec.nn;
        o.seed = init_seed;
        const IaResult r = run_nn_ia(ch, cfg, o);
        out = {r.precoders, r.receivers, r.initial_objective, r.history.back(), r.outer_iterations,
               r.diagnostics.nonconverged};
        break;
    }
    case Algorithm::rnn: {
        RnnIaOptions o = spec.rnn;
        o.seed = init_seed;
        const IaResult r = run_rnn_ia(ch, cfg, o);
        out = {r.precoders, r.receivers, r.initial_objective, r.history.back(), r.outer_iterations,
               r.diagnostics.nonconverged};
        break;
    }
    case Algorithm::conventional: {
        const BaselineResult r = run_min_leakage_ia(ch.link, cfg, spec.conventional_iterations, init_seed);
        out = {r.precoders, r.receivers, r.leakage_history.front(), r.leakage_history.back(),
               static_cast<int>(r.leakage_history.size()), 0};
        break;
    }
    }
    return out;
}

inline TrialRecord evaluate(const ExperimentSpec &spec, const ChannelSet &ch, const Design &design, double from_Pt,
                            double snr_db) {
    const double Pt = spec.power_at(snr_db);
    const PrecoderSet F = rescale_power(design.precoders, from_Pt, Pt);
    const RateReport rr = secrecy_sum_rate(ch, F, spec.config.sigma2, spec.eavesdropper_sigma2);
    const LeakagePowers lp = leakage_powers(build_alignment_state(ch, F, design.receivers));
    TrialRecord r;
    r.snr_db = snr_db;
    r.ssr = rr.ssr;
    r.rates = rr.per_user_rate;
    r.leakages = rr.per_user_leakage;
    r.interference_power = lp.interference;
    r.wiretap_power = lp.wiretap;
    r.initial_objective = design.initial_objective;
    r.final_objective = design.final_objective;
    r.outer_iterations = design.outer_iterations;
    r.nonconverged_solves = design.nonconverged;
    return r;
}

} // namespace detail

/// Channel seed for a trial. Independent of the algorithm list.
inline std::uint64_t trial_channel_seed(std::uint64_t master, int trial) {
    return rng::derive(master, static_cast<std::uint64_t>(trial), "channels");
}

/// Initial-precoder seed for a trial, shared by every algorithm (paired runs).
inline std::uint64_t trial_init_seed(std::uint64_t master, int trial) {
    return rng::derive(master, static_cast<std::uint64_t>(trial), "init-precoders");
}

/// Runs one (trial, algorithm) unit. Algorithm exceptions become a failure entry.
inline detail::Unit run_unit(const ExperimentSpec &spec, int trial, Algorithm alg) {
    using clock = std::chrono::steady_clock;
    detail::Unit u;
    try {
        const ChannelSet ch = generate_channels(spec.config, trial_channel_seed(spec.master_seed, trial));
        const std::uint64_t init = trial_init_seed(spec.master_seed, trial);
        auto stamp = [&](TrialRecord &r, clock::time_point t0) {
            r.algorithm = algorithm_name(alg);
            r.trial = trial;
            r.wall_ms = spec.record_timing
                            ? std::chrono::duration<double, std::milli>(clock::now() - t0).count()
                            : 0.0;
        };
        if (spec.reoptimize_per_snr) {
            for (double s : spec.snr_grid_db) {
                const auto t0 = clock::now();
                const double Pt = spec.power_at(s);
                const detail::Design d = detail::optimize(spec, alg, ch, Pt, init);
                u.records.push_back(detail::evaluate(spec, ch, d, Pt, s));
                stamp(u.records.back(), t0);
            }
        } else {
            const auto t0 = clock::now();
            const double Pref = spec.power_at(spec.reference_snr_db());
            const detail::Design d = detail::optimize(spec, alg, ch, Pref, init);
            for (double s : spec.snr_grid_db) {
                u.records.push_back(detail::evaluate(spec, ch, d, Pref, s));
                stamp(u.records.back(), t0);
            }
        }
    } catch (const std::exception &e) {
        u.records.clear();
        u.failure = TrialFailure{algorithm_name(alg), trial, e.what()};
    }
    return u;
}

/// Runs every (trial, algorithm) unit not already present in the journal under
/// spec.output_dir, then returns merged records sorted by (algorithm, snr_db, trial).
/// Throws io_error when the journal cannot be written.
inline ExperimentResult run_experiment(const ExperimentSpec &spec) {
    spec.validate();
    namespace fs = std::filesystem;
    const fs::path dir(spec.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create output directory " + dir.string() + ": " + ec.message());
    const fs::path journal_path = dir / "journal.jsonl";
    const std::string fp = detail::spec_fingerprint(spec);

    std::map<detail::UnitKey, detail::Unit> done = detail::load_journal(journal_path, fp);
    ExperimentResult result;
    result.resumed_units = 0;

    std::vector<detail::UnitKey> todo;
    std::vector<Algorithm> todo_alg;
    for (int t = 0; t < spec.trials; ++t)
        for (Algorithm a : spec.algorithms) {
            const detail::UnitKey key{t, algorithm_name(a)};
            if (done.count(key))
                ++result.resumed_units;
            else {
                todo.push_back(key);
                todo_alg.push_back(a);
            }
        }

    // rewrite the journal so it holds exactly the resumed units
    {
        std::ofstream out(journal_path, std::ios::trunc);
        if (!out)
            throw io_error("cannot write " + journal_path.string());
        out << nlohmann::json{{"fingerprint", fp}}.dump() << '\n';
        for (const auto &[key, u] : done)
            out << detail::unit_json(key, u).dump() << '\n';
        out.flush();
        if (!out)
            throw io_error("write failed on " + journal_path.string());
    }

    std::ofstream journal(journal_path, std::ios::app);
    if (!journal)
        throw io_error("cannot append to " + journal_path.string());
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> io_failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size() || io_failed)
                return;
            detail::Unit u = run_unit(spec, todo[i].first, todo_alg[i]);
            std::lock_guard<std::mutex> lock(mu);
            journal << detail::unit_json(todo[i], u).dump() << '\n';
            journal.flush();
            if (!journal)
                io_failed = true;
            done[todo[i]] = std::move(u);
        }
    };
    int n = spec.workers > 0 ? spec.workers : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(1, std::min<int>(n, static_cast<int>(todo.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (io_failed)
        throw io_error("journal write failed on " + journal_path.string());

    for (auto &[key, u] : done) {
        if (u.failure)
            result.failures.push_back(*u.failure);
        else
            for (auto &r : u.records)
                result.records.push_back(r);
    }
    std::sort(result.records.begin(), result.records.end(), record_less);
    result.summary = summarize(result.records, result.failures, spec.snr_grid_db);
    return result;
}

} // namespace secia
