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

#include "nn_ia.hpp"
#include "rnn_ia.hpp"
#include "system_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace secia {

/// Raised for malformed or inconsistent experiment descriptions.
class spec_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Algorithm { nn, rnn, conventional };

inline const char *algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::nn: return "nn";
    case Algorithm::rnn: return "rnn";
    case Algorithm::conventional: return "conventional";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string &s) {
    if (s == "nn")
        return Algorithm::nn;
    if (s == "rnn")
        return Algorithm::rnn;
    if (s == "conventional")
        return Algorithm::conventional;
    throw spec_error("unknown algorithm '" + s + "' (expected nn, rnn or conventional)");
}

struct ExperimentSpec {
    /// Pt is not used: every power is derived from the SNR grid and sigma2.
    SystemConfig config;
    double eavesdropper_sigma2 = 1.0;
    std::vector<double> snr_grid_db{0, 10, 20, 30, 40, 50};
    int trials = 200;
    std::vector<Algorithm> algorithms{Algorithm::nn, Algorithm::rnn, Algorithm::conventional};
    NnIaOptions nn;
    RnnIaOptions rnn;
    int conventional_iterations = 100;
    std::uint64_t master_seed = 1;
    std::string output_dir = "results";
    /// Optimize separately at every SNR point instead of once at the reference.
    bool reoptimize_per_snr = false;
    /// Write measured wall time into records; off gives byte-reproducible CSV.
    bool record_timing = true;
    /// Worker threads; 0 selects the hardware concurrency.
    int workers = 0;

    void validate() const {
        try {
            config.validate();
            nn.validate();
            rnn.validate();
        } catch (const std::invalid_argument &e) {
            throw spec_error(e.what());
        }
        if (trials < 1)
            throw spec_error("trials must be >= 1");
        if (snr_grid_db.empty())
            throw spec_error("snr grid must be nonempty");
        for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
            if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
                throw spec_error("snr grid must be strictly increasing");
        if (algorithms.empty())
            throw spec_error("at least one algorithm is required");
        for (std::size_t i = 0; i < algorithms.size(); ++i)
            for (std::size_t j = i + 1; j < algorithms.size(); ++j)
                if (algorithms[i] == algorithms[j])
                    throw spec_error(std::string("duplicate algorithm ") + algorithm_name(algorithms[i]));
        if (conventional_iterations < 1)
            throw spec_error("conventional.iterations must be >= 1");
        if (!(eavesdropper_sigma2 > 0.0))
            throw spec_error("eve_sigma2 must be positive");
        if (workers < 0)
            throw spec_error("workers must be >= 0");
    }

    /// Lower median of the grid.
    double reference_snr_db() const { return snr_grid_db[(snr_grid_db.size() - 1) / 2]; }

    double power_at(double snr_db) const { return config.sigma2 * std::pow(10.0, snr_db / 10.0); }
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

template <class T>
T parse_number(const std::string &key, const std::string &value) {
    T out{};
    const char *first = value.data();
    const char *last = value.data() + value.size();
    std::from_chars_result r;
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars for double is incomplete on some toolchains
        char *end = nullptr;
        out = std::strtod(value.c_str(), &end);
        r.ptr = end;
        r.ec = (end == first) ? std::errc::invalid_argument : std::errc{};
    } else {
        r = std::from_chars(first, last, out);
    }
    if (r.ec != std::errc{} || r.ptr != last)
        throw spec_error("invalid value '" + value + "' for " + key);
    return out;
}

inline bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw spec_error("invalid boolean '" + value + "' for " + key);
}

} // namespace detail

/// Every recognised configuration key, in file order.
inline const std::vector<std::string> &spec_keys() {
    static const std::vector<std::string> keys{
        "K", "Nt", "Nr", "Nre", "d", "sigma2", "eve_sigma2", "snr", "trials", "algs", "seed", "out",
        "nn.kappa_max", "nn.epsilon", "rnn.kappa_max", "rnn.m_max", "rnn.epsilon", "rnn.gamma", "rnn.zeta",
        "conventional.iterations", "solver.tolerance", "solver.max_iterations", "solver.penalty",
        "reoptimize_per_snr", "timing", "workers"};
    return keys;
}

/// Applies one key = value setting. Solver settings apply to both nn and rnn.
inline void apply_setting(ExperimentSpec &s, const std::string &key, const std::string &value) {
    using detail::parse_number;
    if (key == "K") s.config.K = parse_number<int>(key, value);
    else if (key == "Nt") s.config.Nt = parse_number<int>(key, value);
    else if (key == "Nr") s.config.Nr = parse_number<int>(key, value);
    else if (key == "Nre") s.config.Nre = parse_number<int>(key, value);
    else if (key == "d") s.config.d = parse_number<int>(key, value);
    else if (key == "sigma2") s.config.sigma2 = parse_number<double>(key, value);
    else if (key == "eve_sigma2") s.eavesdropper_sigma2 = parse_number<double>(key, value);
    else if (key == "snr") {
        s.snr_grid_db.clear();
        for (const auto &v : detail::split_list(value))
            s.snr_grid_db.push_back(parse_number<double>(key, v));
    } else if (key == "trials") s.trials = parse_number<int>(key, value);
    else if (key == "algs") {
        s.algorithms.clear();
        for (const auto &v : detail::split_list(value))
            s.algorithms.push_back(parse_algorithm(v));
    } else if (key == "seed") s.master_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "out") s.output_dir = value;
    else if (key == "nn.kappa_max") s.nn.kappa_max = parse_number<int>(key, value);
    else if (key == "nn.epsilon") s.nn.epsilon = parse_number<double>(key, value);
    else if (key == "rnn.kappa_max") s.rnn.kappa_max = parse_number<int>(key, value);
    else if (key == "rnn.m_max") s.rnn.m_max = parse_number<int>(key, value);
    else if (key == "rnn.epsilon") s.rnn.epsilon = parse_number<double>(key, value);
    else if (key == "rnn.gamma") s.rnn.gamma = parse_number<double>(key, value);
    else if (key == "rnn.zeta") s.rnn.zeta = parse_number<double>(key, value);
    else if (key == "conventional.iterations") s.conventional_iterations = parse_number<int>(key, value);
    else if (key == "solver.tolerance") s.nn.solver.tolerance = s.rnn.solver.tolerance = parse_number<double>(key, value);
    else if (key == "solver.max_iterations")
        s.nn.solver.max_iterations = s.rnn.solver.max_iterations = parse_number<int>(key, value);
    else if (key == "solver.penalty") s.nn.solver.penalty = s.rnn.solver.penalty = parse_number<double>(key, value);
    else if (key == "reoptimize_per_snr") s.reoptimize_per_snr = detail::parse_bool(key, value);
    else if (key == "timing") s.record_timing = detail::parse_bool(key, value);
    else if (key == "workers") s.workers = parse_number<int>(key, value);
    else throw spec_error("unknown key '" + key + "'");
}

/// Parses flat `key = value` text; `#` starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream &in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw spec_error("line " + std::to_string(lineno) + ": expected key = value");
        auto key = detail::trim(line.substr(0, eq));
        auto value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw spec_error("line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline ExperimentSpec load_spec(const std::string &path, const std::map<std::string, std::string> &overrides = {}) {
    ExperimentSpec s;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw spec_error("cannot open config file " + path);
        for (const auto &[k, v] : parse_key_values(in))
            apply_setting(s, k, v);
    }
    for (const auto &[k, v] : overrides)
        apply_setting(s, k, v);
    s.validate();
    return s;
}

/// Canonical key = value rendering; identical specs render identically.
inline std::string render_spec(const ExperimentSpec &s) {
    std::ostringstream o;
    auto list = [&](const auto &xs, auto &&f) {
        std::string r;
        for (std::size_t i = 0; i < xs.size(); ++i)
            r += (i ? "," : "") + f(xs[i]);
        return r;
    };
    auto num = [](double v) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    };
    o << "K = " << s.config.K << "\nNt = " << s.config.Nt << "\nNr = " << s.config.Nr << "\nNre = " << s.config.Nre
      << "\nd = " << s.config.d << "\nsigma2 = " << num(s.config.sigma2) << "\neve_sigma2 = " << num(s.eavesdropper_sigma2)
      << "\nsnr = " << list(s.snr_grid_db, num) << "\ntrials = " << s.trials
      << "\nalgs = " << list(s.algorithms, [](Algorithm a) { return std::string(algorithm_name(a)); })
      << "\nseed = " << s.master_seed << "\nout = " << s.output_dir << "\nnn.kappa_max = " << s.nn.kappa_max
      << "\nnn.epsilon = " << num(s.nn.epsilon) << "\nrnn.kappa_max = " << s.rnn.kappa_max
      << "\nrnn.m_max = " << s.rnn.m_max << "\nrnn.epsilon = " << num(s.rnn.epsilon) << "\nrnn.gamma = " << num(s.rnn.gamma)
      << "\nrnn.zeta = " << num(s.rnn.zeta) << "\nconventional.iterations = " << s.conventional_iterations
      << "\nsolver.tolerance = " << num(s.nn.solver.tolerance) << "\nsolver.max_iterations = " << s.nn.solver.max_iterations
      << "\nsolver.penalty = " << num(s.nn.solver.penalty)
      << "\nreoptimize_per_snr = " << (s.reoptimize_per_snr ? "true" : "false")
      << "\ntiming = " << (s.record_timing ? "true" : "false") << "\nworkers = " << s.workers << "\n";
    return o.str();
}

} // namespace secia
