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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid_spec = 1;
constexpr int exit_runtime = 2;

struct SpecArgs {
    std::string config_path;
    std::map<std::string, std::string> overrides;
};

void add_spec_options(CLI::App *cmd, SpecArgs &args, const std::vector<std::string> &keys) {
    cmd->add_option("--config", args.config_path, "flat key = value config file");
    for (const auto &key : keys)
        cmd->add_option_function<std::string>(
            "--" + key, [&args, key](const std::string &v) { args.overrides[key] = v; },
            "override config key " + key);
}

void print_summary(const secia::ExperimentResult &res) {
    std::printf("%-14s %8s %14s %12s %6s %6s\n", "algorithm", "snr_db", "mean_ssr", "std_error", "n", "failed");
    for (const auto &r : res.summary)
        std::printf("%-14s %8g %14.6f %12.6f %6d %6d\n", r.algorithm.c_str(), r.snr_db, r.mean_ssr, r.std_error,
                    r.count, r.failed);
}

int cmd_run(const SpecArgs &args) {
    secia::ExperimentSpec spec;
    try {
        spec = secia::load_spec(args.config_path, args.overrides);
    } catch (const std::exception &e) {
        std::cerr << "invalid spec: " << e.what() << '\n';
        return exit_invalid_spec;
    }
    try {
        std::cerr << "running " << spec.config.label() << ", " << spec.trials << " trials, output "
                  << spec.output_dir << '\n';
        const secia::ExperimentResult res = secia::run_experiment(spec);
        secia::emit_all(spec, res);
        if (res.resumed_units > 0)
            std::cerr << "resumed " << res.resumed_units << " completed units from the journal\n";
        print_summary(res);
        if (!res.failures.empty())
            std::cerr << res.failures.size() << " trial/algorithm units failed; see failures.csv\n";
        return exit_ok;
    } catch (const std::exception &e) {
        std::cerr << "runtime failure: " << e.what() << "\ncompleted units remain in " << spec.output_dir
                  << "/journal.jsonl and are reused on the next run\n";
        return exit_runtime;
    }
}

int cmd_plot(const std::string &in, const std::vector<std::string> &overlays, const std::string &out,
             const std::string &title) {
    try {
        auto rows = secia::summarize(secia::read_csv(in));
        for (const auto &o : overlays) {
            auto extra = secia::read_summary_csv(o);
            rows.insert(rows.end(), extra.begin(), extra.end());
        }
        secia::emit_plot(rows, out, title);
        return exit_ok;
    } catch (const std::exception &e) {
        std::cerr << "plot failed: " << e.what() << '\n';
        return exit_runtime;
    }
}

int cmd_check(const SpecArgs &args) {
    secia::ExperimentSpec spec;
    try {
        spec = secia::load_spec(args.config_path, args.overrides);
    } catch (const std::exception &e) {
        std::cerr << "invalid spec: " << e.what() << '\n';
        return exit_invalid_spec;
    }
    const auto r = secia::check_properness(spec.config);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    const auto &c = spec.config;
    std::printf("system %s\n", c.label().c_str());
    std::printf("  Nt - d >= Nre                          %s  (%d >= %d)\n", yn(r.tx_nullspace), c.Nt - c.d, c.Nre);
    std::printf("  Nr >= K d                              %s  (%d >= %d)\n", yn(r.rx_dimensions), c.Nr, c.K * c.d);
    std::printf("  Nre (K-1) <= K(Nt+Nr) - (K^2+1) d      %s  (%d <= %d)\n", yn(r.eavesdropper_bound),
                c.Nre * (c.K - 1), c.K * (c.Nt + c.Nr) - (c.K * c.K + 1) * c.d);
    std::printf("proper: %s\n", yn(r.proper));
    return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"secure interference alignment simulator"};
    app.require_subcommand(1);

    SpecArgs run_args, check_args;
    auto *run = app.add_subcommand("run", "run a Monte-Carlo SSR experiment");
    add_spec_options(run, run_args, secia::spec_keys());

    std::string plot_in, plot_out, plot_title;
    std::vector<std::string> overlays;
    auto *plot = app.add_subcommand("plot", "render records CSV as an SVG of mean SSR vs SNR");
    plot->add_option("input", plot_in, "records CSV from run")->required();
    plot->add_option("-o,--out", plot_out, "output SVG path")->required();
    plot->add_option("--overlay", overlays, "extra curves: CSV with algorithm,snr_db,mean_ssr[,std_error]");
    plot->add_option("--title", plot_title, "plot title");

    auto *check = app.add_subcommand("check", "print the properness report for a system");
    add_spec_options(check, check_args, secia::spec_keys());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid_spec;
    }
    if (*run)
        return cmd_run(run_args);
    if (*plot)
        return cmd_plot(plot_in, overlays, plot_out, plot_title);
    return cmd_check(check_args);
}
