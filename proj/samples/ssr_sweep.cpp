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

// SSR sweep for one channel realization: NN, RNN and min-leakage IA designed
// once at 30 dB and evaluated across the grid.

#include <secia/baseline_ia.hpp>
#include <secia/metrics.hpp>
#include <secia/nn_ia.hpp>
#include <secia/rnn_ia.hpp>

#include <cstdio>
#include <cstdlib>

int main(int argc, char **argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    const double ref_db = 30.0;
    secia::SystemConfig cfg = secia::make_config(3, 18, 12, 9, 3, std::pow(10.0, ref_db / 10.0));
    const auto ch = secia::generate_channels(cfg, seed);
    std::printf("system %s, seed %llu\n", cfg.label().c_str(), static_cast<unsigned long long>(seed));

    secia::NnIaOptions nn;
    nn.seed = seed;
    const auto a = secia::run_nn_ia(ch, cfg, nn);
    secia::RnnIaOptions rnn;
    rnn.seed = seed;
    const auto b = secia::run_rnn_ia(ch, cfg, rnn);
    const auto c = secia::run_min_leakage_ia(ch.link, cfg, 100, seed);

    std::printf("NN objective %.3e -> %.3e in %d iterations\n", a.initial_objective, a.history.back(),
                a.outer_iterations);
    std::printf("RNN surrogate %.4f -> %.4f in %d iterations\n", b.initial_objective, b.history.back(),
                b.outer_iterations);
    std::printf("%8s %10s %10s %10s\n", "snr_db", "nn", "rnn", "min-leak");
    for (double s = 0; s <= 50; s += 10) {
        const double P = std::pow(10.0, s / 10.0);
        auto ssr = [&](const secia::PrecoderSet &p) {
            return secia::secrecy_sum_rate(ch, secia::rescale_power(p, cfg.Pt, P), 1.0).ssr;
        };
        std::printf("%8g %10.3f %10.3f %10.3f\n", s, ssr(a.precoders), ssr(b.precoders), ssr(c.precoders));
    }
}
