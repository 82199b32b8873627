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
#include "random.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace secia {

/// Dimensions of an (Nt x Nr, Nre, d)^K system plus power and noise.
struct SystemConfig {
    int K = 3;
    int Nt = 18;
    int Nr = 12;
    int Nre = 9;
    int d = 3;
    double Pt = 1.0;
    double sigma2 = 1.0;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const {
        if (K < 1 || Nt < 1 || Nr < 1 || Nre < 1 || d < 1)
            throw std::invalid_argument("all dimensions must be >= 1");
        if (d > Nt || d > Nr)
            throw std::invalid_argument("d must not exceed min(Nt, Nr)");
        if (!(Pt > 0.0) || !std::isfinite(Pt))
            throw std::invalid_argument("Pt must be positive and finite");
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
            throw std::invalid_argument("sigma2 must be positive and finite");
    }

    double snr() const { return Pt / sigma2; }
    double snr_db() const { return 10.0 * std::log10(snr()); }

    /// Columns of the wiretapped-signal matrix (all streams).
    int total_streams() const { return K * d; }
    int eavesdropper_rank_dims() const { return std::min(Nre, K * d); }

    std::string label() const {
        return "(" + std::to_string(Nt) + "x" + std::to_string(Nr) + "," + std::to_string(Nre) + "," +
               std::to_string(d) + ")^" + std::to_string(K);
    }
};

inline SystemConfig make_config(int K, int Nt, int Nr, int Nre, int d, double Pt = 1.0,
                                double sigma2 = 1.0) {
    SystemConfig c{K, Nt, Nr, Nre, d, Pt, sigma2};
    c.validate();
    return c;
}

/// Legitimate links only: link[k][l] is the Nr x Nt channel from Tx l to Rx k.
using LinkGrid = std::vector<std::vector<cmat>>;

struct ChannelSet {
    LinkGrid link;
    /// eve[l] is the Nre x Nt channel from Tx l to the eavesdropper.
    std::vector<cmat> eve;
    std::uint64_t seed = 0;

    int users() const { return static_cast<int>(link.size()); }
};

struct PrecoderSet {
    std::vector<cmat> F;
};

struct ReceiverSet {
    std::vector<cmat> W;
};

/// Draws every channel matrix i.i.d. CN(0,1). Legitimate links are drawn
/// first in (k, l) order, then the eavesdropper rows.
inline ChannelSet generate_channels(const SystemConfig &config, std::uint64_t seed) {
    config.validate();
    auto gen = rng::stream(seed, 0, "channels");
    ChannelSet out;
    out.seed = seed;
    out.link.resize(config.K);
    for (int k = 0; k < config.K; ++k)
        for (int l = 0; l < config.K; ++l)
            out.link[k].push_back(complex_gaussian(config.Nr, config.Nt, gen));
    for (int l = 0; l < config.K; ++l)
        out.eve.push_back(complex_gaussian(config.Nre, config.Nt, gen));
    return out;
}

struct PropernessReport {
    bool tx_nullspace = false;      // Nt - d >= Nre
    bool rx_dimensions = false;     // Nr >= K d
    bool eavesdropper_bound = false; // Nre <= (K(Nt+Nr) - (K^2+1)d) / (K-1)
    bool proper = false;            // tx_nullspace && rx_dimensions
};

inline PropernessReport check_properness(const SystemConfig &c) {
    c.validate();
    PropernessReport r;
    const long long K = c.K, Nt = c.Nt, Nr = c.Nr, Nre = c.Nre, d = c.d;
    r.tx_nullspace = Nt - d >= Nre;
    r.rx_dimensions = Nr >= K * d;
    // Cross-multiplied to stay in integers; vacuous for a single pair.
    r.eavesdropper_bound = K == 1 || Nre * (K - 1) <= K * (Nt + Nr) - (K * K + 1) * d;
    r.proper = r.tx_nullspace && r.rx_dimensions;
    return r;
}

/// Q sqrt(column_scale) with Q the thin-QR orthonormal factor of m. The
/// phase of each column is fixed by making diag(R) real positive, so an
/// input with orthonormal columns is returned unchanged.
inline cmat orthonormalize(const cmat &m, double column_scale) {
    if (!(column_scale > 0.0))
        throw std::invalid_argument("orthonormalize: column_scale must be positive");
    if (m.cols() == 0 || m.cols() > m.rows())
        throw dimension_error("orthonormalize: need a tall matrix, got " + shape_str(m));
    if (!m.allFinite())
        throw degenerate_iterate("orthonormalize: non-finite entries");
    const rvec sv = singular_values(m);
    if (sv(0) == 0.0 || sv(sv.size() - 1) < 1e-12 * sv(0))
        throw degenerate_iterate("orthonormalize: rank-deficient input (sigma_min/sigma_max = " +
                                 std::to_string(sv(0) == 0.0 ? 0.0 : sv(sv.size() - 1) / sv(0)) + ")");
    Eigen::HouseholderQR<cmat> qr(m);
    const Eigen::Index n = m.cols();
    cmat q = qr.householderQ() * cmat::Identity(m.rows(), n);
    const cmat r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx rjj = r(j, j);
        q.col(j) *= rjj / std::abs(rjj);
    }
    return q * std::sqrt(column_scale);
}

/// F_k = Q sqrt(Pt/d), Q from the QR of an Nt x d complex Gaussian draw.
inline PrecoderSet random_precoders(const SystemConfig &config, std::uint64_t seed) {
    config.validate();
    auto gen = rng::stream(seed, 0, "precoders");
    PrecoderSet out;
    for (int k = 0; k < config.K; ++k)
        out.F.push_back(orthonormalize(complex_gaussian(config.Nt, config.d, gen), config.Pt / config.d));
    return out;
}

inline PrecoderSet rescale_power(const PrecoderSet &p, double from_Pt, double to_Pt) {
    PrecoderSet out = p;
    const double s = std::sqrt(to_Pt / from_Pt);
    for (auto &f : out.F)
        f *= s;
    return out;
}

} // namespace secia
