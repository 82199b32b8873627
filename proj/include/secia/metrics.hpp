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
#include "system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace secia {

/// Raised when a rate cannot be evaluated (covariance not positive definite
/// or a non-finite log-determinant).
class rate_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RateReport {
    std::vector<double> per_user_rate;
    std::vector<double> per_user_leakage;
    std::vector<double> per_user_secrecy;
    double ssr = 0.0;
};

namespace detail {

inline double log2_det_hpd(const cmat &a, const char *what) {
    const cmat h = hermitian_part(a);
    Eigen::LLT<cmat> llt(h);
    if (llt.info() != Eigen::Success) {
        const rvec ev = Eigen::SelfAdjointEigenSolver<cmat>(h, Eigen::EigenvaluesOnly).eigenvalues();
        throw rate_error(std::string(what) + ": covariance not positive definite (eigenvalues in [" +
                         std::to_string(ev(0)) + ", " + std::to_string(ev(ev.size() - 1)) + "])");
    }
    const double v = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum() / std::log(2.0);
    if (!std::isfinite(v))
        throw rate_error(std::string(what) + ": non-finite log-determinant");
    return v;
}

/// log2 det(I + S R^{-1}) = log2 det(R + S) - log2 det(R), with
/// S = H_k F_k F_k^H H_k^H and R = sum_{l != k} H_l F_l F_l^H H_l^H + noise I.
inline double mutual_information(const std::vector<cmat> &channels, const PrecoderSet &tx, int k, double noise,
                                 const char *what) {
    const int K = static_cast<int>(tx.F.size());
    if (k < 0 || k >= K || static_cast<int>(channels.size()) != K)
        throw std::out_of_range(std::string(what) + ": user index out of range");
    const Eigen::Index n = channels[k].rows();
    cmat r = noise * cmat::Identity(n, n);
    for (int l = 0; l < K; ++l)
        if (l != k) {
            const cmat hf = channels[l] * tx.F[l];
            r.noalias() += hf * hf.adjoint();
        }
    const cmat hf = channels[k] * tx.F[k];
    const cmat s = hf * hf.adjoint();
    return std::max(0.0, log2_det_hpd(r + s, what) - log2_det_hpd(r, what));
}

} // namespace detail

/// Achievable rate of pair k (0-based): the receiver W_k does not enter.
inline double user_rate(const ChannelSet &ch, const PrecoderSet &tx, int k, double sigma2) {
    if (k < 0 || k >= ch.users())
        throw std::out_of_range("user_rate: user index out of range");
    return detail::mutual_information(ch.link[k], tx, k, sigma2, "user_rate");
}

/// Rate leaked from Tx k (0-based) to the eavesdropper.
inline double leakage_rate(const ChannelSet &ch, const PrecoderSet &tx, int k, double sigma2) {
    return detail::mutual_information(ch.eve, tx, k, sigma2, "leakage_rate");
}

/// Clamped per-user differences and their sum.
inline RateReport assemble_rate_report(std::vector<double> rates, std::vector<double> leakages) {
    if (rates.size() != leakages.size())
        throw dimension_error("assemble_rate_report: size mismatch");
    RateReport r;
    r.per_user_rate = std::move(rates);
    r.per_user_leakage = std::move(leakages);
    for (std::size_t k = 0; k < r.per_user_rate.size(); ++k)
        r.per_user_secrecy.push_back(std::max(0.0, r.per_user_rate[k] - r.per_user_leakage[k]));
    r.ssr = std::accumulate(r.per_user_secrecy.begin(), r.per_user_secrecy.end(), 0.0);
    return r;
}

inline RateReport secrecy_sum_rate(const ChannelSet &ch, const PrecoderSet &tx, double sigma2,
                                   double eavesdropper_sigma2) {
    std::vector<double> rates, leaks;
    for (int k = 0; k < ch.users(); ++k) {
        rates.push_back(user_rate(ch, tx, k, sigma2));
        leaks.push_back(leakage_rate(ch, tx, k, eavesdropper_sigma2));
    }
    return assemble_rate_report(std::move(rates), std::move(leaks));
}

inline RateReport secrecy_sum_rate(const ChannelSet &ch, const PrecoderSet &tx, double sigma2) {
    return secrecy_sum_rate(ch, tx, sigma2, sigma2);
}

} // namespace secia
