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

#include <cstdint>
#include <random>
#include <string_view>

namespace secia {

/// Independent random streams keyed by (seed, trial, purpose).
///
/// A stream is an mt19937_64 whose state is seeded from a SplitMix64 hash of
/// the key, so adding a new purpose never shifts the draws of another one.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a, stable across platforms (std::hash is not).
constexpr std::uint64_t purpose_tag(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t trial, std::string_view purpose) {
    return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ purpose_tag(purpose));
}

using engine = std::mt19937_64;

inline engine stream(std::uint64_t seed, std::uint64_t trial, std::string_view purpose) {
    return engine{derive(seed, trial, purpose)};
}

} // namespace rng

/// rows x cols matrix with i.i.d. CN(0,1) entries (real and imaginary parts
/// N(0, 1/2)), filled column-major.
inline cmat complex_gaussian(Eigen::Index rows, Eigen::Index cols, rng::engine &gen) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    cmat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(gen);
            const double im = normal(gen);
            m(i, j) = cplx(re, im);
        }
    return m;
}

} // namespace secia
