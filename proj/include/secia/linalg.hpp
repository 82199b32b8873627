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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace secia {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

/// Thrown when matrix operands do not conform.
class dimension_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterate collapses (rank deficiency, non-finite values).
class degenerate_iterate : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string shape_str(const cmat &m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline void require_shape(const cmat &m, Eigen::Index rows, Eigen::Index cols, const char *what) {
    if (m.rows() != rows || m.cols() != cols)
        throw dimension_error(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                              std::to_string(cols) + ", got " + shape_str(m));
}

/// Singular values in descending order; empty matrices yield an empty vector.
inline rvec singular_values(const cmat &m) {
    if (m.size() == 0)
        return rvec{};
    return Eigen::JacobiSVD<cmat>(m).singularValues();
}

inline double nuclear_norm(const cmat &m) { return singular_values(m).sum(); }

inline cmat hermitian_part(const cmat &m) { return (m + m.adjoint()) / 2.0; }

} // namespace secia
