// SPDX-License-Identifier: Apache-2.0
//
// scnet - complex-valued downlink CSI prediction for FDD massive MIMO
// Copyright (C) 2026 The scnet authors
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

// Complex <-> stacked real conversion: h -> (Re h; Im h).

#include <string>

#include <Eigen/Dense>

#include "scnet/error.hpp"

namespace scnet {

/// Stacks every column as (re; im).
template <class Derived>
Eigen::MatrixXd pack(const Eigen::MatrixBase<Derived>& z) {
    Eigen::MatrixXd out(2 * z.rows(), z.cols());
    out.topRows(z.rows()) = z.real();
    out.bottomRows(z.rows()) = z.imag();
    return out;
}

/// Inverse of pack; throws ShapeError on an odd row count.
template <class Derived>
Eigen::MatrixXcd unpack(const Eigen::MatrixBase<Derived>& x) {
    if (x.rows() % 2 != 0)
        throw ShapeError("stacked real input must have an even length, got " + std::to_string(x.rows()));
    const auto n = x.rows() / 2;
    Eigen::MatrixXcd out(n, x.cols());
    out.real() = x.topRows(n);
    out.imag() = x.bottomRows(n);
    return out;
}

} // namespace scnet
