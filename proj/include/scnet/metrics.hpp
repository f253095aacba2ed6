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

#include <cstddef>
#include <cstdint>
#include <iostream>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "scnet/error.hpp"

namespace scnet {

struct NmseReport {
    double value = 0.0;
    std::size_t used = 0;     // samples with a nonzero label
    std::size_t excluded = 0; // zero-norm labels left out
};

/// Mean over samples (columns) of |label - pred|^2 / |label|^2.
/// Zero-norm labels are excluded and counted; if every label is zero,
/// DegenerateSampleError is thrown.
inline NmseReport nmse_report(const Eigen::MatrixXcd& pred, const Eigen::MatrixXcd& label) {
    if (pred.rows() != label.rows() || pred.cols() != label.cols())
        throw ShapeError("prediction and label batches differ in shape");
    NmseReport r;
    double sum = 0.0;
    for (Eigen::Index k = 0; k < label.cols(); ++k) {
        const double energy = label.col(k).squaredNorm();
        if (energy == 0.0) {
            ++r.excluded;
            continue;
        }
        sum += (label.col(k) - pred.col(k)).squaredNorm() / energy;
        ++r.used;
    }
    if (r.used == 0) throw DegenerateSampleError("every label vector has zero norm");
    r.value = sum / static_cast<double>(r.used);
    return r;
}

/// NMSE value; warns on stderr when zero-norm labels were excluded.
inline double nmse(const Eigen::MatrixXcd& pred, const Eigen::MatrixXcd& label) {
    const auto r = nmse_report(pred, label);
    if (r.excluded > 0)
        std::cerr << "warning: nmse excluded " << r.excluded << " sample(s) with zero-norm labels\n";
    return r.value;
}

/// Multiplications of one forward pass: sum n_{l-1} n_l, times 4 for a
/// complex network (one complex multiply = 4 real ones). Additions are not counted.
inline std::uint64_t flops(std::span<const std::size_t> layer_sizes, bool is_complex) {
    if (layer_sizes.size() < 2) throw InvalidArchitectureError("need at least two layer sizes");
    std::uint64_t n = 0;
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) n += std::uint64_t{layer_sizes[l - 1]} * layer_sizes[l];
    return is_complex ? 4 * n : n;
}

inline std::uint64_t flops(std::initializer_list<std::size_t> layer_sizes, bool is_complex) {
    return flops(std::span<const std::size_t>(layer_sizes.begin(), layer_sizes.size()), is_complex);
}

} // namespace scnet
