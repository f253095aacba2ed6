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

// Real-valued FNN baseline fed the stacked (re; im) parts of the uplink CSI.
// Hidden widths default to twice the SCNet widths, so the baseline never has
// fewer real parameters than the SCNet it is compared with.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scnet/cvnn.hpp"
#include "scnet/error.hpp"
#include "scnet/optim.hpp"
#include "scnet/packing.hpp"
#include "scnet/real_network.hpp"

namespace scnet {

inline RealVector pack(const ComplexVector& h) { return pack(h.matrix()).col(0); }

inline ComplexVector unpack(const RealVector& x) { return unpack(x.matrix()).col(0); }

/// Forward pass of a real network with complex I/O.
struct PackedForward {
    ComplexMatrix output;
    RealTape tape;
};

inline PackedForward training_forward(const RealNetwork& net, const ComplexMatrix& x) {
    auto f = forward_batch(net, pack(x));
    return {unpack(f.output), std::move(f.tape)};
}

/// The packed complex error dL/dRe + j dL/dIm stacks to the real error (dL/dRe; dL/dIm).
inline RealGradientSet training_backward(const RealNetwork& net, const PackedForward& pass, const ComplexMatrix& error) {
    return backward_batch(net, pass.tape, pack(error));
}

inline std::pair<std::size_t, std::size_t> io_dims(const RealNetwork& net) {
    return {net.input_size() / 2, net.output_size() / 2};
}

inline ComplexMatrix predict(const RealNetwork& net, const ComplexMatrix& x) { return training_forward(net, x).output; }

inline std::vector<std::size_t> fnn_hidden_for(std::span<const std::size_t> scnet_hidden) {
    std::vector<std::size_t> out(scnet_hidden.begin(), scnet_hidden.end());
    for (auto& h : out) h *= 2;
    return out;
}

/// (2M, hidden..., 2M).
inline std::vector<std::size_t> fnn_layer_sizes(std::size_t num_antennas, std::span<const std::size_t> hidden) {
    std::vector<std::size_t> sizes{2 * num_antennas};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(2 * num_antennas);
    return sizes;
}

/// Real parameter count of a complex network with the given sizes.
inline std::size_t scnet_real_parameter_count(std::span<const std::size_t> sizes) {
    std::size_t n = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) n += 2 * (sizes[l - 1] * sizes[l] + sizes[l]);
    return n;
}

/// Baseline for an SCNet with `scnet_hidden`; its real parameter count must not
/// fall below the SCNet's.
inline RealNetwork make_fnn(std::size_t num_antennas, std::span<const std::size_t> scnet_hidden, Rng& rng) {
    const auto hidden = fnn_hidden_for(scnet_hidden);
    const auto sizes = fnn_layer_sizes(num_antennas, hidden);
    auto net = init_real_network(sizes, rng);
    const auto scnet_params = scnet_real_parameter_count(scnet_layer_sizes(num_antennas, scnet_hidden));
    if (net.parameter_count() < scnet_params)
        throw InvalidArchitectureError("FNN baseline has fewer real parameters (" + std::to_string(net.parameter_count()) +
                                       ") than the SCNet (" + std::to_string(scnet_params) + ")");
    return net;
}

/// Same protocol as train_scnet: init from derive_seed(cfg.seed, "init"), same
/// loss, ADAM and shuffling.
inline TrainResult<RealNetwork> train_fnn(const Dataset& train_ds, const Dataset& eval_ds,
                                          std::span<const std::size_t> scnet_hidden, const TrainConfig& cfg,
                                          const EpochCallback& on_epoch = {}) {
    if (train_ds.empty()) throw InvalidParametersError("training dataset is empty");
    Rng init_rng(derive_seed(cfg.seed, "init"));
    const auto m = static_cast<std::size_t>(train_ds.samples.front().input.size());
    return train(make_fnn(m, scnet_hidden, init_rng), train_ds, eval_ds, cfg, on_epoch);
}

} // namespace scnet
