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

// Real-valued fully connected network: ReLU on every layer but the last.
// Used both as the FNN baseline and as the target of the real-composite
// oracle of a complex network. Batches are column-major: one sample per column.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scnet/binary_io.hpp"
#include "scnet/error.hpp"
#include "scnet/random.hpp"

namespace scnet {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct RealDenseLayer {
    RealMatrix weights; // out x in
    RealVector bias;
    bool has_activation = true;
};

struct RealNetwork {
    std::vector<RealDenseLayer> layers;

    std::vector<std::size_t> layer_sizes() const {
        std::vector<std::size_t> sizes;
        if (layers.empty()) return sizes;
        sizes.push_back(static_cast<std::size_t>(layers.front().weights.cols()));
        for (const auto& l : layers) sizes.push_back(static_cast<std::size_t>(l.weights.rows()));
        return sizes;
    }

    std::size_t input_size() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols()); }
    std::size_t output_size() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weights.rows()); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
        return n;
    }

    void validate() const {
        if (layers.empty()) throw InvalidArchitectureError("network has no layers");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& l = layers[i];
            if (l.bias.size() != l.weights.rows()) throw ShapeError("layer " + std::to_string(i) + ": bias length");
            if (i > 0 && l.weights.cols() != layers[i - 1].weights.rows())
                throw ShapeError("layer " + std::to_string(i) + ": input size does not match previous output");
        }
        if (layers.back().has_activation) throw InvalidArchitectureError("last layer must be affine");
    }
};

struct RealTape {
    std::vector<RealMatrix> inputs;          // input to each layer
    std::vector<RealMatrix> pre_activations; // W x + b of each layer
};

struct RealForward {
    RealMatrix output;
    RealTape tape;
};

/// Weight and bias gradients, shaped like the network.
struct RealGradientSet {
    std::vector<RealMatrix> weights;
    std::vector<RealVector> biases;
};

inline RealMatrix relu(const RealMatrix& z) { return z.cwiseMax(0.0); }

inline RealForward forward_batch(const RealNetwork& net, const RealMatrix& x) {
    if (net.layers.empty()) throw ShapeError("empty network");
    if (static_cast<std::size_t>(x.rows()) != net.input_size())
        throw ShapeError("input has " + std::to_string(x.rows()) + " rows, network expects " +
                         std::to_string(net.input_size()));
    RealForward out;
    out.tape.inputs.reserve(net.layers.size());
    out.tape.pre_activations.reserve(net.layers.size());
    RealMatrix a = x;
    for (const auto& layer : net.layers) {
        RealMatrix z = layer.weights * a;
        z.colwise() += layer.bias;
        out.tape.inputs.push_back(std::move(a));
        a = layer.has_activation ? relu(z) : z;
        out.tape.pre_activations.push_back(std::move(z));
    }
    out.output = std::move(a);
    return out;
}

inline RealVector forward(const RealNetwork& net, const RealVector& x) {
    return forward_batch(net, RealMatrix(x)).output.col(0);
}

/// Gradients of a scalar loss given dLoss/dOutput for every column of the batch.
inline RealGradientSet backward_batch(const RealNetwork& net, const RealTape& tape, const RealMatrix& output_error) {
    const std::size_t n = net.layers.size();
    if (tape.inputs.size() != n || tape.pre_activations.size() != n) throw ShapeError("tape does not match network");
    if (output_error.rows() != static_cast<Eigen::Index>(net.output_size()) ||
        output_error.cols() != tape.pre_activations.back().cols())
        throw ShapeError("output error shape does not match the forward batch");
    RealGradientSet g;
    g.weights.resize(n);
    g.biases.resize(n);
    RealMatrix delta = output_error;
    for (std::size_t k = n; k-- > 0;) {
        const auto& layer = net.layers[k];
        if (layer.has_activation) delta = delta.cwiseProduct((tape.pre_activations[k].array() > 0.0).cast<double>().matrix());
        g.weights[k].noalias() = delta * tape.inputs[k].transpose();
        g.biases[k] = delta.rowwise().sum();
        if (k > 0) delta = layer.weights.transpose() * delta;
    }
    return g;
}

/// Weights N(0, 1/fan_in), biases 0, ReLU on all layers but the last.
inline RealNetwork init_real_network(std::span<const std::size_t> sizes, Rng& rng) {
    if (sizes.size() < 2) throw InvalidArchitectureError("need at least input and output sizes");
    for (auto s : sizes)
        if (s == 0) throw InvalidArchitectureError("layer sizes must be positive");
    RealNetwork net;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        RealDenseLayer layer;
        const auto in = static_cast<Eigen::Index>(sizes[l - 1]);
        const auto out = static_cast<Eigen::Index>(sizes[l]);
        const double sd = std::sqrt(1.0 / static_cast<double>(in));
        layer.weights.resize(out, in);
        for (Eigen::Index r = 0; r < out; ++r)
            for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = sd * rng.normal();
        layer.bias = RealVector::Zero(out);
        layer.has_activation = l + 1 < sizes.size();
        net.layers.push_back(std::move(layer));
    }
    return net;
}

inline std::vector<std::span<double>> parameter_blocks(RealNetwork& net) {
    std::vector<std::span<double>> blocks;
    for (auto& l : net.layers) {
        blocks.emplace_back(l.weights.data(), static_cast<std::size_t>(l.weights.size()));
        blocks.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
    return blocks;
}

inline std::vector<std::span<const double>> gradient_blocks(const RealGradientSet& g) {
    std::vector<std::span<const double>> blocks;
    for (std::size_t k = 0; k < g.weights.size(); ++k) {
        blocks.emplace_back(g.weights[k].data(), static_cast<std::size_t>(g.weights[k].size()));
        blocks.emplace_back(g.biases[k].data(), static_cast<std::size_t>(g.biases[k].size()));
    }
    return blocks;
}

// Weight file: "SCNETW0R" | version u32 | L u32 | sizes u32[L] |
// per layer: W row-major then b, float64 little-endian.
inline constexpr std::string_view kRealWeightsMagic = "SCNETW0R";
inline constexpr std::uint32_t kWeightsVersion = 1;

inline std::vector<char> encode_weights(const RealNetwork& net) {
    net.validate();
    io::Writer w;
    w.magic(kRealWeightsMagic);
    w.u32(kWeightsVersion);
    const auto sizes = net.layer_sizes();
    w.u32(static_cast<std::uint32_t>(sizes.size()));
    for (auto s : sizes) w.u32(static_cast<std::uint32_t>(s));
    for (const auto& l : net.layers) {
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.f64(l.weights(r, c));
        for (auto b : l.bias) w.f64(b);
    }
    return w.bytes();
}

namespace detail {

/// Reads version, L and sizes after the magic, checking the payload fits.
inline std::vector<std::size_t> read_weight_header(io::Reader& r, std::uint64_t bytes_per_scalar) {
    const auto version = r.u32();
    if (version != kWeightsVersion)
        throw VersionMismatchError("weight file version " + std::to_string(version) + " is not supported");
    const auto count = r.u32();
    if (count < 2) throw FormatError("weight file declares fewer than two layer sizes");
    r.require(std::uint64_t{count} * 4, "layer sizes");
    std::vector<std::size_t> sizes(count);
    std::uint64_t scalars = 0;
    for (auto& s : sizes) {
        s = r.u32();
        if (s == 0) throw FormatError("weight file declares a zero-size layer");
    }
    for (std::size_t l = 1; l < sizes.size(); ++l) scalars += std::uint64_t{sizes[l]} * (sizes[l - 1] + 1);
    if (scalars > r.remaining() / bytes_per_scalar)
        throw TruncatedFileError("truncated weight payload: need " + std::to_string(scalars * bytes_per_scalar) +
                                 " bytes, have " + std::to_string(r.remaining()));
    return sizes;
}

} // namespace detail

inline RealNetwork decode_real_weights(std::vector<char> bytes) {
    io::Reader r(std::move(bytes));
    r.expect_magic(kRealWeightsMagic);
    const auto sizes = detail::read_weight_header(r, 8);
    RealNetwork net;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        RealDenseLayer layer;
        layer.weights.resize(static_cast<Eigen::Index>(sizes[l]), static_cast<Eigen::Index>(sizes[l - 1]));
        layer.bias.resize(static_cast<Eigen::Index>(sizes[l]));
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = r.f64();
        for (auto& b : layer.bias) b = r.f64();
        layer.has_activation = l + 1 < sizes.size();
        net.layers.push_back(std::move(layer));
    }
    if (r.remaining() != 0) throw FormatError("weight file has trailing bytes");
    return net;
}

inline void save_weights(const RealNetwork& net, const std::string& path) { io::write_file(path, encode_weights(net)); }

inline RealNetwork load_real_weights(const std::string& path) { return decode_real_weights(io::read_file(path)); }

} // namespace scnet
