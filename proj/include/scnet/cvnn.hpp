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

// Complex-valued feedforward network with split-CReLU activations.
//
//   f_l(x) = g(W_l x + b_l)   for hidden layers
//   f_l(x) = W_l x + b_l      for the last layer
//   g(z)   = max(Re z, 0) + j max(Im z, 0)
//
// Gradients treat every complex parameter as two independent reals and pack
// them as dL/dRe + j dL/dIm. With that packing, for z = W x + b:
//   dL/dW = G x^H,  dL/db = G,  dL/dx = W^H G
// which is exactly what real backprop computes on the real-composite network.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scnet/binary_io.hpp"
#include "scnet/error.hpp"
#include "scnet/packing.hpp"
#include "scnet/random.hpp"
#include "scnet/real_network.hpp"

namespace scnet {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct ComplexDenseLayer {
    ComplexMatrix weights; // out x in
    ComplexVector bias;
    bool has_activation = true;
};

struct ComplexNetwork {
    std::vector<ComplexDenseLayer> layers;

    std::vector<std::size_t> layer_sizes() const {
        std::vector<std::size_t> sizes;
        if (layers.empty()) return sizes;
        sizes.push_back(static_cast<std::size_t>(layers.front().weights.cols()));
        for (const auto& l : layers) sizes.push_back(static_cast<std::size_t>(l.weights.rows()));
        return sizes;
    }

    std::size_t input_size() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols()); }
    std::size_t output_size() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weights.rows()); }

    /// Real parameters: two per complex weight or bias.
    std::size_t real_parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += 2 * static_cast<std::size_t>(l.weights.size() + l.bias.size());
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

/// dLoss/d(re, im) per parameter, packed as complex numbers.
struct GradientSet {
    std::vector<ComplexMatrix> weights;
    std::vector<ComplexVector> biases;
};

/// Per-layer inputs and pre-activations retained by forward for backward.
struct Tape {
    std::vector<ComplexMatrix> inputs;
    std::vector<ComplexMatrix> pre_activations;
};

struct ComplexForward {
    ComplexMatrix output;
    Tape tape;
};

inline std::complex<double> crelu(std::complex<double> z) noexcept {
    return {z.real() > 0.0 ? z.real() : 0.0, z.imag() > 0.0 ? z.imag() : 0.0};
}

template <class Derived>
auto crelu(const Eigen::MatrixBase<Derived>& z) {
    return z.unaryExpr([](std::complex<double> v) { return crelu(v); }).eval();
}

/// Batch forward pass; column k of `x` is sample k.
inline ComplexForward forward_batch(const ComplexNetwork& net, const ComplexMatrix& x) {
    if (net.layers.empty()) throw ShapeError("empty network");
    if (static_cast<std::size_t>(x.rows()) != net.input_size())
        throw ShapeError("input has " + std::to_string(x.rows()) + " rows, network expects " +
                         std::to_string(net.input_size()));
    ComplexForward out;
    out.tape.inputs.reserve(net.layers.size());
    out.tape.pre_activations.reserve(net.layers.size());
    ComplexMatrix a = x;
    for (const auto& layer : net.layers) {
        ComplexMatrix z;
        z.noalias() = layer.weights * a;
        z.colwise() += layer.bias;
        out.tape.inputs.push_back(std::move(a));
        a = layer.has_activation ? crelu(z) : z;
        out.tape.pre_activations.push_back(std::move(z));
    }
    out.output = std::move(a);
    return out;
}

inline ComplexForward forward(const ComplexNetwork& net, const ComplexVector& x) {
    return forward_batch(net, ComplexMatrix(x));
}

inline ComplexMatrix predict(const ComplexNetwork& net, const ComplexMatrix& x) { return forward_batch(net, x).output; }

/// Gradients given the packed output error dLoss/d(re, im of output), one column per sample.
/// CReLU passes the real part of the error where Re(z) > 0 and the imaginary part where Im(z) > 0.
inline GradientSet backward_batch(const ComplexNetwork& net, const Tape& tape, const ComplexMatrix& output_error) {
    const std::size_t n = net.layers.size();
    if (tape.inputs.size() != n || tape.pre_activations.size() != n) throw ShapeError("tape does not match network");
    for (std::size_t k = 0; k < n; ++k)
        if (tape.pre_activations[k].rows() != net.layers[k].weights.rows() ||
            tape.inputs[k].rows() != net.layers[k].weights.cols())
            throw ShapeError("tape layer " + std::to_string(k) + " does not match network");
    if (output_error.rows() != static_cast<Eigen::Index>(net.output_size()) ||
        output_error.cols() != tape.pre_activations.back().cols())
        throw ShapeError("output error shape does not match the forward batch");

    GradientSet g;
    g.weights.resize(n);
    g.biases.resize(n);
    ComplexMatrix delta = output_error;
    for (std::size_t k = n; k-- > 0;) {
        const auto& layer = net.layers[k];
        if (layer.has_activation) {
            delta = delta.binaryExpr(tape.pre_activations[k], [](std::complex<double> e, std::complex<double> z) {
                return std::complex<double>(z.real() > 0.0 ? e.real() : 0.0, z.imag() > 0.0 ? e.imag() : 0.0);
            });
        }
        g.weights[k].noalias() = delta * tape.inputs[k].adjoint();
        g.biases[k] = delta.rowwise().sum();
        if (k > 0) delta = layer.weights.adjoint() * delta;
    }
    return g;
}

inline GradientSet backward(const ComplexNetwork& net, const Tape& tape, const ComplexVector& output_error) {
    return backward_batch(net, tape, ComplexMatrix(output_error));
}

/// Weights circular complex Gaussian with E|w|^2 = 1/fan_in; biases zero.
inline ComplexNetwork init_network(std::span<const std::size_t> sizes, Rng& rng) {
    if (sizes.size() < 2) throw InvalidArchitectureError("need at least input and output sizes");
    for (auto s : sizes)
        if (s == 0) throw InvalidArchitectureError("layer sizes must be positive");
    ComplexNetwork net;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        ComplexDenseLayer layer;
        const auto in = static_cast<Eigen::Index>(sizes[l - 1]);
        const auto out = static_cast<Eigen::Index>(sizes[l]);
        const double var = 1.0 / static_cast<double>(in);
        layer.weights.resize(out, in);
        for (Eigen::Index r = 0; r < out; ++r)
            for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = rng.complex_normal(var);
        layer.bias = ComplexVector::Zero(out);
        layer.has_activation = l + 1 < sizes.size();
        net.layers.push_back(std::move(layer));
    }
    return net;
}

inline ComplexNetwork init_network(std::initializer_list<std::size_t> sizes, Rng& rng) {
    return init_network(std::span<const std::size_t>(sizes.begin(), sizes.size()), rng);
}

/// Equivalent real network on stacked (re; im) vectors: W = A + jB becomes
/// [[A, -B], [B, A]], b becomes (Re b; Im b), CReLU becomes ReLU.
inline RealNetwork real_composite_oracle(const ComplexNetwork& net) {
    RealNetwork real;
    for (const auto& l : net.layers) {
        const auto r = l.weights.rows();
        const auto c = l.weights.cols();
        RealDenseLayer out;
        out.weights.resize(2 * r, 2 * c);
        out.weights.topLeftCorner(r, c) = l.weights.real();
        out.weights.topRightCorner(r, c) = -l.weights.imag();
        out.weights.bottomLeftCorner(r, c) = l.weights.imag();
        out.weights.bottomRightCorner(r, c) = l.weights.real();
        out.bias = pack(l.bias);
        out.has_activation = l.has_activation;
        real.layers.push_back(std::move(out));
    }
    return real;
}

/// Each complex array viewed as interleaved (re, im) doubles.
inline std::vector<std::span<double>> parameter_blocks(ComplexNetwork& net) {
    std::vector<std::span<double>> blocks;
    for (auto& l : net.layers) {
        blocks.emplace_back(reinterpret_cast<double*>(l.weights.data()), 2 * static_cast<std::size_t>(l.weights.size()));
        blocks.emplace_back(reinterpret_cast<double*>(l.bias.data()), 2 * static_cast<std::size_t>(l.bias.size()));
    }
    return blocks;
}

inline std::vector<std::span<const double>> gradient_blocks(const GradientSet& g) {
    std::vector<std::span<const double>> blocks;
    for (std::size_t k = 0; k < g.weights.size(); ++k) {
        blocks.emplace_back(reinterpret_cast<const double*>(g.weights[k].data()),
                            2 * static_cast<std::size_t>(g.weights[k].size()));
        blocks.emplace_back(reinterpret_cast<const double*>(g.biases[k].data()),
                            2 * static_cast<std::size_t>(g.biases[k].size()));
    }
    return blocks;
}

// Weight file: "SCNETW01" | version u32 | L u32 | sizes u32[L] |
// per layer: W row-major then b, each entry (re f64, im f64), little-endian.
inline constexpr std::string_view kComplexWeightsMagic = "SCNETW01";

inline std::vector<char> encode_weights(const ComplexNetwork& net) {
    net.validate();
    io::Writer w;
    w.magic(kComplexWeightsMagic);
    w.u32(kWeightsVersion);
    const auto sizes = net.layer_sizes();
    w.u32(static_cast<std::uint32_t>(sizes.size()));
    for (auto s : sizes) w.u32(static_cast<std::uint32_t>(s));
    for (const auto& l : net.layers) {
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.complex(l.weights(r, c));
        for (auto b : l.bias) w.complex(b);
    }
    return w.bytes();
}

inline ComplexNetwork decode_complex_weights(std::vector<char> bytes) {
    io::Reader r(std::move(bytes));
    r.expect_magic(kComplexWeightsMagic);
    const auto sizes = detail::read_weight_header(r, 16);
    ComplexNetwork net;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        ComplexDenseLayer layer;
        layer.weights.resize(static_cast<Eigen::Index>(sizes[l]), static_cast<Eigen::Index>(sizes[l - 1]));
        layer.bias.resize(static_cast<Eigen::Index>(sizes[l]));
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = r.complex();
        for (auto& b : layer.bias) b = r.complex();
        layer.has_activation = l + 1 < sizes.size();
        net.layers.push_back(std::move(layer));
    }
    if (r.remaining() != 0) throw FormatError("weight file has trailing bytes");
    return net;
}

inline void save_weights(const ComplexNetwork& net, const std::string& path) { io::write_file(path, encode_weights(net)); }

inline ComplexNetwork load_complex_weights(const std::string& path) {
    return decode_complex_weights(io::read_file(path));
}

} // namespace scnet
