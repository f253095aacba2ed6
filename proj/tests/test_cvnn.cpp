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
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <vector>

#include "oracles.hpp"
#include "scnet/cvnn.hpp"
#include "scnet/optim.hpp"

using namespace scnet;
using Catch::Approx;
using cd = std::complex<double>;

namespace {

std::vector<std::size_t> random_sizes(Rng& rng, std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> sizes(2 + rng.below(3));
    for (auto& s : sizes) s = lo + rng.below(hi - lo + 1);
    return sizes;
}

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("CReLU keeps positive parts only", "[cvnn]") {
    CHECK(crelu(cd(1, -2)) == cd(1, 0));
    CHECK(crelu(cd(-1, -1)) == cd(0, 0));
    CHECK(crelu(cd(2, 3)) == cd(2, 3));
    CHECK(crelu(cd(0, 0)) == cd(0, 0));
    CHECK(crelu(cd(-0.5, 4)) == cd(0, 4));
}

TEST_CASE("CReLU is idempotent", "[cvnn][property]") {
    Rng rng(1);
    const ComplexMatrix z = oracle::random_complex(rng, 10, 10);
    CHECK(crelu(crelu(z)) == crelu(z));
}

TEST_CASE("identity network passes the first quadrant through", "[cvnn]") {
    ComplexNetwork net;
    net.layers.push_back({ComplexMatrix::Identity(2, 2), ComplexVector::Zero(2), true});
    net.layers.push_back({ComplexMatrix::Identity(2, 2), ComplexVector::Zero(2), false});
    ComplexVector x(2);
    x << cd(1, 2), cd(3, 0.5);
    CHECK(forward(net, x).output == x);
    x << cd(-1, 2), cd(3, -0.5);
    ComplexVector expected(2);
    expected << cd(0, 2), cd(3, 0);
    CHECK(forward(net, x).output == expected);
}

TEST_CASE("single affine layer multiplies by j", "[cvnn]") {
    ComplexNetwork net;
    ComplexMatrix w(1, 1);
    w << cd(0, 1);
    net.layers.push_back({w, ComplexVector::Zero(1), false});
    ComplexVector x(1);
    x << cd(1, 0);
    CHECK(forward(net, x).output(0) == cd(0, 1));
}

TEST_CASE("forward matches the real-composite network", "[cvnn][oracle]") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto sizes = random_sizes(rng, 1, 12);
        const auto net = oracle::random_network(rng, sizes);
        const ComplexMatrix x = oracle::random_complex(rng, static_cast<Eigen::Index>(sizes.front()), 5);
        const auto out = forward_batch(net, x).output;
        const auto ref = unpack(forward_batch(real_composite_oracle(net), pack(x)).output);
        CHECK(max_abs(out - ref) < 1e-12);
    }
}

TEST_CASE("8-6-4-8 network matches its real composite", "[cvnn][oracle]") {
    Rng rng(3);
    const auto net = oracle::random_network(rng, {8, 6, 4, 8});
    REQUIRE(net.layers.size() == 3);
    const ComplexMatrix x = oracle::random_complex(rng, 8, 1);
    CHECK(max_abs(forward_batch(net, x).output - unpack(forward_batch(real_composite_oracle(net), pack(x)).output)) <
          1e-12);
}

TEST_CASE("analytic gradients match central finite differences", "[cvnn][gradient]") {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const auto sizes = random_sizes(rng, 2, 8);
        const auto net = oracle::random_network(rng, sizes);
        const ComplexMatrix x = oracle::random_complex(rng, static_cast<Eigen::Index>(sizes.front()), 3);
        const ComplexMatrix y = oracle::random_complex(rng, static_cast<Eigen::Index>(sizes.back()), 3);
        const auto pass = forward_batch(net, x);
        const auto analytic = backward_batch(net, pass.tape, loss_gradient(pass.output, y));
        const auto numeric = oracle::finite_difference_gradients(net, x, y, 1e-6);
        CHECK(oracle::max_relative_error(analytic, numeric) < 1e-6);
    }
}

TEST_CASE("analytic gradients match real backprop on the composite network", "[cvnn][oracle]") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sizes = random_sizes(rng, 1, 10);
        const auto net = oracle::random_network(rng, sizes);
        const ComplexMatrix x = oracle::random_complex(rng, static_cast<Eigen::Index>(sizes.front()), 4);
        const ComplexMatrix y = oracle::random_complex(rng, static_cast<Eigen::Index>(sizes.back()), 4);
        const auto pass = forward_batch(net, x);
        const auto g = backward_batch(net, pass.tape, loss_gradient(pass.output, y));

        const auto real = real_composite_oracle(net);
        const auto rpass = forward_batch(real, pack(x));
        const auto rg = backward_batch(real, rpass.tape, pack(loss_gradient(unpack(rpass.output), y)));
        std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes;
        for (const auto& l : net.layers) shapes.emplace_back(l.weights.rows(), l.weights.cols());
        const auto tied = oracle::tied_gradients_from_composite(rg, shapes);

        std::vector<double> mine;
        for (std::size_t k = 0; k < g.weights.size(); ++k) {
            for (Eigen::Index i = 0; i < g.weights[k].size(); ++i) mine.push_back(g.weights[k](i).real());
            for (Eigen::Index i = 0; i < g.weights[k].size(); ++i) mine.push_back(g.weights[k](i).imag());
            for (Eigen::Index i = 0; i < g.biases[k].size(); ++i) mine.push_back(g.biases[k](i).real());
            for (Eigen::Index i = 0; i < g.biases[k].size(); ++i) mine.push_back(g.biases[k](i).imag());
        }
        REQUIRE(mine.size() == tied.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < mine.size(); ++i) worst = std::max(worst, std::abs(mine[i] - tied[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("zero output error gives zero gradients", "[cvnn]") {
    Rng rng(6);
    const auto net = oracle::random_network(rng, {5, 7, 5});
    const ComplexMatrix x = oracle::random_complex(rng, 5, 3);
    const auto pass = forward_batch(net, x);
    const auto g = backward_batch(net, pass.tape, ComplexMatrix::Zero(5, 3));
    for (const auto& w : g.weights) CHECK(max_abs(w) == 0.0);
    for (const auto& b : g.biases) CHECK(max_abs(b) == 0.0);
}

TEST_CASE("batch gradients are independent of sample order", "[cvnn]") {
    Rng rng(7);
    const auto net = oracle::random_network(rng, {6, 9, 6});
    const ComplexMatrix x = oracle::random_complex(rng, 6, 10);
    const ComplexMatrix y = oracle::random_complex(rng, 6, 10);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(10);
    perm.setIdentity();
    for (Eigen::Index i = 9; i > 0; --i) std::swap(perm.indices()[i], perm.indices()[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
    const ComplexMatrix xp = x * perm, yp = y * perm;
    const auto a = forward_batch(net, x);
    const auto b = forward_batch(net, xp);
    const auto ga = backward_batch(net, a.tape, loss_gradient(a.output, y));
    const auto gb = backward_batch(net, b.tape, loss_gradient(b.output, yp));
    for (std::size_t k = 0; k < ga.weights.size(); ++k) {
        CHECK(max_abs(ga.weights[k] - gb.weights[k]) < 1e-9);
        CHECK(max_abs(ga.biases[k] - gb.biases[k]) < 1e-9);
    }
}

TEST_CASE("forward and backward reject mismatched shapes", "[cvnn]") {
    Rng rng(8);
    const auto net = oracle::random_network(rng, {4, 3, 4});
    CHECK_THROWS_AS(forward_batch(net, oracle::random_complex(rng, 5, 2)), ShapeError);
    const auto pass = forward_batch(net, oracle::random_complex(rng, 4, 2));
    CHECK_THROWS_AS(backward_batch(net, pass.tape, oracle::random_complex(rng, 3, 2)), ShapeError);
    CHECK_THROWS_AS(backward_batch(net, pass.tape, oracle::random_complex(rng, 4, 3)), ShapeError);
}

TEST_CASE("initialization draws weights with E|w|^2 = 1/fan_in", "[cvnn][statistics]") {
    Rng rng(9);
    double sum = 0.0, sum_re = 0.0;
    std::size_t n = 0;
    while (n < 100'000) {
        const auto net = init_network({128, 128}, rng);
        const auto& w = net.layers[0].weights;
        sum += w.cwiseAbs2().sum();
        sum_re += w.real().sum();
        n += static_cast<std::size_t>(w.size());
        CHECK(net.layers[0].bias.isZero(0.0));
    }
    CHECK(sum / static_cast<double>(n) == Approx(1.0 / 128).epsilon(0.05));
    CHECK(std::abs(sum_re / static_cast<double>(n)) < 0.01);
}

TEST_CASE("default layer sizes give four layers with a bottleneck", "[cvnn]") {
    Rng rng(10);
    const std::vector<std::size_t> sizes{128, 128, 64, 128, 128};
    const auto net = init_network(sizes, rng);
    CHECK(net.layers.size() == 4);
    CHECK(net.layer_sizes() == sizes);
    CHECK(net.layers[1].weights.rows() == 64);
    CHECK(net.layers[1].weights.rows() < static_cast<Eigen::Index>(net.input_size()));
    CHECK_FALSE(net.layers.back().has_activation);
    for (std::size_t i = 0; i + 1 < net.layers.size(); ++i) CHECK(net.layers[i].has_activation);
    CHECK_NOTHROW(net.validate());
}

TEST_CASE("initialization rejects bad architectures", "[cvnn]") {
    Rng rng(11);
    CHECK_THROWS_AS(init_network({8}, rng), InvalidArchitectureError);
    CHECK_THROWS_AS(init_network({8, 0, 8}, rng), InvalidArchitectureError);
    CHECK_THROWS_AS(ComplexNetwork{}.validate(), InvalidArchitectureError);
}

TEST_CASE("complex weight files round-trip bit-identically", "[cvnn][io]") {
    Rng rng(12);
    const auto net = oracle::random_network(rng, {8, 5, 8});
    const auto bytes = encode_weights(net);
    const auto back = decode_complex_weights(bytes);
    REQUIRE(back.layers.size() == net.layers.size());
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        CHECK(back.layers[k].weights == net.layers[k].weights);
        CHECK(back.layers[k].bias == net.layers[k].bias);
        CHECK(back.layers[k].has_activation == net.layers[k].has_activation);
    }
    CHECK(encode_weights(back) == bytes);

    const auto path = std::filesystem::temp_directory_path() / "scnet_test_weights.bin";
    save_weights(net, path.string());
    CHECK(encode_weights(load_complex_weights(path.string())) == bytes);
    std::filesystem::remove(path);
}

TEST_CASE("corrupted weight files raise typed errors", "[cvnn][io]") {
    Rng rng(13);
    const auto bytes = encode_weights(oracle::random_network(rng, {4, 3, 4}));
    auto b = bytes;
    b[3] = '?';
    CHECK_THROWS_AS(decode_complex_weights(b), BadMagicError);
    b = bytes;
    b[8] = 9;
    CHECK_THROWS_AS(decode_complex_weights(b), VersionMismatchError);
    b = bytes;
    b.resize(b.size() - 1);
    CHECK_THROWS_AS(decode_complex_weights(b), TruncatedFileError);
    b = bytes;
    b.push_back(1);
    CHECK_THROWS_AS(decode_complex_weights(b), FormatError);
    CHECK_THROWS_AS(decode_real_weights(bytes), BadMagicError);
}
