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

#include <filesystem>

#include "oracles.hpp"
#include "scnet/baseline_fnn.hpp"

using namespace scnet;
using Catch::Approx;
using cd = std::complex<double>;

namespace {

Dataset small_dataset(std::size_t count, std::uint64_t seed) {
    GenerationParams p;
    p.array = ArrayConfig::half_wavelength(8, p.uplink_frequency);
    p.scenario.paths = 10;
    return generate_dataset(count, p, seed);
}

} // namespace

TEST_CASE("packing stacks real parts over imaginary parts", "[fnn]") {
    ComplexVector h(2);
    h << cd(1, 2), cd(3, 4);
    RealVector expected(4);
    expected << 1, 3, 2, 4;
    CHECK(pack(h) == expected);
    CHECK(unpack(expected) == h);
}

TEST_CASE("unpack inverts pack for random batches", "[fnn][property]") {
    Rng rng(1);
    const ComplexMatrix z = oracle::random_complex(rng, 7, 5);
    CHECK(unpack(pack(z)) == z);
}

TEST_CASE("unpack rejects odd lengths", "[fnn]") {
    CHECK_THROWS_AS(unpack(RealVector(3)), ShapeError);
}

TEST_CASE("the packed loss equals the complex loss", "[fnn]") {
    Rng rng(2);
    const ComplexMatrix p = oracle::random_complex(rng, 5, 3);
    const ComplexMatrix y = oracle::random_complex(rng, 5, 3);
    const double real_sum = (pack(p) - pack(y)).squaredNorm() / static_cast<double>(p.size());
    CHECK(loss(p, y) == Approx(real_sum).epsilon(1e-14));
}

TEST_CASE("the FNN never has fewer real parameters than the SCNet", "[fnn]") {
    Rng rng(3);
    for (const std::vector<std::size_t>& hidden :
         {std::vector<std::size_t>{128, 64, 128}, std::vector<std::size_t>{16}, std::vector<std::size_t>{3, 5}}) {
        for (std::size_t m : {8u, 32u, 128u}) {
            const auto fnn = make_fnn(m, hidden, rng);
            const auto scnet_params = scnet_real_parameter_count(scnet_layer_sizes(m, hidden));
            CHECK(fnn.parameter_count() >= scnet_params);
            CHECK(fnn.input_size() == 2 * m);
            CHECK(fnn.output_size() == 2 * m);
        }
    }
}

TEST_CASE("real gradients match finite differences", "[fnn][gradient]") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto net = init_real_network(std::vector<std::size_t>{6, 5, 6}, rng);
        for (auto& l : net.layers)
            for (auto& b : l.bias) b = rng.normal(0.0, 0.3);
        const ComplexMatrix x = oracle::random_complex(rng, 3, 4);
        const ComplexMatrix y = oracle::random_complex(rng, 3, 4);
        const auto pass = training_forward(net, x);
        const auto g = training_backward(net, pass, loss_gradient(pass.output, y));
        const double h = 1e-6;
        double worst = 0.0;
        for (std::size_t k = 0; k < net.layers.size(); ++k) {
            auto& w = net.layers[k].weights;
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                const double saved = w(i);
                w(i) = saved + h;
                const double up = loss(predict(net, x), y);
                w(i) = saved - h;
                const double down = loss(predict(net, x), y);
                w(i) = saved;
                worst = std::max(worst, oracle::relative_error(g.weights[k](i), (up - down) / (2 * h), 1e-4));
            }
        }
        // Double-precision differences: rounding noise is about 1e-10 absolute.
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("FNN training with zero learning rate keeps the initial model", "[fnn]") {
    const auto ds = small_dataset(48, 5);
    const auto [train_set, test_set] = split(ds, 0.75);
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 12;
    cfg.adam.learning_rate = 0.0;
    const std::vector<std::size_t> hidden{4};
    Rng init(derive_seed(cfg.seed, "init"));
    const auto fresh = make_fnn(8, hidden, init);
    const auto r = train_fnn(train_set, test_set, hidden, cfg);
    for (std::size_t k = 0; k < fresh.layers.size(); ++k) {
        CHECK(r.model.layers[k].weights == fresh.layers[k].weights);
        CHECK(r.model.layers[k].bias == fresh.layers[k].bias);
    }
}

TEST_CASE("FNN training is deterministic and lowers the loss", "[fnn]") {
    const auto ds = small_dataset(256, 6);
    const auto [train_set, test_set] = split(ds, 0.75);
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.batch_size = 32;
    const std::vector<std::size_t> hidden{16};
    const auto a = train_fnn(train_set, test_set, hidden, cfg);
    const auto b = train_fnn(train_set, test_set, hidden, cfg);
    CHECK(a.metrics == b.metrics);
    CHECK(a.final_train_loss() < a.initial_train_loss());
}

TEST_CASE("real weight files round-trip and reject corruption", "[fnn][io]") {
    Rng rng(7);
    const auto net = make_fnn(4, std::vector<std::size_t>{3}, rng);
    const auto bytes = encode_weights(net);
    const auto back = decode_real_weights(bytes);
    CHECK(encode_weights(back) == bytes);
    const auto path = std::filesystem::temp_directory_path() / "scnet_test_fnn.bin";
    save_weights(net, path.string());
    CHECK(encode_weights(load_real_weights(path.string())) == bytes);
    std::filesystem::remove(path);

    auto b = bytes;
    b[0] = 'Z';
    CHECK_THROWS_AS(decode_real_weights(b), BadMagicError);
    b = bytes;
    b.resize(b.size() - 8);
    CHECK_THROWS_AS(decode_real_weights(b), TruncatedFileError);
    CHECK_THROWS_AS(decode_complex_weights(bytes), BadMagicError);
}
