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

// Loss, component-wise ADAM and the epoch/batch training loop.
//
// The loop is generic over the model. A model type M is trainable when these
// are found by argument-dependent lookup:
//   training_forward(const M&, const ComplexMatrix& x)     -> pass with .output (ComplexMatrix)
//   training_backward(const M&, pass, const ComplexMatrix&) -> gradient set
//   parameter_blocks(M&), gradient_blocks(const grads&)     -> spans of doubles
// Inputs, outputs and the packed loss gradient are always complex; a real
// network adapts by packing at its boundary.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scnet/cvnn.hpp"
#include "scnet/dataset.hpp"
#include "scnet/error.hpp"
#include "scnet/metrics.hpp"
#include "scnet/random.hpp"

namespace scnet {

/// (1 / (V N)) sum_v |pred_v - label_v|^2 over the columns of the batch.
inline double loss(const ComplexMatrix& pred, const ComplexMatrix& label) {
    if (pred.rows() != label.rows() || pred.cols() != label.cols())
        throw ShapeError("prediction and label batches differ in shape");
    if (pred.size() == 0) throw ShapeError("empty batch");
    return (pred - label).squaredNorm() / static_cast<double>(pred.size());
}

/// dLoss/d(re, im) of the prediction, packed: 2 (pred - label) / (V N).
inline ComplexMatrix loss_gradient(const ComplexMatrix& pred, const ComplexMatrix& label) {
    if (pred.rows() != label.rows() || pred.cols() != label.cols())
        throw ShapeError("prediction and label batches differ in shape");
    return (pred - label) * (2.0 / static_cast<double>(pred.size()));
}

struct AdamHyper {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const {
        if (!(learning_rate >= 0.0)) throw InvalidParametersError("learning rate must be nonnegative");
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
            throw InvalidParametersError("ADAM betas must lie in [0, 1)");
        if (!(epsilon > 0.0)) throw InvalidParametersError("ADAM epsilon must be positive");
    }
};

/// First/second moments per real parameter component, shaped like the parameter blocks.
struct AdamState {
    AdamHyper hyper;
    std::uint64_t step = 0;
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;

    AdamState() = default;

    template <class Blocks>
    AdamState(const Blocks& params, AdamHyper h) : hyper(h) {
        hyper.validate();
        for (const auto& b : params) {
            first_moment.emplace_back(b.size(), 0.0);
            second_moment.emplace_back(b.size(), 0.0);
        }
    }
};

/// One bias-corrected ADAM update applied independently to every real component.
inline void adam_step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
                      AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size())
        throw ShapeError("parameter, gradient and optimizer block counts differ");
    for (std::size_t k = 0; k < params.size(); ++k)
        if (params[k].size() != grads[k].size() || params[k].size() != state.first_moment[k].size())
            throw ShapeError("block " + std::to_string(k) + " sizes differ");

    const auto& h = state.hyper;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(h.beta1, t);
    const double c2 = 1.0 - std::pow(h.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& m = state.first_moment[k];
        auto& v = state.second_moment[k];
        const auto p = params[k];
        const auto g = grads[k];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
            v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g[i] * g[i];
            const double m_hat = m[i] / c1;
            const double v_hat = v[i] / c2;
            p[i] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon);
        }
    }
}

template <class Model, class Grads>
    requires requires(Model& m, const Grads& g) {
        parameter_blocks(m);
        gradient_blocks(g);
    }
void adam_step(Model& model, const Grads& grads, AdamState& state) {
    const auto p = parameter_blocks(model);
    const auto g = gradient_blocks(grads);
    adam_step(std::span<const std::span<double>>(p), std::span<const std::span<const double>>(g), state);
}

struct TrainConfig {
    std::size_t batch_size = 128;
    std::size_t epochs = 400;
    AdamHyper adam;
    std::uint64_t seed = 1;
    bool shuffle = true;

    void validate() const {
        if (batch_size == 0) throw InvalidParametersError("batch size must be at least 1");
        if (epochs == 0) throw InvalidParametersError("epoch count must be at least 1");
        adam.validate();
    }
};

/// Epoch 0 is the untrained model evaluated on the full training set; later
/// epochs report the sample-weighted mean of the batch losses seen while training.
struct EpochMetrics {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double eval_nmse = std::numeric_limits<double>::quiet_NaN();

    bool operator==(const EpochMetrics&) const = default;
};

template <class Model>
struct TrainResult {
    Model model;
    std::vector<EpochMetrics> metrics;

    double initial_train_loss() const { return metrics.front().train_loss; }
    double final_train_loss() const { return metrics.back().train_loss; }
    double initial_eval_nmse() const { return metrics.front().eval_nmse; }
    double final_eval_nmse() const { return metrics.back().eval_nmse; }
};

inline void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> metrics) {
    out << "epoch,train_loss,eval_nmse\n";
    const auto old = out.precision(17);
    for (const auto& m : metrics) out << m.epoch << ',' << m.train_loss << ',' << m.eval_nmse << '\n';
    out.precision(old);
}

// ComplexNetwork as a trainable model.
inline ComplexForward training_forward(const ComplexNetwork& net, const ComplexMatrix& x) { return forward_batch(net, x); }

inline GradientSet training_backward(const ComplexNetwork& net, const ComplexForward& pass, const ComplexMatrix& error) {
    return backward_batch(net, pass.tape, error);
}

/// Complex (input, output) lengths seen by the training loop.
inline std::pair<std::size_t, std::size_t> io_dims(const ComplexNetwork& net) {
    return {net.input_size(), net.output_size()};
}

template <class M>
concept TrainableModel = requires(M& m, const M& cm, const ComplexMatrix& x) {
    { training_forward(cm, x).output } -> std::convertible_to<ComplexMatrix>;
    gradient_blocks(training_backward(cm, training_forward(cm, x), x));
    parameter_blocks(m);
    { io_dims(cm) } -> std::convertible_to<std::pair<std::size_t, std::size_t>>;
};

inline constexpr std::size_t kEvalChunk = 1024;

/// Prediction over a whole dataset, in chunks.
template <TrainableModel Model>
ComplexMatrix predict_dataset(const Model& model, const Dataset& ds) {
    ComplexMatrix out(static_cast<Eigen::Index>(io_dims(model).second), static_cast<Eigen::Index>(ds.size()));
    std::vector<std::size_t> idx;
    for (std::size_t first = 0; first < ds.size(); first += kEvalChunk) {
        const std::size_t n = std::min(kEvalChunk, ds.size() - first);
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), first);
        out.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(n)) =
            training_forward(model, gather_inputs(ds, idx)).output;
    }
    return out;
}

template <TrainableModel Model>
double dataset_loss(const Model& model, const Dataset& ds) {
    return loss(predict_dataset(model, ds), all_labels(ds));
}

template <TrainableModel Model>
double dataset_nmse(const Model& model, const Dataset& ds) {
    return nmse(predict_dataset(model, ds), all_labels(ds));
}

template <TrainableModel Model>
void check_dimensions(const Model& model, const Dataset& ds, const char* which) {
    const auto [in, out] = io_dims(model);
    for (const auto& s : ds.samples) {
        if (static_cast<std::size_t>(s.input.size()) != in || static_cast<std::size_t>(s.label.size()) != out)
            throw ShapeError(std::string(which) + " dataset sample length does not match the network");
    }
}

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Mini-batch ADAM on the loss above. The last partial batch of each epoch is
/// kept. Shuffling draws from derive_seed(cfg.seed, "shuffle"), so two runs with
/// the same model, data and config produce identical traces.
template <TrainableModel Model>
TrainResult<Model> train(Model model, const Dataset& train_ds, const Dataset& eval_ds, const TrainConfig& cfg,
                         const EpochCallback& on_epoch = {}) {
    cfg.validate();
    if (train_ds.empty()) throw InvalidParametersError("training dataset is empty");
    check_dimensions(model, train_ds, "training");
    check_dimensions(model, eval_ds, "evaluation");

    auto evaluate = [&](const Model& m) {
        return eval_ds.empty() ? std::numeric_limits<double>::quiet_NaN() : dataset_nmse(m, eval_ds);
    };

    TrainResult<Model> result{std::move(model), {}};
    result.metrics.push_back({0, dataset_loss(result.model, train_ds), evaluate(result.model)});
    if (on_epoch) on_epoch(result.metrics.back());

    AdamState state(parameter_blocks(result.model), cfg.adam);
    Rng shuffler(derive_seed(cfg.seed, "shuffle"));
    std::vector<std::size_t> order(train_ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffler.below(i)]);
        }
        double loss_sum = 0.0;
        for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
            const std::size_t n = std::min(cfg.batch_size, order.size() - first);
            const std::span<const std::size_t> batch(order.data() + first, n);
            const ComplexMatrix x = gather_inputs(train_ds, batch);
            const ComplexMatrix y = gather_labels(train_ds, batch);
            const auto pass = training_forward(result.model, x);
            const double batch_loss = loss(pass.output, y);
            if (!std::isfinite(batch_loss))
                throw TrainingDivergedError(static_cast<int>(epoch),
                                            "training diverged in epoch " + std::to_string(epoch) + ": loss is " +
                                                std::to_string(batch_loss));
            loss_sum += batch_loss * static_cast<double>(n);
            const auto grads = training_backward(result.model, pass, loss_gradient(pass.output, y));
            adam_step(result.model, grads, state);
        }
        result.metrics.push_back({epoch, loss_sum / static_cast<double>(order.size()), evaluate(result.model)});
        if (on_epoch) on_epoch(result.metrics.back());
    }
    return result;
}

/// n_0 = M, the hidden sizes, n_{L-1} = M.
inline std::vector<std::size_t> scnet_layer_sizes(std::size_t num_antennas, std::span<const std::size_t> hidden) {
    std::vector<std::size_t> sizes{num_antennas};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(num_antennas);
    return sizes;
}

/// Fresh SCNet initialized from derive_seed(cfg.seed, "init"), then trained.
inline TrainResult<ComplexNetwork> train_scnet(const Dataset& train_ds, const Dataset& eval_ds,
                                               std::span<const std::size_t> hidden, const TrainConfig& cfg,
                                               const EpochCallback& on_epoch = {}) {
    if (train_ds.empty()) throw InvalidParametersError("training dataset is empty");
    Rng init_rng(derive_seed(cfg.seed, "init"));
    const auto sizes = scnet_layer_sizes(static_cast<std::size_t>(train_ds.samples.front().input.size()), hidden);
    return train(init_network(sizes, init_rng), train_ds, eval_ds, cfg, on_epoch);
}

} // namespace scnet
