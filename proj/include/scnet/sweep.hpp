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

// Experiment sweeps: train from scratch per (grid point, seed) and report the
// test NMSE, or, for the path-count sweep, train once at the configured path
// count and deploy on datasets with a different number of paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scnet/baseline_fnn.hpp"
#include "scnet/channel_model.hpp"
#include "scnet/cvnn.hpp"
#include "scnet/dataset.hpp"
#include "scnet/error.hpp"
#include "scnet/metrics.hpp"
#include "scnet/optim.hpp"
#include "scnet/parallel.hpp"

namespace scnet {

/// Everything needed to generate data for and train one model.
struct ExperimentParams {
    GenerationParams generation;
    std::size_t samples = 102'400;
    double train_fraction = 0.9;
    std::vector<std::size_t> hidden{128, 64, 128};
    TrainConfig train;
};

enum class ModelSelector { scnet, fnn, both };

inline bool runs_scnet(ModelSelector m) { return m != ModelSelector::fnn; }
inline bool runs_fnn(ModelSelector m) { return m != ModelSelector::scnet; }

inline std::string_view to_string(ModelSelector m) {
    switch (m) {
    case ModelSelector::scnet: return "scnet";
    case ModelSelector::fnn: return "fnn";
    case ModelSelector::both: return "both";
    }
    return "?";
}

/// Result of one model on one (grid point, seed).
struct ModelRun {
    bool diverged = false;
    std::string error;
    std::vector<EpochMetrics> metrics;
    double test_nmse = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentOutcome {
    Dataset train_set;
    Dataset test_set;
    std::optional<ComplexNetwork> scnet_model;
    std::optional<RealNetwork> fnn_model;
    ModelRun scnet;
    ModelRun fnn;
};

/// Divides every sample by `scale` relative to its current normalization.
inline void rescale(Dataset& ds, double scale) {
    const double factor = ds.meta.scale / scale;
    for (auto& s : ds.samples) {
        s.input *= factor;
        s.label *= factor;
    }
    ds.meta.scale = scale;
}

/// Test-sized set drawn from derive_seed(seed, "deploy") under `params`,
/// expressed in the normalization of a model trained at `train_scale`.
inline Dataset deployment_set(const ExperimentParams& params, std::uint64_t seed, double train_scale) {
    const auto n_train =
        static_cast<std::size_t>(std::llround(static_cast<double>(params.samples) * params.train_fraction));
    Dataset deploy = generate_dataset(params.samples - n_train, params.generation, derive_seed(seed, "deploy"));
    rescale(deploy, train_scale);
    return deploy;
}

/// Generates a dataset from derive_seed(seed, "dataset"), splits it, and trains
/// the selected models with cfg.seed = derive_seed(seed, "train").
inline ExperimentOutcome run_experiment(const ExperimentParams& params, std::uint64_t seed, ModelSelector models,
                                        bool keep_datasets = false) {
    const Dataset all = generate_dataset(params.samples, params.generation, derive_seed(seed, "dataset"));
    auto [train_set, test_set] = split(all, params.train_fraction);
    TrainConfig cfg = params.train;
    cfg.seed = derive_seed(seed, "train");

    ExperimentOutcome out;
    auto run = [&](auto&& trainer, ModelRun& run, auto& slot) {
        try {
            auto r = trainer(train_set, test_set, std::span<const std::size_t>(params.hidden), cfg, EpochCallback{});
            run.metrics = r.metrics;
            run.test_nmse = r.final_eval_nmse();
            slot = std::move(r.model);
        } catch (const TrainingDivergedError& e) {
            run.diverged = true;
            run.error = e.what();
        }
    };
    if (runs_scnet(models)) run(train_scnet, out.scnet, out.scnet_model);
    if (runs_fnn(models)) run(train_fnn, out.fnn, out.fnn_model);
    if (keep_datasets) {
        out.train_set = std::move(train_set);
        out.test_set = std::move(test_set);
    } else {
        out.train_set.meta = train_set.meta;
        out.test_set.meta = test_set.meta;
    }
    return out;
}

enum class ControlVariable { angular_spread, freq_diff, path_count };

inline std::string_view to_string(ControlVariable c) {
    switch (c) {
    case ControlVariable::angular_spread: return "angular_spread";
    case ControlVariable::freq_diff: return "freq_diff";
    case ControlVariable::path_count: return "path_count";
    }
    return "?";
}

/// Grid units: degrees for angular_spread, MHz for freq_diff (f_D = f_U + df),
/// number of paths for path_count.
inline std::string_view control_unit(ControlVariable c) {
    switch (c) {
    case ControlVariable::angular_spread: return "deg";
    case ControlVariable::freq_diff: return "MHz";
    case ControlVariable::path_count: return "paths";
    }
    return "?";
}

struct SweepSpec {
    ControlVariable control = ControlVariable::angular_spread;
    std::vector<double> grid;
    ExperimentParams fixed;
    std::size_t seeds = 3;
    ModelSelector models = ModelSelector::both;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;

    void validate() const {
        if (grid.empty()) throw InvalidParametersError("sweep grid is empty");
        if (seeds == 0) throw InvalidParametersError("sweep needs at least one seed");
        for (double v : grid) {
            if (!std::isfinite(v)) throw InvalidParametersError("sweep grid value is not finite");
            if (control == ControlVariable::angular_spread && v < 0.0)
                throw InvalidParametersError("angular spread grid values must be nonnegative");
            if (control == ControlVariable::path_count && (v < 1.0 || v != std::floor(v)))
                throw InvalidParametersError("path counts must be positive integers");
        }
    }
};

struct SweepRow {
    double control_value = 0.0;
    std::string model;
    double mean_nmse = std::numeric_limits<double>::quiet_NaN();
    double std_nmse = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_seeds = 0; // seeds that produced a value
    std::size_t n_diverged = 0;
    std::vector<double> per_seed;
};

struct SweepResult {
    ControlVariable control = ControlVariable::angular_spread;
    std::vector<SweepRow> rows;
    nlohmann::ordered_json metadata;

    const SweepRow* find(double control_value, std::string_view model) const {
        for (const auto& r : rows)
            if (r.control_value == control_value && r.model == model) return &r;
        return nullptr;
    }
};

/// Mean and sample standard deviation (n - 1); std is 0 for a single value.
inline std::pair<double, double> mean_std(std::span<const double> v) {
    if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

/// Parameters of one grid point of an angular-spread or frequency sweep.
inline ExperimentParams apply_control(ExperimentParams p, ControlVariable control, double value) {
    switch (control) {
    case ControlVariable::angular_spread: p.generation.scenario.angular_spread = deg_to_rad(value); break;
    case ControlVariable::freq_diff: p.generation.downlink_frequency = p.generation.uplink_frequency + value * 1e6; break;
    case ControlVariable::path_count: p.generation.scenario.paths = static_cast<std::size_t>(value); break;
    }
    return p;
}

namespace detail {

inline SweepRow aggregate(double value, std::string model, std::span<const ModelRun* const> runs) {
    SweepRow row;
    row.control_value = value;
    row.model = std::move(model);
    for (const ModelRun* r : runs) {
        if (r->diverged || !std::isfinite(r->test_nmse))
            ++row.n_diverged;
        else
            row.per_seed.push_back(r->test_nmse);
    }
    row.n_seeds = row.per_seed.size();
    std::tie(row.mean_nmse, row.std_nmse) = mean_std(row.per_seed);
    return row;
}

} // namespace detail

/// Seed s of the sweep uses derive_seed(master_seed, "sweep-seed", s) at every
/// grid point, so points differ only in the control variable.
inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.control = spec.control;
    const std::size_t n_points = spec.grid.size();
    const std::size_t n_seeds = spec.seeds;
    auto seed_of = [&](std::size_t s) { return derive_seed(spec.master_seed, "sweep-seed", s); };

    std::vector<ModelRun> scnet_runs;
    std::vector<ModelRun> fnn_runs;

    if (spec.control != ControlVariable::path_count) {
        scnet_runs.resize(n_points * n_seeds);
        fnn_runs.resize(n_points * n_seeds);
        parallel_for(n_points * n_seeds, spec.workers, [&](std::size_t job) {
            const std::size_t point = job / n_seeds;
            const std::size_t s = job % n_seeds;
            const auto params = apply_control(spec.fixed, spec.control, spec.grid[point]);
            auto outcome = run_experiment(params, seed_of(s), spec.models);
            scnet_runs[job] = std::move(outcome.scnet);
            fnn_runs[job] = std::move(outcome.fnn);
        });
    } else {
        // Train once per seed at the configured path count, deploy at every grid value.
        std::vector<ExperimentOutcome> trained(n_seeds);
        parallel_for(n_seeds, spec.workers, [&](std::size_t s) {
            trained[s] = run_experiment(spec.fixed, seed_of(s), spec.models);
        });
        scnet_runs.resize(n_points * n_seeds);
        fnn_runs.resize(n_points * n_seeds);
        parallel_for(n_points * n_seeds, spec.workers, [&](std::size_t job) {
            const std::size_t point = job / n_seeds;
            const std::size_t s = job % n_seeds;
            const auto params = apply_control(spec.fixed, spec.control, spec.grid[point]);
            const Dataset deploy = deployment_set(params, seed_of(s), trained[s].train_set.meta.scale);
            auto evaluate = [&](const ModelRun& trained_run, const auto& model, ModelRun& out) {
                out = trained_run;
                if (trained_run.diverged || !model) return;
                out.test_nmse = dataset_nmse(*model, deploy);
            };
            if (runs_scnet(spec.models)) evaluate(trained[s].scnet, trained[s].scnet_model, scnet_runs[job]);
            if (runs_fnn(spec.models)) evaluate(trained[s].fnn, trained[s].fnn_model, fnn_runs[job]);
        });
    }

    for (std::size_t point = 0; point < n_points; ++point) {
        auto collect = [&](const std::vector<ModelRun>& runs) {
            std::vector<const ModelRun*> out;
            for (std::size_t s = 0; s < n_seeds; ++s) out.push_back(&runs[point * n_seeds + s]);
            return out;
        };
        if (runs_scnet(spec.models))
            result.rows.push_back(detail::aggregate(spec.grid[point], "scnet", collect(scnet_runs)));
        if (runs_fnn(spec.models)) result.rows.push_back(detail::aggregate(spec.grid[point], "fnn", collect(fnn_runs)));
    }

    const auto& g = spec.fixed.generation;
    auto& meta = result.metadata;
    meta["control_name"] = to_string(spec.control);
    meta["control_unit"] = control_unit(spec.control);
    meta["grid"] = spec.grid;
    meta["models"] = to_string(spec.models);
    meta["seeds"] = spec.seeds;
    meta["master_seed"] = spec.master_seed;
    meta["num_antennas"] = g.array.num_antennas;
    meta["antenna_spacing_m"] = g.array.antenna_spacing;
    meta["uplink_frequency_hz"] = g.uplink_frequency;
    meta["downlink_frequency_hz"] = g.downlink_frequency;
    meta["angular_spread_deg"] = rad_to_deg(g.scenario.angular_spread);
    meta["paths"] = g.scenario.paths;
    meta["max_delay_s"] = g.scenario.max_delay;
    meta["snr_db"] = g.snr_db;
    meta["perfect_estimation"] = g.perfect_estimation;
    meta["samples"] = spec.fixed.samples;
    meta["train_fraction"] = spec.fixed.train_fraction;
    meta["hidden"] = spec.fixed.hidden;
    meta["batch_size"] = spec.fixed.train.batch_size;
    meta["epochs"] = spec.fixed.train.epochs;
    meta["learning_rate"] = spec.fixed.train.adam.learning_rate;
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < scnet_runs.size(); ++i) {
        if (scnet_runs[i].diverged) failures.push_back("scnet: " + scnet_runs[i].error);
        if (fnn_runs[i].diverged) failures.push_back("fnn: " + fnn_runs[i].error);
    }
    meta["divergences"] = failures;
    return result;
}

/// CSV: control_name,control_value,model,mean_nmse,std_nmse,n_seeds,n_diverged
inline void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "control_name,control_value,model,mean_nmse,std_nmse,n_seeds,n_diverged\n";
    const auto old = out.precision(17);
    for (const auto& r : result.rows)
        out << to_string(result.control) << ',' << r.control_value << ',' << r.model << ',' << r.mean_nmse << ','
            << r.std_nmse << ',' << r.n_seeds << ',' << r.n_diverged << '\n';
    out.precision(old);
}

inline void write_sweep_metadata(std::ostream& out, const SweepResult& result) {
    out << result.metadata.dump(2) << '\n';
}

} // namespace scnet
