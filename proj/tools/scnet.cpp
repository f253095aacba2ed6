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
// Command-line front end: generate | train | eval | sweep | flops.
//
// Exit codes: 0 success, 1 unexpected error, 2 config or usage error,
// 3 I/O or file-format error, 4 training diverged.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scnet/scnet.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kConfig = 2, kIo = 3, kDiverged = 4 };

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string preset = "paper";
    std::vector<std::string> overrides;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Config file (INI-style sections)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed; overrides run.seed");
    cmd->add_option("--preset", o.preset, "Base settings before the config file")
        ->check(CLI::IsMember({"paper", "desk"}));
    cmd->add_option("--set", o.overrides, "Override a config key: section.key=value (repeatable)");
    cmd->add_flag("-v,--verbose", o.verbose, "Per-epoch progress on stderr");
}

scnet::RunConfig resolve(const CommonOptions& o) {
    auto cfg = scnet::RunConfig::preset(o.preset);
    if (!o.config_path.empty()) cfg = scnet::load_config(o.config_path, cfg);
    for (const auto& kv : o.overrides) scnet::apply_override(cfg, kv);
    if (o.seed) cfg.seed = *o.seed;
    cfg.workers = scnet::workers_from_env(cfg.workers);
    scnet::validate(cfg);
    return cfg;
}

template <class Model>
void write_csv(const std::string& path, const scnet::TrainResult<Model>& r) {
    std::ofstream out(path);
    if (!out) throw scnet::IoError("cannot open '" + path + "' for writing");
    scnet::write_metrics_csv(out, r.metrics);
}

scnet::EpochCallback progress(bool verbose) {
    if (!verbose) return {};
    return [](const scnet::EpochMetrics& m) {
        std::cerr << "epoch " << m.epoch << "  train_loss " << m.train_loss << "  eval_nmse " << m.eval_nmse << '\n';
    };
}

std::pair<scnet::Dataset, scnet::Dataset> split_for(const scnet::RunConfig& cfg, const scnet::Dataset& ds) {
    return scnet::split(ds, cfg.train_fraction);
}

int cmd_generate(const CommonOptions& o, const std::string& out) {
    const auto cfg = resolve(o);
    const auto ds = scnet::generate_dataset(cfg.samples, scnet::generation_params(cfg), scnet::derive_seed(cfg.seed, "dataset"));
    scnet::save_dataset(ds, out);
    std::cout << "wrote " << ds.size() << " samples (M=" << ds.meta.num_antennas << ", P=" << ds.meta.paths
              << ", f_U=" << ds.meta.uplink_frequency << " Hz, f_D=" << ds.meta.downlink_frequency
              << " Hz, scale=" << ds.meta.scale << ") to " << out << '\n';
    return kOk;
}

int cmd_train(const CommonOptions& o, const std::string& dataset_path, const std::string& out,
              std::string metrics_path, const std::string& model) {
    const auto cfg = resolve(o);
    const auto ds = scnet::load_dataset(dataset_path);
    const auto [train_set, test_set] = split_for(cfg, ds);
    const auto tc = scnet::train_config(cfg);
    if (metrics_path.empty()) metrics_path = out + ".metrics.csv";
    double final_nmse = 0.0;
    if (model == "fnn") {
        const auto r = scnet::train_fnn(train_set, test_set, cfg.hidden, tc, progress(o.verbose));
        scnet::save_weights(r.model, out);
        write_csv(metrics_path, r);
        final_nmse = r.final_eval_nmse();
    } else {
        const auto r = scnet::train_scnet(train_set, test_set, cfg.hidden, tc, progress(o.verbose));
        scnet::save_weights(r.model, out);
        write_csv(metrics_path, r);
        final_nmse = r.final_eval_nmse();
    }
    std::cout << "trained " << model << " on " << train_set.size() << " samples for " << cfg.epochs
              << " epochs; test nmse " << final_nmse << "; weights " << out << ", metrics " << metrics_path << '\n';
    return kOk;
}

int cmd_eval(const CommonOptions& o, const std::string& dataset_path, const std::string& model_path,
             const std::string& which) {
    const auto cfg = resolve(o);
    const auto ds = scnet::load_dataset(dataset_path);
    scnet::Dataset subset;
    if (which == "all") {
        subset = ds;
    } else {
        auto [train_set, test_set] = split_for(cfg, ds);
        subset = which == "train" ? std::move(train_set) : std::move(test_set);
    }
    const auto bytes = scnet::io::read_file(model_path);
    double value = 0.0;
    std::string kind;
    if (bytes.size() >= 8 && std::string_view(bytes.data(), 8) == scnet::kRealWeightsMagic) {
        const auto net = scnet::decode_real_weights(bytes);
        value = scnet::dataset_nmse(net, subset);
        kind = "fnn";
    } else {
        const auto net = scnet::decode_complex_weights(bytes);
        value = scnet::dataset_nmse(net, subset);
        kind = "scnet";
    }
    std::cout.precision(10);
    std::cout << "model=" << kind << " split=" << which << " samples=" << subset.size() << " nmse=" << value
              << " nmse_db=" << 10.0 * std::log10(value) << '\n';
    return kOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& name, const std::string& out) {
    const auto cfg = resolve(o);
    scnet::ControlVariable control;
    if (name == "angular_spread")
        control = scnet::ControlVariable::angular_spread;
    else if (name == "freq_diff")
        control = scnet::ControlVariable::freq_diff;
    else
        control = scnet::ControlVariable::path_count;
    const auto result = scnet::run_sweep(scnet::sweep_spec(cfg, control));
    std::ofstream csv(out);
    if (!csv) throw scnet::IoError("cannot open '" + out + "' for writing");
    scnet::write_sweep_csv(csv, result);
    const std::string meta_path = out + ".meta.json";
    std::ofstream meta(meta_path);
    if (!meta) throw scnet::IoError("cannot open '" + meta_path + "' for writing");
    scnet::write_sweep_metadata(meta, result);
    scnet::write_sweep_csv(std::cout, result);
    return kOk;
}

int cmd_flops(const CommonOptions& o) {
    const auto cfg = resolve(o);
    const auto sc_sizes = scnet::scnet_layer_sizes(cfg.antennas, cfg.hidden);
    const auto fnn_sizes = scnet::fnn_layer_sizes(cfg.antennas, scnet::fnn_hidden_for(cfg.hidden));
    auto list = [](const std::vector<std::size_t>& s) {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
        return out;
    };
    std::cout << "model,layer_sizes,is_complex,flops,real_parameters\n";
    std::cout << "scnet,\"" << list(sc_sizes) << "\",true," << scnet::flops(sc_sizes, true) << ','
              << scnet::scnet_real_parameter_count(sc_sizes) << '\n';
    std::size_t fnn_params = 0;
    for (std::size_t l = 1; l < fnn_sizes.size(); ++l) fnn_params += fnn_sizes[l - 1] * fnn_sizes[l] + fnn_sizes[l];
    std::cout << "fnn,\"" << list(fnn_sizes) << "\",false," << scnet::flops(fnn_sizes, false) << ',' << fnn_params
              << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scnet: complex-valued downlink CSI prediction for FDD massive MIMO"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string out, dataset, model_path, metrics, model_kind = "scnet", split = "test", sweep_name;

    auto* gen = app.add_subcommand("generate", "Simulate a dataset file");
    add_common(gen, common);
    gen->add_option("--out", out, "Dataset file to write")->required();

    auto* train = app.add_subcommand("train", "Train a model on the training split of a dataset");
    add_common(train, common);
    train->add_option("--dataset", dataset, "Dataset file")->required()->check(CLI::ExistingFile);
    train->add_option("--out", out, "Weight file to write")->required();
    train->add_option("--metrics", metrics, "Per-epoch CSV (default: <out>.metrics.csv)");
    train->add_option("--model", model_kind, "Model type")->check(CLI::IsMember({"scnet", "fnn"}));

    auto* eval = app.add_subcommand("eval", "Report the NMSE of a trained model");
    add_common(eval, common);
    eval->add_option("--dataset", dataset, "Dataset file")->required()->check(CLI::ExistingFile);
    eval->add_option("--model", model_path, "Weight file (SCNet or FNN)")->required()->check(CLI::ExistingFile);
    eval->add_option("--split", split, "Which part of the dataset")->check(CLI::IsMember({"test", "train", "all"}));

    auto* sweep = app.add_subcommand("sweep", "Run an NMSE sweep and write a CSV");
    add_common(sweep, common);
    sweep->add_option("name", sweep_name, "Control variable")
        ->required()
        ->check(CLI::IsMember({"angular_spread", "freq_diff", "path_count"}));
    sweep->add_option("--out", out, "CSV file to write")->required();

    auto* fl = app.add_subcommand("flops", "Forward-pass multiplication counts of SCNet and FNN");
    add_common(fl, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*gen) return cmd_generate(common, out);
        if (*train) return cmd_train(common, dataset, out, metrics, model_kind);
        if (*eval) return cmd_eval(common, dataset, model_path, split);
        if (*sweep) return cmd_sweep(common, sweep_name, out);
        if (*fl) return cmd_flops(common);
    } catch (const scnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const scnet::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const scnet::TrainingDivergedError& e) {
        std::cerr << "training diverged: " << e.what() << '\n';
        return kDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnexpected;
    }
    return kUnexpected;
}
