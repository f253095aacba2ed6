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

// Paired (estimated uplink CSI -> true downlink CSI) sample sets.
//
// File layout (all little-endian):
//   "SCNETDS1" | version u32 | M u32 | count u64 | f_U f64 | f_D f64 |
//   delta_theta f64 (rad) | P u32 | snr_db f64 | scale f64 | master_seed u64 |
//   count x (input, label), each M x (re f64, im f64)

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scnet/binary_io.hpp"
#include "scnet/channel_model.hpp"
#include "scnet/error.hpp"
#include "scnet/estimation.hpp"
#include "scnet/parallel.hpp"
#include "scnet/random.hpp"

namespace scnet {

using ComplexMatrix = Eigen::MatrixXcd;

struct SamplePair {
    ComplexVector input; // estimated uplink CSI
    ComplexVector label; // downlink CSI
};

struct DatasetMeta {
    std::uint32_t num_antennas = 0;
    double uplink_frequency = 0.0;
    double downlink_frequency = 0.0;
    double angular_spread = 0.0; // radians
    std::uint32_t paths = 0;
    double snr_db = 0.0;         // +inf when estimation was bypassed
    double scale = 1.0;          // inputs and labels were divided by this
    std::uint64_t master_seed = 0;
    std::uint64_t count = 0;

    bool operator==(const DatasetMeta&) const = default;
};

struct Dataset {
    std::vector<SamplePair> samples;
    DatasetMeta meta;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }
};

struct GenerationParams {
    ArrayConfig array;
    ScenarioParams scenario;
    double uplink_frequency = 2.5e9;
    double downlink_frequency = 2.5e9 + 120e6;
    double snr_db = 25.0;
    bool perfect_estimation = false;
    bool label_noise = false; // corrupt labels with the same estimator
    std::size_t workers = 1;

    void validate() const {
        array.validate();
        scenario.validate();
        if (!(uplink_frequency > 0.0) || !(downlink_frequency > 0.0))
            throw InvalidParametersError("carrier frequencies must be positive");
    }
};

/// The scenario behind sample `index` of a dataset generated with `master_seed`.
inline Scenario scenario_for_index(const ScenarioParams& params, std::uint64_t master_seed, std::uint64_t index) {
    Rng rng(derive_seed(master_seed, "scenario", index));
    return sample_scenario(rng, params);
}

/// Builds `count` samples, then normalizes inputs and labels by one global
/// scale s = RMS of all label entries. Per-index random streams make the
/// result independent of `params.workers`.
inline Dataset generate_dataset(std::size_t count, const GenerationParams& params, std::uint64_t master_seed) {
    if (count == 0) throw InvalidParametersError("dataset must contain at least one sample");
    params.validate();

    std::vector<std::pair<ChannelVector, ChannelVector>> clean(count);
    parallel_for(count, params.workers, [&](std::size_t i) {
        const Scenario s = scenario_for_index(params.scenario, master_seed, i);
        clean[i] = channel_pair(params.array, s, params.uplink_frequency, params.downlink_frequency);
    });

    // Scalar prior for the estimator: dataset-average per-element power.
    double up_power = 0.0;
    double down_power = 0.0;
    for (const auto& [up, down] : clean) {
        up_power += up.coefficients.squaredNorm();
        down_power += down.coefficients.squaredNorm();
    }
    const double denom = static_cast<double>(count) * static_cast<double>(params.array.num_antennas);
    up_power /= denom;
    down_power /= denom;

    EstimationConfig up_est{params.snr_db, up_power > 0.0 ? up_power : 1.0, params.perfect_estimation};
    EstimationConfig down_est{params.snr_db, down_power > 0.0 ? down_power : 1.0, params.perfect_estimation};

    Dataset ds;
    ds.samples.resize(count);
    parallel_for(count, params.workers, [&](std::size_t i) {
        Rng noise(derive_seed(master_seed, "noise", i));
        ds.samples[i].input = estimate_uplink(clean[i].first, up_est, noise).coefficients;
        if (params.label_noise) {
            Rng label_noise(derive_seed(master_seed, "label-noise", i));
            ds.samples[i].label = estimate_uplink(clean[i].second, down_est, label_noise).coefficients;
        } else {
            ds.samples[i].label = std::move(clean[i].second.coefficients);
        }
    });

    double label_power = 0.0;
    for (const auto& s : ds.samples) label_power += s.label.squaredNorm();
    label_power /= denom;
    const double scale = label_power > 0.0 ? std::sqrt(label_power) : 1.0;
    for (auto& s : ds.samples) {
        s.input /= scale;
        s.label /= scale;
    }

    ds.meta.num_antennas = static_cast<std::uint32_t>(params.array.num_antennas);
    ds.meta.uplink_frequency = params.uplink_frequency;
    ds.meta.downlink_frequency = params.downlink_frequency;
    ds.meta.angular_spread = params.scenario.angular_spread;
    ds.meta.paths = static_cast<std::uint32_t>(params.scenario.paths);
    ds.meta.snr_db = up_est.noiseless() ? std::numeric_limits<double>::infinity() : params.snr_db;
    ds.meta.scale = scale;
    ds.meta.master_seed = master_seed;
    ds.meta.count = count;
    return ds;
}

inline constexpr std::string_view kDatasetMagic = "SCNETDS1";
inline constexpr std::uint32_t kDatasetVersion = 1;

inline std::vector<char> encode_dataset(const Dataset& ds) {
    const auto m = ds.meta.num_antennas;
    for (const auto& s : ds.samples)
        if (s.input.size() != m || s.label.size() != m) throw ShapeError("sample length differs from meta M");
    io::Writer w;
    w.magic(kDatasetMagic);
    w.u32(kDatasetVersion);
    w.u32(m);
    w.u64(ds.samples.size());
    w.f64(ds.meta.uplink_frequency);
    w.f64(ds.meta.downlink_frequency);
    w.f64(ds.meta.angular_spread);
    w.u32(ds.meta.paths);
    w.f64(ds.meta.snr_db);
    w.f64(ds.meta.scale);
    w.u64(ds.meta.master_seed);
    for (const auto& s : ds.samples) {
        for (auto z : s.input) w.complex(z);
        for (auto z : s.label) w.complex(z);
    }
    return w.bytes();
}

inline Dataset decode_dataset(std::vector<char> bytes) {
    io::Reader r(std::move(bytes));
    r.expect_magic(kDatasetMagic);
    const auto version = r.u32();
    if (version != kDatasetVersion)
        throw VersionMismatchError("dataset version " + std::to_string(version) + " is not supported (expected " +
                                   std::to_string(kDatasetVersion) + ")");
    Dataset ds;
    ds.meta.num_antennas = r.u32();
    ds.meta.count = r.u64();
    ds.meta.uplink_frequency = r.f64();
    ds.meta.downlink_frequency = r.f64();
    ds.meta.angular_spread = r.f64();
    ds.meta.paths = r.u32();
    ds.meta.snr_db = r.f64();
    ds.meta.scale = r.f64();
    ds.meta.master_seed = r.u64();

    const std::uint64_t m = ds.meta.num_antennas;
    const std::uint64_t per_sample = 2 * m * 16;
    if (m != 0 && ds.meta.count > r.remaining() / per_sample)
        throw TruncatedFileError("truncated dataset payload: header declares " + std::to_string(ds.meta.count) +
                                 " samples of M=" + std::to_string(m) + ", file holds " +
                                 std::to_string(r.remaining()) + " payload bytes");

    ds.samples.resize(ds.meta.count);
    for (auto& s : ds.samples) {
        s.input.resize(static_cast<Eigen::Index>(m));
        s.label.resize(static_cast<Eigen::Index>(m));
        for (auto& z : s.input) z = r.complex();
        for (auto& z : s.label) z = r.complex();
    }
    if (r.remaining() != 0) throw FormatError("dataset file has " + std::to_string(r.remaining()) + " trailing bytes");
    return ds;
}

inline void save_dataset(const Dataset& ds, const std::string& path) { io::write_file(path, encode_dataset(ds)); }

inline Dataset load_dataset(const std::string& path) { return decode_dataset(io::read_file(path)); }

/// Order-preserving split; the first round(count * train_fraction) samples go to training.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidSplitError("train fraction must lie strictly between 0 and 1");
    const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(ds.size()) * train_fraction));
    if (n_train == 0 || n_train >= ds.size())
        throw InvalidSplitError("split of " + std::to_string(ds.size()) + " samples leaves one side empty");
    Dataset train, test;
    train.meta = ds.meta;
    test.meta = ds.meta;
    train.samples.assign(ds.samples.begin(), ds.samples.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.samples.assign(ds.samples.begin() + static_cast<std::ptrdiff_t>(n_train), ds.samples.end());
    train.meta.count = train.size();
    test.meta.count = test.size();
    return {std::move(train), std::move(test)};
}

/// Inputs (or labels) of the listed samples as the columns of an M x n matrix.
inline ComplexMatrix gather_inputs(const Dataset& ds, std::span<const std::size_t> indices) {
    const auto m = ds.samples.empty() ? 0 : ds.samples.front().input.size();
    ComplexMatrix out(m, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = ds.samples[indices[k]].input;
    return out;
}

inline ComplexMatrix gather_labels(const Dataset& ds, std::span<const std::size_t> indices) {
    const auto m = ds.samples.empty() ? 0 : ds.samples.front().label.size();
    ComplexMatrix out(m, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = ds.samples[indices[k]].label;
    return out;
}

inline ComplexMatrix all_inputs(const Dataset& ds) {
    std::vector<std::size_t> idx(ds.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return gather_inputs(ds, idx);
}

inline ComplexMatrix all_labels(const Dataset& ds) {
    std::vector<std::size_t> idx(ds.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return gather_labels(ds, idx);
}

} // namespace scnet
