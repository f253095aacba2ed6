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

// Multipath channel synthesis for a base station with a uniform linear array.
//
//   h(f) = sum_p alpha_p * exp(-j 2 pi f tau_p + j phi_p) * a(theta_p)
//   a(theta)_m = exp(-j chi m sin(theta)),   chi = 2 pi d f / c,   m = 0..M-1
//
// Uplink and downlink vectors of one user are produced from the same ray list,
// so the only thing that differs between them is the carrier frequency.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scnet/error.hpp"
#include "scnet/random.hpp"

namespace scnet {

using ComplexVector = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299'792'458.0;

constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

struct ArrayConfig {
    std::size_t num_antennas = 128;
    double antenna_spacing = kSpeedOfLight / (2.0 * 2.5e9); // metres

    /// Half-wavelength spacing at `frequency`.
    static ArrayConfig half_wavelength(std::size_t num_antennas, double frequency) {
        return {num_antennas, kSpeedOfLight / (2.0 * frequency)};
    }

    void validate() const {
        if (num_antennas == 0) throw InvalidConfigurationError("array must have at least one antenna");
        if (!(antenna_spacing > 0.0) || !std::isfinite(antenna_spacing))
            throw InvalidConfigurationError("antenna spacing must be positive, got " + std::to_string(antenna_spacing));
    }
};

/// One propagation path.
struct Ray {
    double attenuation = 0.0; // >= 0
    double phase = 0.0;       // radians, [-pi, pi)
    double delay = 0.0;       // seconds, >= 0
    double doa = 0.0;         // radians from broadside

    bool operator==(const Ray&) const = default;
};

/// Full propagation state of one user.
struct Scenario {
    std::vector<Ray> rays;
    double mean_doa = 0.0;       // radians
    double angular_spread = 0.0; // radians
    double distance = 0.0;       // metres; stored, not used by the ray statistics

    bool operator==(const Scenario&) const = default;

    /// Throws InvalidScenarioError on an empty ray list or a ray outside its invariants.
    void validate() const {
        if (rays.empty()) throw InvalidScenarioError("scenario has no rays");
        if (!(angular_spread >= 0.0)) throw InvalidScenarioError("angular spread must be nonnegative");
        const double half = 0.5 * angular_spread;
        const double slack = 1e-12 * (1.0 + std::abs(mean_doa));
        for (std::size_t p = 0; p < rays.size(); ++p) {
            const Ray& r = rays[p];
            const auto where = "ray " + std::to_string(p) + ": ";
            if (!(r.attenuation >= 0.0) || !std::isfinite(r.attenuation))
                throw InvalidScenarioError(where + "attenuation must be finite and nonnegative");
            if (!(r.delay >= 0.0) || !std::isfinite(r.delay))
                throw InvalidScenarioError(where + "delay must be finite and nonnegative");
            if (!(r.phase >= -std::numbers::pi && r.phase < std::numbers::pi))
                throw InvalidScenarioError(where + "phase outside [-pi, pi)");
            if (!(std::abs(r.doa - mean_doa) <= half + slack))
                throw InvalidScenarioError(where + "DOA outside the angular spread around the mean DOA");
        }
    }
};

/// Channel vector h(f) of one carrier.
struct ChannelVector {
    double carrier_frequency = 0.0;
    ComplexVector coefficients;

    Eigen::Index size() const noexcept { return coefficients.size(); }
};

/// Settings of the synthetic ray sampler. Angles in radians.
struct ScenarioParams {
    std::size_t paths = 200;
    double angular_spread = deg_to_rad(10.0);
    double mean_doa_min = deg_to_rad(-60.0);
    double mean_doa_max = deg_to_rad(60.0);
    double max_delay = 1e-4;      // tau ~ U[0, max_delay]
    double rayleigh_scale = 0.0;  // 0 selects sqrt(1 / (2P)), i.e. E[alpha^2] = 1/P
    double distance_min = 10.0;
    double distance_max = 500.0;

    double effective_rayleigh_scale() const {
        return rayleigh_scale > 0.0 ? rayleigh_scale : std::sqrt(1.0 / (2.0 * static_cast<double>(paths)));
    }

    void validate() const {
        if (paths == 0) throw InvalidParametersError("number of paths must be at least 1");
        if (!(angular_spread >= 0.0)) throw InvalidParametersError("angular spread must be nonnegative");
        if (!(mean_doa_min <= mean_doa_max)) throw InvalidParametersError("mean-DOA sector is empty");
        if (!(max_delay >= 0.0)) throw InvalidParametersError("max delay must be nonnegative");
        if (!(rayleigh_scale >= 0.0)) throw InvalidParametersError("Rayleigh scale must be nonnegative");
        if (!(distance_min >= 0.0 && distance_min <= distance_max))
            throw InvalidParametersError("distance range is invalid");
    }
};

/// Array manifold vector a(theta) at carrier `frequency`.
inline ComplexVector steering_vector(const ArrayConfig& cfg, double frequency, double doa) {
    cfg.validate();
    if (!(frequency > 0.0) || !std::isfinite(frequency))
        throw InvalidConfigurationError("carrier frequency must be positive");
    const double chi = 2.0 * std::numbers::pi * cfg.antenna_spacing * frequency / kSpeedOfLight;
    const double step = chi * std::sin(doa);
    ComplexVector a(static_cast<Eigen::Index>(cfg.num_antennas));
    for (Eigen::Index m = 0; m < a.size(); ++m) a[m] = std::polar(1.0, -step * static_cast<double>(m));
    return a;
}

/// exp(-j 2 pi f tau + j phi) with the delay term reduced mod 2 pi before the
/// exponential; f*tau reaches ~1e5 cycles for the default delay range.
inline std::complex<double> ray_gain_phase(double frequency, const Ray& ray) {
    const double cycles = frequency * ray.delay;
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, ray.phase - 2.0 * std::numbers::pi * frac);
}

inline ChannelVector synthesize_channel(const ArrayConfig& cfg, const Scenario& scenario, double frequency) {
    if (scenario.rays.empty()) throw InvalidScenarioError("scenario has no rays");
    ChannelVector h{frequency, ComplexVector::Zero(static_cast<Eigen::Index>(cfg.num_antennas))};
    for (const Ray& ray : scenario.rays) {
        const std::complex<double> g = ray.attenuation * ray_gain_phase(frequency, ray);
        h.coefficients += g * steering_vector(cfg, frequency, ray.doa);
    }
    return h;
}

/// Draws one user's rays. The order of draws is fixed: mean DOA, distance,
/// then (attenuation, phase, delay, DOA) per ray.
inline Scenario sample_scenario(Rng& rng, const ScenarioParams& params) {
    params.validate();
    Scenario s;
    s.mean_doa = rng.uniform(params.mean_doa_min, params.mean_doa_max);
    s.angular_spread = params.angular_spread;
    s.distance = rng.uniform(params.distance_min, params.distance_max);

    const double sigma = params.effective_rayleigh_scale();
    const double lo = s.mean_doa - 0.5 * params.angular_spread;
    s.rays.reserve(params.paths);
    for (std::size_t p = 0; p < params.paths; ++p) {
        Ray r;
        r.attenuation = rng.rayleigh(sigma);
        r.phase = rng.uniform(-std::numbers::pi, std::numbers::pi);
        if (r.phase >= std::numbers::pi) r.phase = -std::numbers::pi;
        r.delay = rng.uniform(0.0, params.max_delay);
        r.doa = lo + params.angular_spread * rng.uniform();
        s.rays.push_back(r);
    }
    return s;
}

/// Uplink and downlink channels of one scenario.
inline std::pair<ChannelVector, ChannelVector> channel_pair(const ArrayConfig& cfg, const Scenario& scenario,
                                                            double uplink_frequency, double downlink_frequency) {
    return {synthesize_channel(cfg, scenario, uplink_frequency), synthesize_channel(cfg, scenario, downlink_frequency)};
}

} // namespace scnet
