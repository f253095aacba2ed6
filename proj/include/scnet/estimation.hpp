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

// Uplink CSI as seen by the base station after pilot-based estimation.
//
// Observation y = h + n with n ~ CN(0, sigma^2 I), sigma^2 = P_h / gamma and
// gamma = 10^(snr_db / 10). With a scalar prior of per-element power P_h the
// LMMSE estimate is the element-wise shrinkage gamma / (1 + gamma) * y.
// A full-covariance MMSE would replace the scalar shrinkage by
// R_h (R_h + sigma^2 I)^-1 and slot in here.

#include <cmath>
#include <complex>
#include <limits>

#include "scnet/channel_model.hpp"
#include "scnet/error.hpp"
#include "scnet/random.hpp"

namespace scnet {

struct EstimationConfig {
    double snr_db = 25.0;
    double channel_power = 1.0; // average per-element |h_m|^2
    bool perfect = false;       // bypass: return h unchanged

    void validate() const {
        if (!(channel_power > 0.0) || !std::isfinite(channel_power))
            throw InvalidParametersError("channel power must be positive and finite");
        if (std::isnan(snr_db)) throw InvalidParametersError("SNR must not be NaN");
    }

    bool noiseless() const noexcept { return perfect || snr_db == std::numeric_limits<double>::infinity(); }

    double linear_snr() const { return std::pow(10.0, snr_db / 10.0); }

    /// gamma / (1 + gamma); 1 in noiseless mode.
    double shrinkage() const {
        if (noiseless()) return 1.0;
        const double g = linear_snr();
        return g / (1.0 + g);
    }

    double noise_variance() const { return noiseless() ? 0.0 : channel_power / linear_snr(); }
};

inline ChannelVector estimate_uplink(const ChannelVector& h, const EstimationConfig& cfg, Rng& rng) {
    cfg.validate();
    if (cfg.noiseless()) return h;
    const double var = cfg.noise_variance();
    const double w = cfg.shrinkage();
    ChannelVector out{h.carrier_frequency, ComplexVector(h.coefficients.size())};
    for (Eigen::Index m = 0; m < h.size(); ++m) out.coefficients[m] = w * (h.coefficients[m] + rng.complex_normal(var));
    return out;
}

} // namespace scnet
