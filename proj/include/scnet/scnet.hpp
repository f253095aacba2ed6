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

// Umbrella header.

#include "scnet/error.hpp"
#include "scnet/random.hpp"
#include "scnet/channel_model.hpp"
#include "scnet/estimation.hpp"
#include "scnet/dataset.hpp"
#include "scnet/packing.hpp"
#include "scnet/real_network.hpp"
#include "scnet/cvnn.hpp"
#include "scnet/metrics.hpp"
#include "scnet/optim.hpp"
#include "scnet/baseline_fnn.hpp"
#include "scnet/sweep.hpp"
#include "scnet/config.hpp"
