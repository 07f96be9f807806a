// SPDX-License-Identifier: Apache-2.0
//
// dragonfly-sim: TDM-MIMO FMCW radar simulator and backscatter tag localizer
// Copyright (C) 2026 The dragonfly-sim authors
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

#include <cstdint>
#include <vector>

#include "dragonfly/if_frame.hpp"
#include "dragonfly/radar_config.hpp"
#include "dragonfly/scenario.hpp"
#include "dragonfly/spectrum.hpp"

namespace dragonfly {

/// Ground-truth IF phases of one tag on Rx channel 0 at the start of chirp k.
struct TagIfPhases {
    double psi_plus = 0.0;  // phase of the f_m + f_b component
    double psi_minus = 0.0; // phase of the f_m - f_b component
    double f_b = 0.0;
    double f_m = 0.0;       // instantaneous modulation frequency (drift included)
    double phi_m = 0.0;     // modulation phase, mod 2 pi
    double phi_geo = 0.0;   // propagation + Tx elevation phase, mod 2 pi
    double rx_step = 0.0;   // per-channel spatial phase along the Rx array
    double range = 0.0;
    double t_start = 0.0;
};

/// Stop-and-go phases; spikes and jitter are not included.
TagIfPhases tag_if_phases(const RadarConfig& cfg, const TagScenario& tag, long k);

/// Amplitude calibration shared by every chirp of a scenario.
struct Calibration {
    double noise_sigma = 0.0;     // per-sample standard deviation (0 when noiseless)
    double reference_amp = 0.0;   // tag amplitude giving the configured SNR at the reference range
};

Calibration calibrate(const Scenario& scenario);

/// Per-chirp noise seed derived from the scenario seed.
std::uint64_t chirp_seed(std::uint64_t seed, long k);

IfFrame synth_chirp(const RadarConfig& cfg, const Scenario& scenario, long k, std::uint64_t noise_seed,
                    Exec exec = Exec::parallel);

/// Frames 0 .. n_chirps-1 with seeds chirp_seed(seed, k); parallel over chirps.
std::vector<IfFrame> synth_sequence(const RadarConfig& cfg, const Scenario& scenario, std::size_t n_chirps,
                                    std::uint64_t seed, Exec exec = Exec::parallel);

/// Frames first .. first+count-1 of the same sequence.
std::vector<IfFrame> synth_batch(const RadarConfig& cfg, const Scenario& scenario, long first, std::size_t count,
                                 std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace dragonfly
