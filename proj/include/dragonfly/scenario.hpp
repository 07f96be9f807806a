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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dragonfly/options.hpp"
#include "dragonfly/radar_config.hpp"
#include "dragonfly/trajectory.hpp"

namespace dragonfly {

/// harmonic: two clean sidebands at f_m +- f_b.
/// square: band-limited 50 % duty square wave at f_m (odd harmonics).
/// slow_time: exact on/off gating, meant for low f_m (hundreds of Hz).
enum class ModulationMode { harmonic, square, slow_time };

struct TagScenario {
    int tag_id = 0;
    double f_m = 250e3;
    double phi_m0 = 0.0;
    ModulationMode modulation_mode = ModulationMode::harmonic;
    double rcs = 0.01;
    /// (off-boresight angle in degrees, gain in dB); empty means isotropic.
    std::vector<std::pair<double, double>> rcs_gain_table;
    Trajectory trajectory;
    double oscillator_drift_ppm_per_s = 0.0;
    double phase_jitter_rad = 0.0;
    double nlos_attenuation_db = 0.0;
    std::vector<long> phase_spike_chirps;
    double phase_spike_rad = 3.14159265358979323846;
};

struct ClutterScatterer {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    double rcs = 1.0;
    bool co_polarized = true;
};

struct Scenario {
    RadarConfig radar = default_radar();
    std::vector<TagScenario> tags;
    std::vector<ClutterScatterer> clutter;
    /// Per-sample noise variance is 10^(dBm/10); unset means noiseless.
    std::optional<double> noise_floor_dbm;
    /// Peak 2D-spectrum SNR of a reference tag at reference_range_m.
    double snr_db = 20.0;
    double reference_range_m = 7.0;
    double reference_rcs = 0.01;
    double duration_s = 1.0;
    std::uint64_t seed = 0;
    std::string output_dir;
    PipelineOptions pipeline;

    std::size_t chirp_count() const;
};

ModulationMode modulation_from_string(const std::string& s);
std::string to_string(ModulationMode m);

/// `base_dir` resolves a radar given as a relative file path.
Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& s);

/// Gain in dB from a tag's table at an off-boresight angle (deg), linear in dB.
double table_gain_db(const std::vector<std::pair<double, double>>& table, double angle_deg);

}  // namespace dragonfly
