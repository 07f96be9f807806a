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
#include <string>
#include <vector>

#include <json.hpp>

#include "dragonfly/pipeline.hpp"
#include "dragonfly/scenario.hpp"

namespace dragonfly {

/// Names accepted by run_demo.
const std::vector<std::string>& demo_names();

/// Smooth random flight around (7 m, 10 deg, 3 deg): piecewise-constant
/// acceleration legs, speed at most 3 m/s. Noise floor 0 dBm.
Scenario drone_scenario(std::uint64_t seed, std::size_t cycles, double snr_db);

/// Radial motion at constant speed from `start_range` along (azimuth, elevation).
Scenario radial_velocity_scenario(double speed, double start_range, double azimuth, double elevation,
                                  double duration, std::optional<double> snr_db);

/// Radial motion from rest with constant acceleration.
Scenario radial_acceleration_scenario(double accel, double start_range, double azimuth, double elevation,
                                      double duration, std::optional<double> snr_db);

/// Four tags at 200, 300, 400 and 500 kHz, each on its own straight path.
Scenario multitag_scenario(double duration, std::optional<double> snr_db);

/// Writes detections.csv, elevation.csv, track.csv, truth.csv and report.json
/// under out_dir; returns the report.
nlohmann::json write_run_outputs(const std::string& out_dir, const Scenario& scenario, const PipelineResult& result);

/// Summary of one run: error statistics plus per-tag counters.
nlohmann::json run_report(const Scenario& scenario, const PipelineResult& result);

/// Runs a built-in demo and writes its outputs; throws std::invalid_argument for an unknown name.
nlohmann::json run_demo(const std::string& name, std::uint64_t seed, const std::string& out_dir);

}  // namespace dragonfly
