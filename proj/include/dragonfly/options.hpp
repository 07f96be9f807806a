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

#include <cstddef>
#include <functional>

#include <json.hpp>

namespace dragonfly {

enum class WindowKind { hann, rectangular };

/// Peak detection and pairing knobs for the per-chirp 2D localizer.
struct DetectorOptions {
    WindowKind window = WindowKind::hann;
    double max_range_m = 60.0;        // sets the search half-width around f_m
    double snr_threshold_db = 10.0;   // above the band median level
    double pair_tolerance_bins = 2.0; // midpoint vs f_m, in zero-padded range bins
    double ambiguity_margin_db = 6.0; // a disjoint pair this close to the best one is ambiguous
    bool mirror_average = false;      // average +u and -u peaks for azimuth
};

enum class TrajectoryPrior { range_rate, min_speed, custom };

struct PriorContext;

/// Elevation tracker knobs. Kalman noise figures are per measurement.
struct ElevationOptions {
    TrajectoryPrior prior = TrajectoryPrior::range_rate;
    std::size_t prior_window = 32;
    bool accel_compensation = true;
    bool exception_handler = true;
    double accel_threshold_fraction = 0.9;
    double sigma_accel_fraction = 1.0 / 3.0; // process noise sigma, relative to a_max
    double sigma_beta_rad = 0.1;
    double sigma_delta_rad = 0.1;
    double sigma_elevation_accel = 1.0;      // rad/s^2, elevation filter process noise
    double outlier_nis = 13.8;
    std::size_t kf_warmup = 4;
    /// Returns 0 to keep the first trajectory, 1 for the pi-shifted one.
    std::function<int(const PriorContext&)> custom_prior;
};

struct PipelineOptions {
    DetectorOptions detector;
    ElevationOptions elevation;
    std::size_t batch_size = 64;
    bool parallel = true;
};

DetectorOptions detector_options_from_json(const nlohmann::json& j, const std::string& path);
ElevationOptions elevation_options_from_json(const nlohmann::json& j, const std::string& path);
PipelineOptions pipeline_options_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json to_json(const PipelineOptions& o);

}  // namespace dragonfly
