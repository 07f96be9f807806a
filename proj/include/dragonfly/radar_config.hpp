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

#include <json.hpp>

namespace dragonfly {

/**
 * Radar constants shared by every stage of the pipeline.
 *
 * Units: Hz, s, m, dBm and dB. The struct is a plain aggregate; call
 * validate() (or load it through radar_from_json) before handing it to the
 * synthesizer or the localizer.
 */
struct RadarConfig {
    double f0 = 0.0;                  // chirp start frequency (Hz)
    double bandwidth = 0.0;           // RF sweep (Hz)
    double chirp_time = 0.0;          // duration of one chirp (s)
    double sample_rate = 0.0;         // ADC rate (samples/s)
    std::size_t samples_per_chirp = 0;
    std::size_t n_rx = 0;
    double d_rx = 0.0;                // horizontal Rx spacing (m)
    std::size_t n_tx = 0;
    double d_tx = 0.0;                // vertical Tx spacing (m)
    double tx_period = 0.0;           // start-to-start time between consecutive Tx chirps (s)
    std::size_t range_fft_len = 0;
    std::size_t angle_fft_len = 0;
    double eirp = 0.0;                // dBm
    double clutter_suppression = 0.0; // cross-polarization attenuation of co-polarized clutter (dB)

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    bool operator==(const RadarConfig&) const = default;
};

/// 24 GHz, 8 Rx at lambda/2, 2 Tx at 2 lambda, 3.4 ms chirps, 6.8 ms Tx period.
RadarConfig default_radar();

double wavelength(const RadarConfig& cfg);
double chirp_slope(const RadarConfig& cfg);
double beat_frequency(const RadarConfig& cfg, double range_m);
double range_from_beat(const RadarConfig& cfg, double beat_hz);
double range_resolution(const RadarConfig& cfg);
double max_unambiguous_range(const RadarConfig& cfg);
double doppler_frequency(const RadarConfig& cfg, double radial_velocity);
double velocity_ambiguity(const RadarConfig& cfg);
double max_acceleration(const RadarConfig& cfg);

/// Time of the fast-time window centre, (samples_per_chirp - 1) / (2 f_S).
double mid_chirp_time(const RadarConfig& cfg);
/// Instantaneous RF frequency at mid_chirp_time().
double mid_chirp_frequency(const RadarConfig& cfg);

RadarConfig radar_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RadarConfig& cfg);

}  // namespace dragonfly
