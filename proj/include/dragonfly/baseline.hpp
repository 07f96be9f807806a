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

#include <complex>
#include <cstddef>
#include <vector>

#include "dragonfly/if_frame.hpp"
#include "dragonfly/options.hpp"
#include "dragonfly/radar_config.hpp"

namespace dragonfly {

/// Slow-time spectrum of one Tx channel's chirps on Rx channel 0.
///
/// Doppler bins are centred: bin d is (d - n_doppler/2) / (n_doppler * chirp_interval) Hz.
struct RangeDopplerMap {
    std::size_t n_doppler = 0;
    std::size_t n_range = 0;        // range bins kept, from bin 0
    std::size_t range_fft_len = 0;
    double sample_rate = 0.0;
    double chirp_interval = 0.0;    // s between chirps of the selected Tx channel
    std::vector<std::complex<double>> data; // [d * n_range + r]

    const std::complex<double>& at(std::size_t d, std::size_t r) const { return data[d * n_range + r]; }
    double doppler_hz(double d) const
    {
        return (d - 0.5 * static_cast<double>(n_doppler)) / (static_cast<double>(n_doppler) * chirp_interval);
    }
    double doppler_bin_hz() const { return 1.0 / (static_cast<double>(n_doppler) * chirp_interval); }
    double range_bin_hz() const { return sample_rate / static_cast<double>(range_fft_len); }
};

/// Uses the first n_chirps frames whose tx_channel matches `tx`. Fast time is
/// Hann windowed and zero padded to cfg.range_fft_len; slow time is Hann
/// windowed without padding. Range bins beyond max_range_m are dropped.
/// Throws std::invalid_argument when there are too few frames.
RangeDopplerMap range_doppler_map(const RadarConfig& cfg, const std::vector<IfFrame>& frames, std::size_t n_chirps,
                                  int tx = 0, double max_range_m = 60.0);

struct SlowTimePeak {
    double range = 0.0;               // m
    double apparent_frequency = 0.0;  // Hz
    std::size_t range_bin = 0;
    std::size_t doppler_bin = 0;
    double power = 0.0;
};

/// Strongest cell with Doppler in [f_m - window_hz, f_m + window_hz] and range
/// bin >= min_range_bin; quadratic interpolation on both axes. Throws
/// NoTagDetected when the window holds no energy.
SlowTimePeak slow_time_localize(const RadarConfig& cfg, const RangeDopplerMap& map, double f_m, double window_hz,
                                std::size_t min_range_bin = 2);

}  // namespace dragonfly
