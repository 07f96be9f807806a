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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dragonfly/if_frame.hpp"
#include "dragonfly/options.hpp"
#include "dragonfly/radar_config.hpp"
#include "dragonfly/spectrum.hpp"

namespace dragonfly {

class NoTagDetected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AmbiguousPair : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tag's frequency slot: search f_m +- half_width.
struct TagChannel {
    int tag_id = 0;
    double f_m = 0.0;
    double half_width = 0.0;
};

TagChannel make_channel(const RadarConfig& cfg, int tag_id, double f_m, const DetectorOptions& opt);

/// Range-bin block [lo, hi) a channel's search needs, including interpolation guards.
std::pair<std::size_t, std::size_t> channel_bins(const RadarConfig& cfg, const TagChannel& ch);

struct PeakPair {
    double f_plus = 0.0;
    double f_minus = 0.0;
    /// Channel-0 phases referred to the chirp start.
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    /// Phases referred to the window centre (mid-chirp, array centre). These
    /// do not depend on the interpolated frequency or angle.
    double phi_plus_centroid = 0.0;
    double phi_minus_centroid = 0.0;
    double azimuth_bin_plus = 0.0;  // signed, interpolated
    double azimuth_bin_minus = 0.0;
    double snr_db_plus = 0.0;
    double snr_db_minus = 0.0;
    double noise_level = 0.0;       // band noise mean of |Y|^2

    double center() const { return 0.5 * (f_plus + f_minus); }
};

/// Throws NoTagDetected or AmbiguousPair.
PeakPair detect_tag_peaks(const RangeAzimuthSpectrum& spectrum, const TagChannel& channel,
                          const DetectorOptions& opt = {});

struct Detection {
    long k = 0;
    int tx_channel = 0;
    int tag_id = 0;
    double t_start = 0.0;
    double f_b = 0.0;
    double range = 0.0;
    double direction_cosine = 0.0; // along the Rx array
    double azimuth = 0.0;          // asin(direction_cosine); refined with elevation downstream
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double phi_plus_centroid = 0.0;
    double phi_minus_centroid = 0.0;
    double f_center = 0.0;
    double snr_db = 0.0;
};

/// Throws std::domain_error when the angular estimate leaves the visible region
/// or the peaks are in the wrong order.
Detection localize2d(const RadarConfig& cfg, const PeakPair& pair, long k, const DetectorOptions& opt = {});

enum class DetectStatus { ok, no_tag, ambiguous, rejected };

struct ChannelResult {
    int tag_id = 0;
    DetectStatus status = DetectStatus::no_tag;
    std::optional<PeakPair> pair;
    std::optional<Detection> detection;
    std::string message;
};

/// Runs every channel on one frame; the fast-time FFT is shared.
std::vector<ChannelResult> detect_frame(const RadarConfig& cfg, const IfFrame& frame,
                                        const std::vector<TagChannel>& channels, const DetectorOptions& opt,
                                        Exec exec = Exec::parallel);

/// Sub-bin peak offset of a 3-point quadratic fit through (-1, a), (0, b), (1, c).
double quadratic_peak_offset(double a, double b, double c);

}  // namespace dragonfly
