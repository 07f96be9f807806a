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

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include <json.hpp>

#include "dragonfly/chirp2d.hpp"
#include "dragonfly/elevation.hpp"
#include "dragonfly/scenario.hpp"
#include "dragonfly/trajectory.hpp"

namespace dragonfly {

struct TrackPoint {
    long k = 0;
    double t = 0.0;
    int tag_id = 0;
    double range = 0.0;
    double azimuth = 0.0;   // rad
    double elevation = 0.0; // rad, NaN when invalid
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool valid = false;
};

/// Cartesian point from range, azimuth and elevation (x boresight, y left, z up).
Vec3 track_position(double range, double azimuth, double elevation);

/// Joins one tag's detections with its elevation series. The estimate finished
/// at chirp k+1 refers to chirp k. Points with no elevation are invalid.
std::vector<TrackPoint> assemble_track(const std::vector<Detection>& detections, const PhaseSeries& series);

/// Channel spacing assumed for capacity: 1.1 / T_C (one Hann-windowed bin plus margin).
double default_channel_spacing(const RadarConfig& cfg);

/// floor((band_hi - band_lo) / spacing).
std::size_t channel_capacity(double band_lo_hz, double band_hi_hz, double spacing_hz);

/// One peak pair seen in a frame, before routing to a tag.
struct PairObservation {
    PeakPair pair;
    int found_by = -1; // channel that searched it, or -1
};

struct ChannelizeResult {
    std::map<int, std::vector<std::size_t>> routed; // tag_id -> indices into the input
    std::size_t collisions = 0;  // pairs within tolerance of several channels
    std::size_t unassigned = 0;  // pairs near no channel
    std::size_t duplicates = 0;  // repeated sightings of an already routed pair
    std::size_t capacity = 0;
};

/**
 * Routes peak pairs to tags by nearest nominal f_m. A pair is accepted by a
 * channel when its centre lies within half the guard spacing to the nearest
 * neighbouring channel (and within the channel's half-width). Pairs that fall
 * inside two channels' tolerances are dropped and counted. Sightings of the
 * same pair from different searches are merged.
 */
ChannelizeResult channelize(const RadarConfig& cfg, const std::vector<TagChannel>& channels,
                            const std::vector<PairObservation>& pairs, double band_lo_hz = 100e3,
                            double band_hi_hz = 600e3);

struct ErrorStats {
    double median = 0.0;
    double p90 = 0.0;
    double mean = 0.0;
    std::array<double, 101> cdf{}; // value at each 1 % quantile (nearest rank)
};

/// Median (mean of the two middle values for even n) and nearest-rank quantiles.
ErrorStats error_stats(std::vector<double> values);

struct TruthPoint {
    double t = 0.0;
    int tag_id = 0;
    Vec3 position = Vec3::Zero();
};

struct ErrorReport {
    std::size_t samples = 0;
    std::size_t invalid = 0;
    std::vector<double> ex, ey, ez, e3d;      // m
    std::vector<double> e_range;              // m
    std::vector<double> e_azimuth, e_elevation; // deg
    ErrorStats x, y, z, d3, range, azimuth, elevation;
};

/// Truth is interpolated linearly in time per tag. Invalid points and points
/// outside the truth time span are counted but not scored.
ErrorReport error_report(const std::vector<TrackPoint>& track, const std::vector<TruthPoint>& truth);

/// Samples each tag's trajectory at the given times (for reports and CSV).
std::vector<TruthPoint> sample_truth(const Scenario& scenario, const std::vector<double>& times);

/// Truth at every chirp start of the scenario.
std::vector<TruthPoint> scenario_truth(const Scenario& scenario);

nlohmann::json to_json(const ErrorStats& s);
nlohmann::json to_json(const ErrorReport& r);

}  // namespace dragonfly
