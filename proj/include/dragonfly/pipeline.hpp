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
#include <cstdint>
#include <map>
#include <vector>

#include "dragonfly/chirp2d.hpp"
#include "dragonfly/elevation.hpp"
#include "dragonfly/if_frame.hpp"
#include "dragonfly/options.hpp"
#include "dragonfly/scenario.hpp"
#include "dragonfly/tracker.hpp"

namespace dragonfly {

struct TagResult {
    int tag_id = 0;
    double f_m = 0.0;
    std::vector<Detection> detections;
    PhaseSeries series;
    std::vector<TrackPoint> track;
    std::size_t no_tag = 0;
    std::size_t ambiguous = 0;
    std::size_t rejected = 0;
};

struct PipelineResult {
    std::vector<TagResult> tags;
    std::size_t frames = 0;
    std::size_t collisions = 0;
    std::size_t unassigned = 0;
    std::size_t capacity = 0;

    std::vector<Detection> all_detections() const;
    std::vector<TrackPoint> all_track_points() const;
};

/// Radial phase of a detection, taken from the window-centre peak phases.
double pipeline_radial_phase(const Detection& d);

/**
 * Streaming localizer. Frames of a batch are localized in parallel; results
 * are then fed to each tag's elevation tracker in chirp order. Batches must
 * arrive in increasing k.
 */
class Pipeline {
public:
    Pipeline(const RadarConfig& cfg, std::vector<TagChannel> channels, PipelineOptions opt);

    void process(const std::vector<IfFrame>& batch);
    PipelineResult finish();

    const std::vector<TagChannel>& channels() const { return channels_; }

private:
    RadarConfig cfg_;
    std::vector<TagChannel> channels_;
    PipelineOptions opt_;
    std::vector<ElevationTracker> trackers_;
    PipelineResult result_;
    long last_k_ = -1;
};

/// One channel per tag whose modulation is intra-chirp.
std::vector<TagChannel> scenario_channels(const Scenario& scenario);

/// Synthesizes the scenario in batches and localizes it.
PipelineResult run_scenario(const Scenario& scenario, std::uint64_t seed);

/// Localizes frames already in memory.
PipelineResult run_frames(const Scenario& scenario, const std::vector<IfFrame>& frames);

}  // namespace dragonfly
