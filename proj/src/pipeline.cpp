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

#include "dragonfly/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

#include "dragonfly/synth.hpp"

namespace dragonfly {

std::vector<Detection> PipelineResult::all_detections() const
{
    std::vector<Detection> out;
    for (const auto& t : tags) out.insert(out.end(), t.detections.begin(), t.detections.end());
    std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) { return a.k < b.k; });
    return out;
}

std::vector<TrackPoint> PipelineResult::all_track_points() const
{
    std::vector<TrackPoint> out;
    for (const auto& t : tags) out.insert(out.end(), t.track.begin(), t.track.end());
    std::stable_sort(out.begin(), out.end(), [](const TrackPoint& a, const TrackPoint& b) { return a.k < b.k; });
    return out;
}

double pipeline_radial_phase(const Detection& d) { return radial_phase(d.phi_plus_centroid, d.phi_minus_centroid); }

Pipeline::Pipeline(const RadarConfig& cfg, std::vector<TagChannel> channels, PipelineOptions opt)
    : cfg_(cfg), channels_(std::move(channels)), opt_(std::move(opt))
{
    cfg_.validate();
    trackers_.reserve(channels_.size());
    for (const auto& ch : channels_) {
        trackers_.emplace_back(cfg_, opt_.elevation);
        TagResult t;
        t.tag_id = ch.tag_id;
        t.f_m = ch.f_m;
        result_.tags.push_back(std::move(t));
    }
}

void Pipeline::process(const std::vector<IfFrame>& batch)
{
    if (batch.empty()) return;
    for (const auto& f : batch) {
        if (f.k <= last_k_) throw std::invalid_argument("Pipeline: frames must arrive in increasing chirp order");
        last_k_ = f.k;
    }

    const auto n = static_cast<long>(batch.size());
    std::vector<std::vector<ChannelResult>> results(batch.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (opt_.parallel)
    for (long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] =
                detect_frame(cfg_, batch[static_cast<std::size_t>(i)], channels_, opt_.detector, Exec::parallel);
        } catch (...) {
#pragma omp critical(dragonfly_pipeline_error)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& res = results[i];
        std::vector<PairObservation> pairs;
        std::vector<std::size_t> owner;
        for (std::size_t c = 0; c < res.size(); ++c) {
            auto& tag = result_.tags[c];
            switch (res[c].status) {
            case DetectStatus::no_tag: ++tag.no_tag; break;
            case DetectStatus::ambiguous: ++tag.ambiguous; break;
            case DetectStatus::rejected: ++tag.rejected; break;
            case DetectStatus::ok:
                pairs.push_back({*res[c].pair, static_cast<int>(c)});
                owner.push_back(c);
                break;
            }
        }
        const auto routed = channelize(cfg_, channels_, pairs);
        result_.collisions += routed.collisions;
        result_.unassigned += routed.unassigned;
        result_.capacity = routed.capacity;
        for (std::size_t c = 0; c < channels_.size(); ++c) {
            auto it = routed.routed.find(channels_[c].tag_id);
            if (it == routed.routed.end()) continue;
            const std::size_t src = owner[it->second.front()];
            if (!res[src].detection) continue;
            Detection d = *res[src].detection;
            d.tag_id = channels_[c].tag_id;
            result_.tags[c].detections.push_back(d);
            trackers_[c].push(PhaseSample{d.k, d.t_start, pipeline_radial_phase(d), d.range});
        }
        ++result_.frames;
    }
}

PipelineResult Pipeline::finish()
{
    for (std::size_t c = 0; c < trackers_.size(); ++c) {
        auto& tag = result_.tags[c];
        tag.series = trackers_[c].finalize();
        tag.track = assemble_track(tag.detections, tag.series);
    }
    if (result_.capacity == 0) result_.capacity = channel_capacity(100e3, 600e3, default_channel_spacing(cfg_));
    return std::move(result_);
}

std::vector<TagChannel> scenario_channels(const Scenario& scenario)
{
    std::vector<TagChannel> out;
    for (const auto& t : scenario.tags)
        if (t.modulation_mode != ModulationMode::slow_time)
            out.push_back(make_channel(scenario.radar, t.tag_id, t.f_m, scenario.pipeline.detector));
    return out;
}

PipelineResult run_scenario(const Scenario& scenario, std::uint64_t seed)
{
    Pipeline p(scenario.radar, scenario_channels(scenario), scenario.pipeline);
    const std::size_t total = scenario.chirp_count();
    const std::size_t batch = scenario.pipeline.batch_size;
    const Exec exec = scenario.pipeline.parallel ? Exec::parallel : Exec::serial;
    for (std::size_t first = 0; first < total; first += batch) {
        const std::size_t count = std::min(batch, total - first);
        p.process(synth_batch(scenario.radar, scenario, static_cast<long>(first), count, seed, exec));
    }
    return p.finish();
}

PipelineResult run_frames(const Scenario& scenario, const std::vector<IfFrame>& frames)
{
    Pipeline p(scenario.radar, scenario_channels(scenario), scenario.pipeline);
    const std::size_t batch = scenario.pipeline.batch_size;
    for (std::size_t first = 0; first < frames.size(); first += batch) {
        const auto end = frames.begin() + static_cast<long>(std::min(frames.size(), first + batch));
        p.process(std::vector<IfFrame>(frames.begin() + static_cast<long>(first), end));
    }
    return p.finish();
}

}  // namespace dragonfly
