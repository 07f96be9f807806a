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

#include "dragonfly/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dragonfly/phase.hpp"

namespace dragonfly {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Vec3 track_position(double range, double azimuth, double elevation)
{
    return to_cartesian(Spherical{range, azimuth, elevation});
}

std::vector<TrackPoint> assemble_track(const std::vector<Detection>& detections, const PhaseSeries& series)
{
    std::vector<TrackPoint> out;
    out.reserve(detections.size());
    for (const auto& d : detections) {
        TrackPoint p;
        p.k = d.k;
        p.t = d.t_start;
        p.tag_id = d.tag_id;
        p.range = d.range;
        const PhaseRecord* rec = series.find(d.k + 1);
        if (rec != nullptr && rec->ref_k == d.k && rec->valid) {
            p.elevation = rec->elevation;
            const double c = std::cos(p.elevation);
            const double s = d.direction_cosine / c;
            if (std::abs(s) < 1.0) {
                p.azimuth = std::asin(s);
                p.valid = true;
            }
        }
        if (p.valid) {
            const Vec3 xyz = track_position(p.range, p.azimuth, p.elevation);
            p.x = xyz.x();
            p.y = xyz.y();
            p.z = xyz.z();
        } else {
            p.azimuth = d.azimuth;
            p.elevation = p.x = p.y = p.z = kNaN;
        }
        out.push_back(p);
    }
    return out;
}

double default_channel_spacing(const RadarConfig& cfg) { return 1.1 / cfg.chirp_time; }

std::size_t channel_capacity(double band_lo_hz, double band_hi_hz, double spacing_hz)
{
    if (!(spacing_hz > 0.0) || !(band_hi_hz > band_lo_hz)) return 0;
    return static_cast<std::size_t>(std::floor((band_hi_hz - band_lo_hz) / spacing_hz));
}

ChannelizeResult channelize(const RadarConfig& cfg, const std::vector<TagChannel>& channels,
                            const std::vector<PairObservation>& pairs, double band_lo_hz, double band_hi_hz)
{
    ChannelizeResult res;
    res.capacity = channel_capacity(band_lo_hz, band_hi_hz, default_channel_spacing(cfg));

    // Acceptance radius per channel.
    std::vector<double> tol(channels.size());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        double guard = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < channels.size(); ++j)
            if (j != i) guard = std::min(guard, 0.5 * std::abs(channels[i].f_m - channels[j].f_m));
        tol[i] = std::min(guard, channels[i].half_width);
    }
    const double same_pair_hz = cfg.sample_rate / static_cast<double>(cfg.range_fft_len);

    std::vector<std::vector<std::size_t>> per_channel(channels.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double c = pairs[p].pair.center();
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < channels.size(); ++i)
            if (std::abs(c - channels[i].f_m) <= tol[i]) hits.push_back(i);
        if (hits.empty()) {
            ++res.unassigned;
            continue;
        }
        if (hits.size() > 1) {
            ++res.collisions;
            continue;
        }
        auto& bucket = per_channel[hits.front()];
        const bool seen = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t q) {
            return std::abs(pairs[q].pair.f_plus - pairs[p].pair.f_plus) <= same_pair_hz &&
                   std::abs(pairs[q].pair.f_minus - pairs[p].pair.f_minus) <= same_pair_hz;
        });
        if (seen) {
            ++res.duplicates;
            continue;
        }
        bucket.push_back(p);
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (per_channel[i].size() > 1) {
            // Two different pairs claim one tag: neither can be trusted.
            res.collisions += per_channel[i].size();
            continue;
        }
        if (!per_channel[i].empty()) res.routed[channels[i].tag_id] = per_channel[i];
    }
    return res;
}

ErrorStats error_stats(std::vector<double> v)
{
    ErrorStats s;
    if (v.empty()) {
        s.median = s.p90 = s.mean = kNaN;
        s.cdf.fill(kNaN);
        return s;
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    auto rank = [&](double q) {
        const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
        return v[std::clamp<std::size_t>(r, 1, n) - 1];
    };
    s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    s.p90 = rank(0.9);
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    s.cdf[0] = v.front();
    for (std::size_t i = 1; i <= 100; ++i) s.cdf[i] = rank(static_cast<double>(i) / 100.0);
    return s;
}

ErrorReport error_report(const std::vector<TrackPoint>& track, const std::vector<TruthPoint>& truth)
{
    std::map<int, std::vector<const TruthPoint*>> by_tag;
    for (const auto& t : truth) by_tag[t.tag_id].push_back(&t);
    for (auto& [id, v] : by_tag)
        std::stable_sort(v.begin(), v.end(), [](const TruthPoint* a, const TruthPoint* b) { return a->t < b->t; });

    ErrorReport r;
    for (const auto& p : track) {
        if (!p.valid) {
            ++r.invalid;
            continue;
        }
        auto it = by_tag.find(p.tag_id);
        if (it == by_tag.end() || it->second.empty()) {
            ++r.invalid;
            continue;
        }
        const auto& v = it->second;
        if (p.t < v.front()->t - 1e-12 || p.t > v.back()->t + 1e-12) {
            ++r.invalid;
            continue;
        }
        auto hi = std::lower_bound(v.begin(), v.end(), p.t, [](const TruthPoint* a, double t) { return a->t < t; });
        Vec3 ref;
        if (hi == v.end()) {
            ref = v.back()->position;
        } else if (hi == v.begin() || (*hi)->t == p.t) {
            ref = (*hi)->position;
        } else {
            const TruthPoint* b = *hi;
            const TruthPoint* a = *(hi - 1);
            const double w = (p.t - a->t) / (b->t - a->t);
            ref = (1.0 - w) * a->position + w * b->position;
        }
        const Vec3 est(p.x, p.y, p.z);
        const Spherical s = to_spherical(ref);
        r.ex.push_back(std::abs(est.x() - ref.x()));
        r.ey.push_back(std::abs(est.y() - ref.y()));
        r.ez.push_back(std::abs(est.z() - ref.z()));
        r.e3d.push_back((est - ref).norm());
        r.e_range.push_back(std::abs(p.range - s.range));
        r.e_azimuth.push_back(std::abs(rad2deg(wrap_to_pi(p.azimuth - s.azimuth))));
        r.e_elevation.push_back(std::abs(rad2deg(p.elevation - s.elevation)));
        ++r.samples;
    }
    r.x = error_stats(r.ex);
    r.y = error_stats(r.ey);
    r.z = error_stats(r.ez);
    r.d3 = error_stats(r.e3d);
    r.range = error_stats(r.e_range);
    r.azimuth = error_stats(r.e_azimuth);
    r.elevation = error_stats(r.e_elevation);
    return r;
}

std::vector<TruthPoint> sample_truth(const Scenario& scenario, const std::vector<double>& times)
{
    std::vector<TruthPoint> out;
    out.reserve(times.size() * scenario.tags.size());
    for (const auto& tag : scenario.tags)
        for (double t : times)
            if (tag.trajectory.defined_at(t)) out.push_back({t, tag.tag_id, tag.trajectory.position(t)});
    return out;
}

std::vector<TruthPoint> scenario_truth(const Scenario& scenario)
{
    std::vector<double> times(scenario.chirp_count());
    for (std::size_t k = 0; k < times.size(); ++k)
        times[k] = static_cast<double>(k) * scenario.radar.tx_period;
    return sample_truth(scenario, times);
}

nlohmann::json to_json(const ErrorStats& s)
{
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    nlohmann::json cdf = nlohmann::json::array();
    for (double c : s.cdf) cdf.push_back(num(c));
    return {{"median", num(s.median)}, {"p90", num(s.p90)}, {"mean", num(s.mean)}, {"cdf", cdf}};
}

nlohmann::json to_json(const ErrorReport& r)
{
    return {{"samples", r.samples},
            {"invalid", r.invalid},
            {"x_m", to_json(r.x)},
            {"y_m", to_json(r.y)},
            {"z_m", to_json(r.z)},
            {"error_3d_m", to_json(r.d3)},
            {"range_m", to_json(r.range)},
            {"azimuth_deg", to_json(r.azimuth)},
            {"elevation_deg", to_json(r.elevation)}};
}

}  // namespace dragonfly
