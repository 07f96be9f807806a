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

#include <doctest.h>

#include <cmath>

#include "dragonfly/baseline.hpp"
#include "dragonfly/chirp2d.hpp"
#include "dragonfly/phase.hpp"
#include "dragonfly/synth.hpp"
#include "oracles.hpp"

using namespace dragonfly;

namespace {

constexpr std::size_t kChirps = 256;

RadarConfig short_chirp_radar()
{
    RadarConfig br = default_radar();
    br.chirp_time = 256e-6;
    br.sample_rate = 1e6;
    br.samples_per_chirp = 256;
    br.tx_period = 256e-6;
    br.range_fft_len = 1024;
    return br;
}

TagScenario slow_tag(int id, double f_m, const Vec3& p0, double speed)
{
    TagScenario t;
    t.tag_id = id;
    t.f_m = f_m;
    t.modulation_mode = ModulationMode::slow_time;
    const Vec3 u = p0.normalized();
    t.trajectory = Trajectory::constant_velocity(p0, {{1.0, speed * u}});
    return t;
}

RangeDopplerMap map_of(const Scenario& s)
{
    const auto frames = synth_sequence(s.radar, s, 2 * kChirps, 5);
    return range_doppler_map(s.radar, frames, kChirps, 0, 20.0);
}

Scenario scene(std::vector<TagScenario> tags)
{
    Scenario s;
    s.radar = short_chirp_radar();
    s.tags = std::move(tags);
    return s;
}

}  // namespace

TEST_SUITE("baseline")
{
    TEST_CASE("static slow-time tag peaks at f_m and its range")
    {
        const auto s = scene({slow_tag(1, 600.0, Vec3(6.0, 0.5, 0.0), 0.0)});
        const auto map = map_of(s);
        CHECK(map.n_doppler == kChirps);
        const auto pk = slow_time_localize(s.radar, map, 600.0, 250.0);
        CHECK(std::abs(pk.apparent_frequency - 600.0) <= map.doppler_bin_hz());
        CHECK(std::abs(pk.range - Vec3(6.0, 0.5, 0.0).norm()) <= range_resolution(s.radar));
    }

    TEST_CASE("static clutter stays in the zero-Doppler bin")
    {
        Scenario s = scene({});
        ClutterScatterer c;
        c.position = Vec3(8.0, 0.0, 0.0);
        s.clutter.push_back(c);
        const auto map = map_of(s);
        std::size_t best_d = 0;
        double best = -1.0;
        for (std::size_t d = 0; d < map.n_doppler; ++d)
            for (std::size_t r = 0; r < map.n_range; ++r)
                if (std::abs(map.at(d, r)) > best) {
                    best = std::abs(map.at(d, r));
                    best_d = d;
                }
        CHECK(map.doppler_hz(double(best_d)) == 0.0);
    }

    TEST_CASE("radial motion shifts the apparent modulation frequency by 2 v f0 / c")
    {
        for (double v : {1.0, 0.625}) {
            const auto s = scene({slow_tag(1, 600.0, Vec3(5.0, 0.4, 0.0), v)});
            const auto map = map_of(s);
            const auto pk = slow_time_localize(s.radar, map, 600.0, 250.0);
            const double expect = 2.0 * v * s.radar.f0 / oracle::c0;
            CHECK(std::abs(std::abs(pk.apparent_frequency - 600.0) - expect) <= map.doppler_bin_hz());
        }
    }

    TEST_CASE("two tags 160 Hz apart swap identities when one moves at 1 m/s")
    {
        const auto probe = scene({slow_tag(1, 600.0, Vec3(4.0, 0.0, 0.0), 1.0)});
        const double sign = slow_time_localize(probe.radar, map_of(probe), 600.0, 250.0).apparent_frequency > 600.0 ? 1.0 : -1.0;
        const double f_other = 600.0 + sign * 160.0;
        // The moving tag is the stronger one (nearer) and lands on the other tag's slot.
        const auto s = scene({slow_tag(1, 600.0, Vec3(4.0, 0.0, 0.0), 1.0), slow_tag(2, f_other, Vec3(12.0, 0.0, 0.0), 0.0)});
        const auto map = map_of(s);
        const auto pk = slow_time_localize(s.radar, map, f_other, 40.0);
        CHECK(std::abs(pk.range - 4.0) < 1.0);
    }

    TEST_CASE("window with no energy raises NoTagDetected")
    {
        const auto map = map_of(scene({}));
        CHECK_THROWS_AS(slow_time_localize(short_chirp_radar(), map, 600.0, 100.0), NoTagDetected);
    }

    TEST_CASE("too few chirps are rejected")
    {
        const auto s = scene({});
        const auto frames = synth_sequence(s.radar, s, 8, 1);
        CHECK_THROWS_AS(range_doppler_map(s.radar, frames, 16), std::invalid_argument);
    }
}
