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
#include <random>

#include "dragonfly/demos.hpp"
#include "dragonfly/phase.hpp"
#include "dragonfly/pipeline.hpp"
#include "dragonfly/tracker.hpp"

using namespace dragonfly;

namespace {

std::vector<TruthPoint> line_truth(int tag, std::size_t n)
{
    std::vector<TruthPoint> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({0.01 * double(i), tag, Vec3(5.0 + 0.02 * double(i), 1.0 - 0.01 * double(i), 0.3)});
    return out;
}

std::vector<TrackPoint> as_track(const std::vector<TruthPoint>& truth, const Vec3& offset)
{
    std::vector<TrackPoint> out;
    long k = 0;
    for (const auto& t : truth) {
        const Vec3 p = t.position + offset;
        const auto s = to_spherical(p);
        out.push_back({k++, t.t, t.tag_id, s.range, s.azimuth, s.elevation, p.x(), p.y(), p.z(), true});
    }
    return out;
}

}  // namespace

TEST_SUITE("tracker")
{
    TEST_CASE("spherical to cartesian")
    {
        const Vec3 a = track_position(7.0, 0.0, 0.0);
        CHECK(a.x() == doctest::Approx(7.0));
        CHECK(a.y() == 0.0);
        CHECK(a.z() == 0.0);
        const Vec3 b = track_position(10.0, deg2rad(30.0), 0.0);
        CHECK(b.x() == doctest::Approx(8.660254037844387));
        CHECK(b.y() == doctest::Approx(5.0));
        CHECK(b.z() == doctest::Approx(0.0));
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double r = 2.0 + 20.0 * std::abs(u(rng)), az = 1.2 * u(rng), el = 0.5 * u(rng);
            const auto s = to_spherical(track_position(r, az, el));
            CHECK(s.range == doctest::Approx(r));
            CHECK(s.azimuth == doctest::Approx(az));
            CHECK(s.elevation == doctest::Approx(el));
        }
    }

    TEST_CASE("missing elevation leaves the point invalid")
    {
        std::vector<Detection> dets(4);
        for (int k = 0; k < 4; ++k) {
            dets[k].k = k;
            dets[k].range = 5.0;
            dets[k].tag_id = 3;
        }
        PhaseSeries s;
        PhaseRecord r;
        r.k = 3;
        r.ref_k = 2;
        r.elevation = deg2rad(4.0);
        r.valid = true;
        s.records.push_back(r);
        const auto tr = assemble_track(dets, s);
        REQUIRE(tr.size() == 4);
        CHECK_FALSE(tr[1].valid);
        CHECK(std::isnan(tr[1].elevation));
        CHECK(tr[2].valid);
        CHECK(rad2deg(tr[2].elevation) == doctest::Approx(4.0));
        CHECK(tr[2].tag_id == 3);
        CHECK(Vec3(tr[2].x, tr[2].y, tr[2].z).norm() == doctest::Approx(5.0));
    }

    TEST_CASE("channel capacity")
    {
        const auto cfg = default_radar();
        CHECK(default_channel_spacing(cfg) == doctest::Approx(323.5294117647059));
        const auto cap = channel_capacity(100e3, 600e3, default_channel_spacing(cfg));
        CHECK(cap == 1545);
        CHECK(std::abs(double(cap) - 1500.0) / 1500.0 < 0.05);
        CHECK(channel_capacity(100e3, 600e3, 330.0) == 1515);
    }

    TEST_CASE("single tag routing is the identity")
    {
        const auto cfg = default_radar();
        const DetectorOptions opt;
        const std::vector<TagChannel> ch{make_channel(cfg, 7, 250e3, opt)};
        PairObservation p;
        p.pair.f_plus = 253e3;
        p.pair.f_minus = 247e3;
        p.found_by = 0;
        const auto r = channelize(cfg, ch, {p});
        REQUIRE(r.routed.count(7) == 1);
        CHECK(r.routed.at(7) == std::vector<std::size_t>{0});
        CHECK(r.collisions == 0);
        CHECK(r.unassigned == 0);
    }

    TEST_CASE("pairs far from every channel are unassigned")
    {
        const auto cfg = default_radar();
        const DetectorOptions opt;
        const std::vector<TagChannel> ch{make_channel(cfg, 1, 200e3, opt), make_channel(cfg, 2, 400e3, opt)};
        PairObservation p;
        p.pair.f_plus = 301e3;
        p.pair.f_minus = 299e3;
        const auto r = channelize(cfg, ch, {p});
        CHECK(r.routed.empty());
        CHECK(r.unassigned == 1);
    }

    TEST_CASE("four simultaneous tags give four clean streams")
    {
        const auto s = multitag_scenario(0.2, std::nullopt);
        const auto res = run_scenario(s, 1);
        REQUIRE(res.tags.size() == 4);
        CHECK(res.collisions == 0);
        for (const auto& t : res.tags) {
            CHECK(t.detections.size() == res.frames);
            for (const auto& d : t.detections) CHECK(d.tag_id == t.tag_id);
        }
    }

    TEST_CASE("error report: identical track and truth give zeros")
    {
        const auto truth = line_truth(1, 50);
        const auto rep = error_report(as_track(truth, Vec3::Zero()), truth);
        CHECK(rep.samples == 50);
        CHECK(rep.d3.median == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(rep.d3.p90 < 1e-12);
        CHECK(rep.elevation.mean < 1e-9);
    }

    TEST_CASE("error report: constant 12 cm offset")
    {
        const auto truth = line_truth(1, 51);
        const auto rep = error_report(as_track(truth, Vec3(0, 0.12, 0)), truth);
        CHECK(rep.d3.median == doctest::Approx(0.12));
        CHECK(rep.y.median == doctest::Approx(0.12));
        CHECK(rep.x.median == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("error report interpolates truth and skips invalid points")
    {
        const std::vector<TruthPoint> truth{{0.0, 1, Vec3(5, 0, 0)}, {1.0, 1, Vec3(7, 0, 0)}};
        std::vector<TrackPoint> track(3);
        track[0] = {0, 0.5, 1, 6.0, 0.0, 0.0, 6.0, 0.0, 0.0, true};
        track[1] = {1, 0.6, 1, 6.0, 0.0, std::nan(""), 0.0, 0.0, 0.0, false};
        track[2] = {2, 2.0, 1, 6.0, 0.0, 0.0, 6.0, 0.0, 0.0, true};
        const auto rep = error_report(track, truth);
        CHECK(rep.samples == 1);
        CHECK(rep.invalid == 2);
        CHECK(rep.d3.median == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("error statistics and CDF")
    {
        std::vector<double> v;
        for (int i = 1; i <= 100; ++i) v.push_back(double(101 - i));
        const auto s = error_stats(v);
        CHECK(s.median == doctest::Approx(50.5));
        CHECK(s.mean == doctest::Approx(50.5));
        CHECK(s.p90 == doctest::Approx(90.0));
        CHECK(s.cdf[0] == doctest::Approx(1.0));
        CHECK(s.cdf[100] == doctest::Approx(100.0));
        for (std::size_t i = 1; i < s.cdf.size(); ++i) CHECK(s.cdf[i] >= s.cdf[i - 1]);
        CHECK(error_stats({3.0, 1.0, 2.0}).median == doctest::Approx(2.0));
    }

    TEST_CASE("scenario truth follows the trajectory")
    {
        auto s = radial_velocity_scenario(1.0, 5.0, 0.0, 0.0, 0.1, std::nullopt);
        const auto truth = scenario_truth(s);
        REQUIRE(truth.size() == s.chirp_count());
        CHECK(truth[10].position.x() == doctest::Approx(5.0 + 10 * s.radar.tx_period));
    }
}
