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
#include <stdexcept>

#include "dragonfly/phase.hpp"
#include "dragonfly/radar_config.hpp"
#include "dragonfly/trajectory.hpp"

using namespace dragonfly;

namespace {

RadarConfig radar_at(double f0, double bandwidth, double chirp_time, double tx_period)
{
    RadarConfig cfg = default_radar();
    cfg.f0 = f0;
    cfg.bandwidth = bandwidth;
    cfg.chirp_time = chirp_time;
    cfg.tx_period = tx_period;
    return cfg;
}

}  // namespace

TEST_SUITE("core-model")
{
    TEST_CASE("wavelength")
    {
        CHECK(wavelength(radar_at(24e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.012491352416667).epsilon(1e-12));
        CHECK(wavelength(radar_at(kSpeedOfLight, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(wavelength(radar_at(299.792458e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.001).epsilon(1e-12));
    }

    TEST_CASE("chirp slope")
    {
        CHECK(chirp_slope(radar_at(24e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(73529411764.70589).epsilon(1e-12));
        CHECK(chirp_slope(radar_at(24e9, 0.0, 3.4e-3, 6.8e-3)) == 0.0);
        CHECK(chirp_slope(radar_at(24e9, 1e9, 1e-3, 6.8e-3)) == doctest::Approx(1e12));
    }

    TEST_CASE("beat frequency and its inverse")
    {
        const auto cfg = default_radar();
        CHECK(beat_frequency(cfg, 7.0) == doctest::Approx(3433.748038804507).epsilon(1e-12));
        CHECK(beat_frequency(cfg, 0.0) == 0.0);
        for (double r : {1.0, 10.0, 50.0}) CHECK(range_from_beat(cfg, beat_frequency(cfg, r)) == doctest::Approx(r).epsilon(1e-14));
        CHECK_THROWS_AS(beat_frequency(cfg, -1.0), std::domain_error);
    }

    TEST_CASE("range resolution")
    {
        CHECK(range_resolution(radar_at(24e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.599584916).epsilon(1e-12));
        CHECK(range_resolution(radar_at(24e9, 500e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.299792458).epsilon(1e-12));
        double prev = 1e9;
        for (double b = 1e8; b < 1e11; b *= 3.0) {
            const double r = range_resolution(radar_at(24e9, b, 3.4e-3, 6.8e-3));
            CHECK(r < prev);
            prev = r;
        }
    }

    TEST_CASE("maximum unambiguous range")
    {
        auto cfg = default_radar();
        CHECK(max_unambiguous_range(cfg) == doctest::Approx(1223.15322864).epsilon(1e-10));
        auto wide = cfg;
        wide.bandwidth *= 2.0;
        CHECK(max_unambiguous_range(wide) == doctest::Approx(0.5 * max_unambiguous_range(cfg)));
        cfg.chirp_time = 0.0;
        CHECK(max_unambiguous_range(cfg) == 0.0);
    }

    TEST_CASE("doppler frequency")
    {
        const auto cfg = default_radar();
        CHECK(doppler_frequency(cfg, 1.0) == doctest::Approx(160.11076569511297).epsilon(1e-12));
        CHECK(doppler_frequency(cfg, 0.0) == 0.0);
        CHECK(doppler_frequency(cfg, -1.0) == doctest::Approx(-160.11076569511297).epsilon(1e-12));
    }

    TEST_CASE("velocity ambiguity")
    {
        CHECK(velocity_ambiguity(radar_at(24e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.2296204488357843).epsilon(1e-12));
        CHECK(velocity_ambiguity(radar_at(24e9, 250e6, 3.4e-3, 3.4e-3)) ==
              doctest::Approx(2.0 * 0.2296204488357843).epsilon(1e-12));
        CHECK(velocity_ambiguity(radar_at(12e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.4592408976715686).epsilon(1e-12));
    }

    TEST_CASE("maximum acceleration")
    {
        const double a = max_acceleration(radar_at(24e9, 250e6, 3.4e-3, 6.8e-3));
        CHECK(a == doctest::Approx(16.883856532042966).epsilon(1e-12));
        CHECK(std::abs(a - 16.895) / 16.895 < 2e-3);
        CHECK(max_acceleration(radar_at(24e9, 250e6, 3.4e-3, 68e-3)) == doctest::Approx(0.16883856532042962).epsilon(1e-12));
        CHECK(max_acceleration(radar_at(48e9, 250e6, 3.4e-3, 6.8e-3)) == doctest::Approx(0.5 * a));
    }

    TEST_CASE("radar validation")
    {
        auto cfg = default_radar();
        CHECK_NOTHROW(cfg.validate());
        cfg.n_tx = 3;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = default_radar();
        cfg.samples_per_chirp = 8192;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = default_radar();
        cfg.tx_period = 1e-3;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }

    TEST_CASE("radar json round trip")
    {
        const auto cfg = default_radar();
        CHECK(radar_from_json(to_json(cfg)) == cfg);
    }

    TEST_CASE("phase wrapping helpers")
    {
        CHECK(wrap_mod(-0.5, kPi) == doctest::Approx(kPi - 0.5));
        CHECK(wrap_mod(3.0 * kPi, kTwoPi) == doctest::Approx(kPi));
        CHECK(wrap_to_pi(kPi + 0.25) == doctest::Approx(-kPi + 0.25));
        CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
    }

    TEST_CASE("spherical and cartesian conversions")
    {
        const Spherical s{7.5, deg2rad(20.0), deg2rad(-4.0)};
        const Spherical back = to_spherical(to_cartesian(s));
        CHECK(back.range == doctest::Approx(s.range));
        CHECK(back.azimuth == doctest::Approx(s.azimuth));
        CHECK(back.elevation == doctest::Approx(s.elevation));
    }

    TEST_CASE("trajectories")
    {
        const Vec3 p0(5.0, 1.0, 0.5);
        const auto cv = Trajectory::constant_velocity(p0, {{1.0, Vec3(1.0, 0.0, 0.0)}, {1.0, Vec3(0.0, 2.0, 0.0)}});
        CHECK((cv.position(1.5) - Vec3(6.0, 2.0, 0.5)).norm() < 1e-12);
        CHECK(cv.velocity(1.5).y() == doctest::Approx(2.0));
        CHECK_THROWS_AS(cv.position(2.5), std::domain_error);

        const auto ca = Trajectory::constant_acceleration(p0, Vec3::Zero(), {{2.0, Vec3(2.0, 0.0, 0.0)}});
        CHECK(ca.position(1.0).x() == doctest::Approx(6.0));
        CHECK(ca.velocity(1.0).x() == doctest::Approx(2.0));

        const auto wp = Trajectory::waypoints({{0.0, Vec3(1, 0, 0)}, {2.0, Vec3(3, 0, 0)}});
        CHECK(wp.position(1.0).x() == doctest::Approx(2.0));

        const auto radial = Trajectory::constant_velocity(Vec3(3, 4, 0), {{1.0, Vec3(0.6, 0.8, 0.0)}});
        CHECK(radial.radial_velocity(0.5) == doctest::Approx(1.0));

        const auto j = cv.to_json();
        const auto again = Trajectory::from_json(j, "trajectory");
        CHECK((again.position(1.2) - cv.position(1.2)).norm() < 1e-12);
    }
}
