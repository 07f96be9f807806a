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

#include "dragonfly/chirp2d.hpp"
#include "dragonfly/phase.hpp"
#include "dragonfly/spectrum.hpp"
#include "dragonfly/synth.hpp"
#include "oracles.hpp"

using namespace dragonfly;

namespace {

IfFrame tone_frame(const RadarConfig& cfg, double freq, double mu, double phase0 = 0.3)
{
    IfFrame f(0, 0, 0.0, cfg.n_rx, cfg.samples_per_chirp);
    for (std::size_t n = 0; n < cfg.n_rx; ++n)
        for (std::size_t j = 0; j < cfg.samples_per_chirp; ++j)
            f.at(n, j) = static_cast<float>(
                std::cos(2.0 * oracle::pi * freq * double(j) / cfg.sample_rate + phase0 + mu * double(n)));
    return f;
}

Scenario tag_scene(const std::vector<std::pair<double, Vec3>>& tags)
{
    Scenario s;
    int id = 1;
    for (const auto& [fm, p] : tags) {
        TagScenario t;
        t.tag_id = id++;
        t.f_m = fm;
        t.trajectory = Trajectory::constant(p);
        s.tags.push_back(t);
    }
    return s;
}

}  // namespace

TEST_SUITE("chirp2d")
{
    TEST_CASE("zero frame gives a zero spectrum")
    {
        const auto cfg = oracle::small_radar();
        const IfFrame f(0, 0, 0.0, cfg.n_rx, cfg.samples_per_chirp);
        const auto s = range_azimuth_spectrum(cfg, f);
        for (const auto& v : s.data) CHECK(std::abs(v) == 0.0);
    }

    TEST_CASE("single tone with a channel phase ramp peaks at its frequency and angular bin")
    {
        const auto cfg = oracle::small_radar();
        const double f_bin = 40.3, u_bin = 5.2;
        const double freq = f_bin * cfg.sample_rate / double(cfg.samples_per_chirp);
        const double mu = 2.0 * oracle::pi * u_bin / double(cfg.angle_fft_len);
        const auto frame = tone_frame(cfg, freq, mu);
        const auto s = range_azimuth_spectrum(cfg, frame);

        std::size_t best_b = 0, best_u = 0;
        double best = -1.0;
        for (std::size_t b = s.bin_lo; b < s.bin_hi; ++b)
            for (std::size_t u = 0; u < s.angle_len; ++u)
                if (std::abs(s.at(u, b)) > best) {
                    best = std::abs(s.at(u, b));
                    best_b = b;
                    best_u = u;
                }
        const double pad = double(cfg.range_fft_len) / double(cfg.samples_per_chirp);
        CHECK(std::abs(double(best_b) - f_bin * pad) <= 1.0);
        CHECK(std::abs(s.signed_bin(double(best_u)) - u_bin) <= 1.0);

        const auto w = oracle::hann(cfg.samples_per_chirp);
        for (std::size_t b : {best_b, best_b + 3, std::size_t(17)})
            for (std::size_t u : {best_u, std::size_t(0), std::size_t(40)}) {
                const auto ref = oracle::dft_cell(frame, w, cfg.range_fft_len, cfg.angle_fft_len, double(b), double(u));
                CHECK(std::abs(s.at(u, b) - ref) <= 1e-9 * (1.0 + std::abs(ref)));
            }
    }

    TEST_CASE("Parseval: spectrum energy equals the windowed sample energy")
    {
        const auto cfg = oracle::small_radar();
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        IfFrame f(0, 0, 0.0, cfg.n_rx, cfg.samples_per_chirp);
        for (auto& v : f.samples) v = static_cast<float>(g(rng));
        for (auto win : {WindowKind::hann, WindowKind::rectangular}) {
            const auto s = range_azimuth_spectrum(cfg, f, win);
            CHECK(s.energy() == doctest::Approx(windowed_energy(f, win)).epsilon(1e-9));
        }
    }

    TEST_CASE("serial and parallel spectra agree")
    {
        const auto cfg = oracle::small_radar();
        const auto frame = tone_frame(cfg, 90e3, 0.7);
        const auto a = range_azimuth_spectrum(cfg, frame, WindowKind::hann, Exec::serial);
        const auto b = range_azimuth_spectrum(cfg, frame, WindowKind::hann, Exec::parallel);
        REQUIRE(a.data.size() == b.data.size());
        for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(std::abs(a.data[i] - b.data[i]) < 1e-9);
    }

    TEST_CASE("frame dimensions are checked")
    {
        const auto cfg = oracle::small_radar();
        const IfFrame f(0, 0, 0.0, cfg.n_rx - 1, cfg.samples_per_chirp);
        CHECK_THROWS_AS(range_azimuth_spectrum(cfg, f), std::invalid_argument);
    }

    TEST_CASE("static tag at 7 m: peak separation is twice the beat frequency")
    {
        const auto s = tag_scene({{250e3, Vec3(7.0, 0, 0)}});
        const auto frame = synth_chirp(s.radar, s, 0, 0);
        const DetectorOptions opt;
        const auto res = detect_frame(s.radar, frame, {make_channel(s.radar, 1, 250e3, opt)}, opt);
        REQUIRE(res.size() == 1);
        REQUIRE(res[0].status == DetectStatus::ok);
        CHECK(res[0].pair->f_plus - res[0].pair->f_minus == doctest::Approx(2.0 * 3433.748038804507).epsilon(3e-4));
        CHECK(res[0].detection->range == doctest::Approx(7.0).epsilon(3e-4));
    }

    TEST_CASE("pure noise raises NoTagDetected")
    {
        Scenario s;
        s.noise_floor_dbm = 0.0;
        const auto frame = synth_chirp(s.radar, s, 0, 17);
        const DetectorOptions opt;
        const auto ch = make_channel(s.radar, 1, 250e3, opt);
        const auto spectra = range_spectra(s.radar, frame, opt.window);
        const auto [lo, hi] = channel_bins(s.radar, ch);
        const auto block = angle_spectrum(s.radar, spectra, lo, hi);
        CHECK_THROWS_AS(detect_tag_peaks(block, ch, opt), NoTagDetected);
        CHECK(detect_frame(s.radar, frame, {ch}, opt)[0].status == DetectStatus::no_tag);
    }

    TEST_CASE("two tags 100 kHz apart are recovered independently")
    {
        const auto s = tag_scene({{200e3, Vec3(5.0, 1.0, 0.0)}, {300e3, Vec3(9.0, -2.0, 0.0)}});
        const auto frame = synth_chirp(s.radar, s, 0, 0);
        const DetectorOptions opt;
        const auto res = detect_frame(
            s.radar, frame, {make_channel(s.radar, 1, 200e3, opt), make_channel(s.radar, 2, 300e3, opt)}, opt);
        REQUIRE(res[0].status == DetectStatus::ok);
        REQUIRE(res[1].status == DetectStatus::ok);
        CHECK(res[0].detection->range == doctest::Approx(Vec3(5.0, 1.0, 0.0).norm()).epsilon(2e-3));
        CHECK(res[1].detection->range == doctest::Approx(Vec3(9.0, -2.0, 0.0).norm()).epsilon(2e-3));
    }

    TEST_CASE("localize2d converts the peak pair")
    {
        const auto cfg = default_radar();
        PeakPair p;
        p.f_plus = 250e3 + 3433.748038804507;
        p.f_minus = 250e3 - 3433.748038804507;
        const auto d = localize2d(cfg, p, 3);
        CHECK(d.range == doctest::Approx(7.0).epsilon(1e-12));
        CHECK(d.azimuth == 0.0);
        CHECK(d.tx_channel == 1);
        std::swap(p.f_plus, p.f_minus);
        CHECK_THROWS_AS(localize2d(cfg, p, 3), std::domain_error);
    }

    TEST_CASE("tag at 30 degrees azimuth, zero noise")
    {
        const auto s = tag_scene({{250e3, to_cartesian({6.0, deg2rad(30.0), 0.0})}});
        const auto frame = synth_chirp(s.radar, s, 0, 0);
        const DetectorOptions opt;
        const auto res = detect_frame(s.radar, frame, {make_channel(s.radar, 1, 250e3, opt)}, opt);
        REQUIRE(res[0].status == DetectStatus::ok);
        CHECK(std::abs(rad2deg(res[0].detection->azimuth) - 30.0) < 0.2);
    }

    TEST_CASE("quadratic peak offset")
    {
        CHECK(quadratic_peak_offset(1.0, 2.0, 1.0) == 0.0);
        // y = 5 - (x - 0.3)^2
        auto y = [](double x) { return 5.0 - (x - 0.3) * (x - 0.3); };
        CHECK(quadratic_peak_offset(y(-1), y(0), y(1)) == doctest::Approx(0.3));
    }
}
