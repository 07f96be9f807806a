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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dragonfly/baseline.hpp"
#include "dragonfly/chirp2d.hpp"
#include "dragonfly/cli.hpp"
#include "dragonfly/demos.hpp"
#include "dragonfly/elevation.hpp"
#include "dragonfly/phase.hpp"
#include "dragonfly/pipeline.hpp"
#include "dragonfly/radar_config.hpp"
#include "dragonfly/rfdesign.hpp"
#include "dragonfly/synth.hpp"
#include "dragonfly/tracker.hpp"

using namespace dragonfly;

namespace {

constexpr double c0 = 299792458.0;
constexpr double pi = 3.14159265358979323846;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double median(std::vector<double> v)
{
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("dragonfly-acceptance-" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// Truth elevation / azimuth of tag 0 at time t.
Spherical truth_at(const Scenario& s, double t) { return to_spherical(s.tags.front().trajectory.position(t)); }

// Elevation errors (deg) of every valid record whose reference chirp is past the warmup.
std::vector<double> elevation_errors(const Scenario& s, const PhaseSeries& series, long warmup = 3)
{
    std::vector<double> e;
    for (const auto& r : series.records) {
        if (r.ref_k < warmup) continue;
        const double truth = truth_at(s, static_cast<double>(r.ref_k) * s.radar.tx_period).elevation;
        e.push_back(r.valid ? std::abs(rad2deg(r.elevation - truth)) : 180.0);
    }
    return e;
}

// Continuous (unwrapped) radial phase of tag 0 at chirp k for the window-centre
// reference: 4 pi R f0 / c + 2 pi f_b t_c + spatial phase at the array centre.
double radial_phase_truth(const Scenario& s, long k)
{
    const auto& cfg = s.radar;
    const Vec3 p = s.tags.front().trajectory.position(static_cast<double>(k) * cfg.tx_period);
    const double r = p.norm();
    const double lambda = c0 / cfg.f0;
    const double slope = cfg.bandwidth / cfg.chirp_time;
    const double tc = 0.5 * static_cast<double>(cfg.samples_per_chirp - 1) / cfg.sample_rate;
    const double fb = 2.0 * r * slope / c0;
    const double step = 2.0 * pi * cfg.d_rx * (p.y() / r) / lambda;
    return 4.0 * pi * r * cfg.f0 / c0 + 2.0 * pi * fb * tc + 0.5 * static_cast<double>(cfg.n_rx - 1) * step;
}

// ---------------------------------------------------------------- closed form

Outcome c1()
{
    RadarConfig cfg = default_radar();
    const double a = max_acceleration(cfg);
    cfg.tx_period *= 10.0;
    const double a10 = max_acceleration(cfg);
    return {rel(a, 16.895) < 0.002 && rel(a10, 0.169) < 0.002,
            fmt("a_max=%.5f m/s^2 (rel %.2e), x10 period %.5f m/s^2 (rel %.2e)", a, rel(a, 16.895), a10,
                rel(a10, 0.169))};
}

Outcome c2()
{
    const double v = velocity_ambiguity(default_radar());
    return {rel(v, 0.23) < 0.01, fmt("velocity ambiguity %.6f m/s (rel %.2e)", v, rel(v, 0.23))};
}

Outcome c3()
{
    RadarConfig cfg = default_radar();
    cfg.bandwidth = 250e6;
    const double r = range_resolution(cfg);
    return {rel(r, 0.5996) < 0.002 && std::abs(r - 0.60) <= 0.01, fmt("range resolution %.6f m", r)};
}

Outcome c4()
{
    const double f = doppler_frequency(default_radar(), 1.0);
    return {rel(f, 160.0) < 0.01, fmt("doppler(1 m/s) %.4f Hz", f)};
}

Outcome c5()
{
    // Hand-computed from the reference budget in double precision.
    constexpr double kHandComputed = 79.25882112936472;
    const double r = max_range(reference_budget());
    return {rel(r, 85.0) <= 0.10 && rel(r, kHandComputed) < 1e-12,
            fmt("max range %.6f m (vs 85 m: %.1f%%, vs hand value rel %.1e)", r, 100.0 * (r - 85.0) / 85.0,
                rel(r, kHandComputed))};
}

Outcome c6()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uf(1e-3, 0.5), uh(0.0, 0.5), ue(1.0, 12.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const LensDesign d{uf(rng), uh(rng), ue(rng)};
        const double fov = std::atan2(d.half_extent, 2.0 * d.focal_length) * 2.0;
        const double rad = 2.0 * d.focal_length * std::sqrt(d.epsilon_r) - 2.0 * d.focal_length;
        worst = std::max(worst, fov == 0.0 ? std::abs(field_of_view(d)) : rel(field_of_view(d), fov));
        worst = std::max(worst, rad == 0.0 ? std::abs(lens_radius(d)) : rel(lens_radius(d), rad));
    }
    return {worst <= 1e-12, fmt("worst relative deviation %.2e over 100 designs", worst)};
}

// ------------------------------------------------------------------- pipeline

Outcome c7()
{
    Scenario s;
    s.duration_s = 64 * s.radar.tx_period;
    s.pipeline.detector.max_range_m = 20.0;
    TagScenario t;
    t.tag_id = 1;
    t.f_m = 250e3;
    const double az = deg2rad(10.0), el = deg2rad(5.0);
    const Vec3 p = to_cartesian(Spherical{7.0, az, el});
    t.trajectory = Trajectory::constant(p);
    s.tags.push_back(t);
    const auto res = run_scenario(s, 1);

    double worst_r = 0.0, worst_az = 0.0, worst_el = 0.0;
    std::size_t n = 0;
    for (const auto& tp : res.tags.front().track) {
        // The final chirp has no successor to complete its elevation.
        if (tp.k < 3 || tp.k + 1 >= static_cast<long>(s.chirp_count())) continue;
        if (!tp.valid) return {false, "invalid track point at k=" + std::to_string(tp.k)};
        worst_r = std::max(worst_r, std::abs(tp.range - 7.0));
        worst_az = std::max(worst_az, std::abs(rad2deg(tp.azimuth - az)));
        worst_el = std::max(worst_el, std::abs(rad2deg(tp.elevation - el)));
        ++n;
    }

    // Brute-force DFT oracle: the windowed channel-0 spectrum maximum near f_m + f_b,
    // refined by golden-section search on the continuous frequency axis.
    const IfFrame frame = synth_chirp(s.radar, s, 10, chirp_seed(1, 10), Exec::serial);
    const std::size_t m = s.radar.samples_per_chirp;
    auto mag = [&](double f) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(j) / static_cast<double>(m - 1));
            acc += w * static_cast<double>(frame.at(0, j)) *
                   std::polar(1.0, -2.0 * pi * f * static_cast<double>(j) / s.radar.sample_rate);
        }
        return std::abs(acc);
    };
    const double fb = 2.0 * 7.0 * (s.radar.bandwidth / s.radar.chirp_time) / c0;
    double lo = t.f_m + fb - 150.0, hi = t.f_m + fb + 150.0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (mag(a) > mag(b)) hi = b;
        else lo = a;
    }
    const double f_oracle = 0.5 * (lo + hi);
    const auto& det = res.tags.front().detections;
    const auto it = std::find_if(det.begin(), det.end(), [](const Detection& d) { return d.k == 10; });
    if (it == det.end()) return {false, "no detection at k=10"};
    const double f_plus = it->f_center + it->f_b;
    const double grid = s.radar.sample_rate / static_cast<double>(s.radar.range_fft_len);
    const double df = std::abs(f_plus - f_oracle);

    const bool ok = n > 50 && worst_r < 0.01 && worst_az < 0.1 && worst_el < 0.1 && df < 0.5 * grid;
    return {ok, fmt("worst |dR| %.4f m, |dAz| %.4f deg, |dEl| %.4f deg; f+ vs DFT oracle %.3f Hz", worst_r,
                    worst_az, worst_el, df) +
                    fmt(" (grid %.1f Hz)", grid)};
}

Outcome c8()
{
    const double az = deg2rad(10.0), el = deg2rad(5.0);
    std::ostringstream detail;
    bool ok = true;
    for (double v : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double duration = v > 5.0 ? 0.8 : 1.0;
        Scenario s = radial_velocity_scenario(v, 5.0, az, el, duration, std::nullopt);
        const auto res = run_scenario(s, 3);
        const auto& tag = res.tags.front();
        const auto err = elevation_errors(s, tag.series);
        const double worst = err.empty() ? 180.0 : *std::max_element(err.begin(), err.end());

        // Naive estimator (beta ignored): its delta error must equal the Doppler
        // phase advance over one Tx period, +beta/2 on odd chirps and -beta/2 on even.
        const auto naive = beta_ignored_elevation(s.radar, tag.series);
        double worst_pred = 0.0, naive_err = 0.0;
        const double lambda = c0 / s.radar.f0;
        for (std::size_t i = 0; i < tag.series.records.size(); ++i) {
            const auto& r = tag.series.records[i];
            const double phi_true = truth_at(s, static_cast<double>(r.ref_k) * s.radar.tx_period).elevation;
            const double delta_true = 2.0 * pi * s.radar.d_tx * std::sin(phi_true) / lambda;
            const double half_beta =
                0.5 * (radial_phase_truth(s, r.k) - radial_phase_truth(s, r.k - 2));
            const double predicted = r.k % 2 != 0 ? half_beta : -half_beta;
            const double observed = r.alpha - delta_true;
            worst_pred = std::max(worst_pred, circular_distance(observed, predicted, pi));
            if (i >= 3 && std::isfinite(naive[i])) naive_err = std::max(naive_err, std::abs(rad2deg(naive[i] - phi_true)));
        }
        const bool this_ok = worst < 0.1 && worst_pred < 0.05 && naive_err > 1.0 && err.size() > 50;
        ok = ok && this_ok;
        detail << fmt("v=%.1f: worst %.4f deg, naive worst %.2f deg, doppler model residual %.4f rad; ", v, worst,
                      naive_err, worst_pred);
    }
    return {ok, detail.str()};
}

std::size_t wrong_candidates(const Scenario& s, const PhaseSeries& series, long from_k = 0)
{
    std::size_t wrong = 0;
    for (const auto& r : series.records) {
        if (r.k < from_k) continue;
        const double beta_true = wrap_mod(radial_phase_truth(s, r.k) - radial_phase_truth(s, r.k - 2), 2.0 * pi);
        if (circular_distance(r.beta_chosen, beta_true) >= 0.5 * pi) ++wrong;
    }
    return wrong;
}

Outcome c9()
{
    const double az = deg2rad(5.0), el = deg2rad(3.0);
    std::ostringstream detail;
    bool ok = true;
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
        Scenario s = radial_acceleration_scenario(a, 5.0, az, el, 1.5, std::nullopt);
        const auto res = run_scenario(s, 5);
        const auto& series = res.tags.front().series;
        const std::size_t wrong = wrong_candidates(s, series);
        ok = ok && wrong == 0 && series.records.size() > 150;
        detail << fmt("a=%.1f: %.0f wrong of %.0f; ", a, static_cast<double>(wrong),
                      static_cast<double>(series.records.size()));
    }

    // Negative test: a step to 1.2 a_max after a constant-velocity run.
    Scenario s;
    const double amax = max_acceleration(s.radar);
    const double hold = 0.4, ramp = 0.3;
    s.duration_s = hold + ramp;
    s.pipeline.detector.max_range_m = 20.0;
    TagScenario t;
    t.tag_id = 1;
    t.f_m = 250e3;
    const Vec3 u = to_cartesian(Spherical{1.0, az, el});
    t.trajectory = Trajectory::constant_acceleration(5.0 * u, 0.5 * u, {{hold, Vec3::Zero()}, {ramp + 1.0, 1.2 * amax * u}});
    s.tags.push_back(t);
    const auto res = run_scenario(s, 6);
    ElevationOptions opt;
    std::vector<PhaseSample> samples;
    for (const auto& d : res.tags.front().detections)
        samples.push_back({d.k, d.t_start, pipeline_radial_phase(d), d.range});
    const auto series = disambiguate_accelerating(s.radar, samples, opt);
    const long step_k = static_cast<long>(std::ceil(hold / s.radar.tx_period));
    const std::size_t before = wrong_candidates(s, series) - wrong_candidates(s, series, step_k);
    const std::size_t after = wrong_candidates(s, series, step_k);
    const bool neg_ok = before == 0 && after > 0;
    detail << fmt("1.2 a_max step: %.0f wrong before the step, %.0f after (expected failure)",
                  static_cast<double>(before), static_cast<double>(after));
    return {ok && neg_ok, detail.str()};
}

Outcome c10(const std::filesystem::path& dir)
{
    std::ostringstream detail;
    std::ostringstream sink_out, sink_err;
    const int rc = run_cli({"demo", "drone-3d", "--seed", "42", "--out", dir.string()}, sink_out, sink_err);
    if (rc != 0) return {false, "demo failed: " + sink_err.str()};
    std::ifstream in(dir / "report.json");
    const auto report = nlohmann::json::parse(in);
    const double med = report["error"]["error_3d_m"]["median"].get<double>();
    const auto cycles = report["chirps"].get<std::size_t>() / 2;

    // SNR-to-error curve on shorter flights of the same generator.
    detail << "SNR curve (dB: median 3D m):";
    for (double snr : {10.0, 15.0, 20.0, 25.0, 30.0}) {
        const Scenario s = drone_scenario(7, 300, snr);
        const auto res = run_scenario(s, 7);
        std::vector<double> times;
        for (std::size_t k = 0; k < s.chirp_count(); ++k) times.push_back(static_cast<double>(k) * s.radar.tx_period);
        const auto rep = error_report(res.all_track_points(), sample_truth(s, times));
        detail << fmt(" %.0f: %.4f", snr, rep.d3.median);
    }
    return {med <= 0.12 && cycles >= 2000,
            fmt("drone-3d, %.0f cycles at 20 dB: median 3D error %.4f m; ", static_cast<double>(cycles), med) +
                detail.str()};
}

Outcome c11()
{
    const double az = deg2rad(8.0), el = deg2rad(4.0);
    Scenario clean = radial_velocity_scenario(0.5, 6.0, az, el, 4.0, 20.0);
    Scenario spiked = clean;
    std::mt19937_64 rng(11);
    const long n = static_cast<long>(clean.chirp_count());
    std::uniform_int_distribution<long> pick(40, n - 1);
    std::vector<long> spikes;
    while (static_cast<long>(spikes.size()) < n / 100) {
        const long k = pick(rng);
        if (std::find(spikes.begin(), spikes.end(), k) == spikes.end()) spikes.push_back(k);
    }
    std::sort(spikes.begin(), spikes.end());
    spiked.tags.front().phase_spike_chirps = spikes;
    spiked.tags.front().phase_spike_rad = pi;

    const auto r_clean = run_scenario(clean, 21);
    const auto r_spiked = run_scenario(spiked, 21);
    Scenario no_handler = spiked;
    no_handler.pipeline.elevation.exception_handler = false;
    const auto r_plain = run_scenario(no_handler, 21);

    const double m_clean = median(elevation_errors(clean, r_clean.tags.front().series));
    const double m_spiked = median(elevation_errors(spiked, r_spiked.tags.front().series));
    const double m_plain = median(elevation_errors(no_handler, r_plain.tags.front().series));
    const auto& ser = r_spiked.tags.front().series;
    return {m_spiked <= 2.0 * m_clean,
            fmt("median elevation error: spike-free %.4f deg, spiked with handler %.4f deg, spiked without "
                "handler %.4f deg; ",
                m_clean, m_spiked, m_plain) +
                fmt("%.0f spikes, %.0f outliers repaired, %.0f exception decisions", static_cast<double>(spikes.size()),
                    static_cast<double>(ser.outliers), static_cast<double>(ser.exceptions))};
}

Outcome c12()
{
    const Scenario multi = multitag_scenario(1.5, std::nullopt);
    const auto res = run_scenario(multi, 12);
    std::vector<double> times;
    for (std::size_t k = 0; k < multi.chirp_count(); ++k) times.push_back(static_cast<double>(k) * multi.radar.tx_period);
    const auto truth = sample_truth(multi, times);

    std::ostringstream detail;
    bool ok = res.collisions == 0;
    for (std::size_t i = 0; i < multi.tags.size(); ++i) {
        Scenario single = multi;
        single.tags = {multi.tags[i]};
        const auto rs = run_scenario(single, 12);
        const double m_single = error_report(rs.tags.front().track, truth).d3.median;
        const double m_multi = error_report(res.tags[i].track, truth).d3.median;
        const bool tag_ok = std::isfinite(m_multi) && std::abs(m_multi - m_single) <= 0.1 * m_single &&
                            res.tags[i].detections.size() == rs.tags.front().detections.size();
        ok = ok && tag_ok;
        detail << fmt("tag %.0f: multi %.3e m vs single %.3e m; ", static_cast<double>(multi.tags[i].tag_id), m_multi,
                      m_single);
    }
    const double cap = static_cast<double>(res.capacity);
    ok = ok && rel(cap, 1500.0) <= 0.05;
    detail << fmt("collisions %.0f, channel capacity %.0f (spacing %.1f Hz)", static_cast<double>(res.collisions), cap,
                  default_channel_spacing(multi.radar));
    return {ok, detail.str()};
}

Outcome c13()
{
    // Slow-time baseline on a short-chirp radar.
    RadarConfig br = default_radar();
    br.chirp_time = 256e-6;
    br.sample_rate = 1e6;
    br.samples_per_chirp = 256;
    br.tx_period = 256e-6;
    br.range_fft_len = 1024;
    br.bandwidth = 250e6;
    const double v = 1.0, f_mod = 600.0;
    const std::size_t n_chirps = 256;
    Scenario s;
    s.radar = br;
    s.duration_s = static_cast<double>(2 * n_chirps) * br.tx_period;
    TagScenario t;
    t.tag_id = 1;
    t.f_m = f_mod;
    t.modulation_mode = ModulationMode::slow_time;
    const Vec3 u = to_cartesian(Spherical{1.0, deg2rad(5.0), 0.0});
    t.trajectory = Trajectory::constant_velocity(5.0 * u, {{1.0, v * u}});
    s.tags.push_back(t);
    const auto frames = synth_sequence(br, s, 2 * n_chirps, 13);
    const auto map = range_doppler_map(br, frames, n_chirps, 0, 20.0);
    const auto peak = slow_time_localize(br, map, f_mod, 250.0);
    const double shift = peak.apparent_frequency - f_mod;
    const double expected = 2.0 * v * br.f0 / c0;
    const bool base_ok = std::abs(std::abs(shift) - expected) <= map.doppler_bin_hz();

    // Intra-chirp localizer on the default radar, same motion.
    Scenario d = radial_velocity_scenario(v, 5.0, deg2rad(5.0), 0.0, 0.3, std::nullopt);
    const auto res = run_scenario(d, 13);
    const double grid = d.radar.sample_rate / static_cast<double>(d.radar.range_fft_len);
    double worst = 0.0;
    for (const auto& det : res.tags.front().detections) worst = std::max(worst, std::abs(det.f_center - 250e3));
    const bool intra_ok = !res.tags.front().detections.empty() && worst <= grid;
    return {base_ok && intra_ok,
            fmt("baseline apparent shift %.2f Hz (expected %.2f, Doppler bin %.2f Hz); ", shift, expected,
                map.doppler_bin_hz()) +
                fmt("intra-chirp centre worst offset %.3f Hz (grid %.1f Hz)", worst, grid)};
}

Outcome c14(const std::filesystem::path& first)
{
    const auto second = scratch_dir("c14");
    std::ostringstream o, e;
    const int rc = run_cli({"demo", "drone-3d", "--seed", "42", "--out", second.string()}, o, e);
    if (rc != 0) return {false, "demo failed: " + e.str()};
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(first)) {
        const auto other = second / entry.path().filename();
        std::ifstream a(entry.path(), std::ios::binary), b(other, std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
        if (!b || sa != sb) return {false, "differs: " + entry.path().filename().string()};
        ++files;
    }
    return {files >= 5, fmt("%.0f output files byte-identical across two runs", static_cast<double>(files))};
}

}  // namespace

int main()
{
    const auto demo_dir = scratch_dir("c10");
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"max acceleration closed form", c1},
        {"velocity ambiguity closed form", c2},
        {"range resolution closed form", c3},
        {"doppler frequency closed form", c4},
        {"radar equation maximum range", c5},
        {"lens field of view and radius", c6},
        {"static tag 3D accuracy", c7},
        {"constant-velocity elevation sweep", c8},
        {"acceleration sweep candidate choice", c9},
        {"drone flight median 3D error", [&] { return c10(demo_dir); }},
        {"phase spike rejection", c11},
        {"multi-tag channels", c12},
        {"baseline Doppler contrast", c13},
        {"demo determinism", [&] { return c14(demo_dir); }},
    };
    // DRAGONFLY_ACCEPTANCE_ONLY=7,8 runs a subset.
    std::vector<std::size_t> only;
    if (const char* sel = std::getenv("DRAGONFLY_ACCEPTANCE_ONLY")) {
        std::stringstream ss(sel);
        std::string item;
        while (std::getline(ss, item, ',')) only.push_back(std::stoul(item));
    }
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), i + 1) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " | "
                  << o.detail << fmt(" [%.1f s]", secs) << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
