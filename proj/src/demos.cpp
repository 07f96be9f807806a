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

#include "dragonfly/demos.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "dragonfly/csv.hpp"
#include "dragonfly/phase.hpp"
#include "dragonfly/tracker.hpp"

namespace dragonfly {

namespace {

Vec3 direction(double azimuth, double elevation) { return to_cartesian(Spherical{1.0, azimuth, elevation}); }

Scenario base_scenario(double duration, std::optional<double> snr_db, double max_range)
{
    Scenario s;
    s.duration_s = duration;
    if (snr_db) {
        s.noise_floor_dbm = 0.0;
        s.snr_db = *snr_db;
    }
    s.pipeline.detector.max_range_m = max_range;
    return s;
}

TagScenario tag(int id, double f_m, Trajectory traj)
{
    TagScenario t;
    t.tag_id = id;
    t.f_m = f_m;
    t.trajectory = std::move(traj);
    return t;
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

std::vector<double> chirp_times(const Scenario& s)
{
    std::vector<double> t(s.chirp_count());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) * s.radar.tx_period;
    return t;
}

}  // namespace

const std::vector<std::string>& demo_names()
{
    static const std::vector<std::string> names{"drone-3d", "vehicle-10mps", "ramp-4mps2", "multitag-4",
                                                "range-sweep"};
    return names;
}

Scenario drone_scenario(std::uint64_t seed, std::size_t cycles, double snr_db)
{
    const RadarConfig radar = default_radar();
    const double duration = static_cast<double>(2 * cycles) * radar.tx_period;
    Scenario s = base_scenario(duration, snr_db, 20.0);
    s.seed = seed;

    constexpr double leg = 0.25, max_speed = 3.0, max_accel = 3.0;
    const Vec3 home = 7.0 * direction(deg2rad(10.0), deg2rad(3.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.5);
    std::vector<Trajectory::AccelerationLeg> legs;
    Vec3 p = home, v = Vec3::Zero();
    const auto n_legs = static_cast<std::size_t>(std::ceil(duration / leg)) + 2;
    for (std::size_t i = 0; i < n_legs; ++i) {
        Vec3 a = 0.8 * (home - p) - 0.9 * v + Vec3(gauss(rng), gauss(rng), 0.4 * gauss(rng));
        // Keep the elevation swing modest.
        a.z() += 2.0 * (home.z() - p.z()) - v.z();
        if (a.norm() > max_accel) a *= max_accel / a.norm();
        Vec3 v_end = v + a * leg;
        if (v_end.norm() > max_speed) {
            v_end *= 0.95 * max_speed / v_end.norm();
            a = (v_end - v) / leg;
        }
        legs.push_back({leg, a});
        p += v * leg + 0.5 * a * leg * leg;
        v = v_end;
    }
    s.tags.push_back(tag(1, 250e3, Trajectory::constant_acceleration(home, Vec3::Zero(), legs)));
    return s;
}

Scenario radial_velocity_scenario(double speed, double start_range, double azimuth, double elevation,
                                  double duration, std::optional<double> snr_db)
{
    const double end = start_range + std::abs(speed) * (duration + 1.0);
    Scenario s = base_scenario(duration, snr_db, std::max(20.0, 1.2 * end));
    const Vec3 u = direction(azimuth, elevation);
    s.tags.push_back(tag(1, 250e3, Trajectory::constant_velocity(start_range * u, {{duration + 1.0, speed * u}})));
    return s;
}

Scenario radial_acceleration_scenario(double accel, double start_range, double azimuth, double elevation,
                                      double duration, std::optional<double> snr_db)
{
    const double span = duration + 1.0;
    const double end = start_range + 0.5 * std::abs(accel) * span * span;
    Scenario s = base_scenario(duration, snr_db, std::max(20.0, 1.2 * end));
    const Vec3 u = direction(azimuth, elevation);
    s.tags.push_back(
        tag(1, 250e3, Trajectory::constant_acceleration(start_range * u, Vec3::Zero(), {{span, accel * u}})));
    return s;
}

Scenario multitag_scenario(double duration, std::optional<double> snr_db)
{
    Scenario s = base_scenario(duration, snr_db, 20.0);
    const double span = duration + 1.0;
    const double f[4] = {200e3, 300e3, 400e3, 500e3};
    const double az[4] = {-20.0, -5.0, 8.0, 22.0};
    const double el[4] = {-3.0, 2.0, 4.0, -1.0};
    const Vec3 vel[4] = {{0.8, 0.3, 0.05}, {-0.6, 0.2, -0.04}, {0.4, -0.5, 0.0}, {-0.3, -0.2, 0.06}};
    for (int i = 0; i < 4; ++i) {
        const Vec3 p0 = (6.0 + 0.5 * i) * direction(deg2rad(az[i]), deg2rad(el[i]));
        s.tags.push_back(tag(i + 1, f[i], Trajectory::constant_velocity(p0, {{span, vel[i]}})));
    }
    return s;
}

nlohmann::json run_report(const Scenario& scenario, const PipelineResult& result)
{
    const auto truth = sample_truth(scenario, chirp_times(scenario));
    const auto report = error_report(result.all_track_points(), truth);
    nlohmann::json tags = nlohmann::json::array();
    for (const auto& t : result.tags) {
        tags.push_back({{"tag_id", t.tag_id},
                        {"f_m_hz", t.f_m},
                        {"detections", t.detections.size()},
                        {"no_tag", t.no_tag},
                        {"ambiguous", t.ambiguous},
                        {"rejected", t.rejected},
                        {"exceptions", t.series.exceptions},
                        {"outliers", t.series.outliers},
                        {"gaps", t.series.gaps},
                        {"trajectory", t.series.trajectory},
                        {"trajectory_ambiguous", t.series.trajectory_ambiguous},
                        {"error", to_json(error_report(t.track, truth))}});
    }
    return {{"chirps", result.frames},
            {"snr_db", scenario.noise_floor_dbm ? nlohmann::json(scenario.snr_db) : nlohmann::json(nullptr)},
            {"collisions", result.collisions},
            {"unassigned", result.unassigned},
            {"channel_capacity", result.capacity},
            {"error", to_json(report)},
            {"tags", tags}};
}

nlohmann::json write_run_outputs(const std::string& out_dir, const Scenario& scenario, const PipelineResult& result)
{
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "detections.csv", std::ios::binary);
        csv::write_detections(out, result.all_detections());
    }
    {
        std::ofstream out(dir / "elevation.csv", std::ios::binary);
        bool header = true;
        for (const auto& t : result.tags) {
            csv::write_elevation(out, t.tag_id, t.series, header);
            header = false;
        }
        if (header) csv::write_elevation(out, 0, PhaseSeries{}, true);
    }
    {
        std::ofstream out(dir / "track.csv", std::ios::binary);
        csv::write_track(out, result.all_track_points());
    }
    {
        std::ofstream out(dir / "truth.csv", std::ios::binary);
        csv::write_truth(out, sample_truth(scenario, chirp_times(scenario)));
    }
    const auto report = run_report(scenario, result);
    write_file(dir / "report.json", report.dump(2) + "\n");
    return report;
}

nlohmann::json run_demo(const std::string& name, std::uint64_t seed, const std::string& out_dir)
{
    const std::filesystem::path dir(out_dir);
    if (name == "drone-3d") {
        const Scenario s = drone_scenario(seed, 2000, 20.0);
        auto report = write_run_outputs(out_dir, s, run_scenario(s, seed));
        report["demo"] = name;
        report["seed"] = seed;
        write_file(dir / "report.json", report.dump(2) + "\n");
        return report;
    }
    if (name == "vehicle-10mps") {
        const Scenario s = radial_velocity_scenario(10.0, 4.0, deg2rad(8.0), deg2rad(3.0), 1.0, 20.0);
        auto report = write_run_outputs(out_dir, s, run_scenario(s, seed));
        report["demo"] = name;
        report["seed"] = seed;
        write_file(dir / "report.json", report.dump(2) + "\n");
        return report;
    }
    if (name == "multitag-4") {
        const Scenario s = multitag_scenario(2.0, 20.0);
        auto report = write_run_outputs(out_dir, s, run_scenario(s, seed));
        report["demo"] = name;
        report["seed"] = seed;
        write_file(dir / "report.json", report.dump(2) + "\n");
        return report;
    }
    if (name == "ramp-4mps2" || name == "range-sweep") {
        // Several short runs; tag_id in the combined outputs is the run index.
        const bool ramp = name == "ramp-4mps2";
        const std::vector<double> values = ramp ? std::vector<double>{0.5, 1.0, 2.0, 4.0}
                                                : std::vector<double>{2.0, 5.0, 10.0, 20.0, 40.0};
        std::filesystem::create_directories(dir);
        std::ofstream track(dir / "track.csv", std::ios::binary);
        std::ofstream elev(dir / "elevation.csv", std::ios::binary);
        std::ofstream truth_out(dir / "truth.csv", std::ios::binary);
        std::vector<TrackPoint> all_track;
        std::vector<TruthPoint> all_truth;
        nlohmann::json sweep = nlohmann::json::array();
        for (std::size_t i = 0; i < values.size(); ++i) {
            Scenario s = ramp ? radial_acceleration_scenario(values[i], 5.0, deg2rad(5.0), deg2rad(2.0), 1.5, 20.0)
                              : radial_velocity_scenario(0.0, values[i], deg2rad(5.0), deg2rad(2.0), 0.5, 20.0);
            if (!ramp) s.pipeline.detector.max_range_m = 60.0;
            const int run_id = static_cast<int>(i) + 1;
            s.tags.front().tag_id = run_id;
            const auto res = run_scenario(s, seed + i);
            const auto truth = sample_truth(s, chirp_times(s));
            auto pts = res.all_track_points();
            all_track.insert(all_track.end(), pts.begin(), pts.end());
            all_truth.insert(all_truth.end(), truth.begin(), truth.end());
            csv::write_elevation(elev, run_id, res.tags.front().series, i == 0);
            auto entry = run_report(s, res);
            entry[ramp ? "radial_acceleration_mps2" : "range_m"] = values[i];
            entry["run"] = run_id;
            sweep.push_back(entry);
        }
        csv::write_track(track, all_track);
        csv::write_truth(truth_out, all_truth);
        const nlohmann::json report{{"demo", name},
                                    {"seed", seed},
                                    {"sweep", sweep},
                                    {"error", to_json(error_report(all_track, all_truth))}};
        write_file(dir / "report.json", report.dump(2) + "\n");
        return report;
    }
    throw std::invalid_argument("unknown demo '" + name + "'");
}

}  // namespace dragonfly
