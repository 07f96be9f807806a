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

#include "dragonfly/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dragonfly/errors.hpp"

namespace dragonfly {

namespace {

Vec3 vec3(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected [x, y, z]");
    for (const auto& e : j)
        if (!e.is_number()) throw SchemaError(path, "expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

TagScenario tag_from_json(const nlohmann::json& j, const std::string& path)
{
    schema::reject_unknown_keys(j,
                                {"tag_id", "f_m", "phi_m0", "modulation_mode", "rcs", "rcs_gain_table",
                                 "trajectory", "oscillator_drift_ppm_per_s", "phase_jitter_rad",
                                 "nlos_attenuation_db", "phase_spikes"},
                                path);
    TagScenario t;
    const auto& id = schema::require(j, "tag_id", path);
    if (!id.is_number_integer()) throw SchemaError(schema::join(path, "tag_id"), "expected an integer");
    t.tag_id = id.get<int>();
    t.f_m = schema::number(j, "f_m", path);
    if (!(t.f_m > 0.0)) throw SchemaError(schema::join(path, "f_m"), "must be positive");
    t.phi_m0 = schema::number_or(j, "phi_m0", 0.0, path);
    if (j.contains("modulation_mode")) {
        if (!j["modulation_mode"].is_string())
            throw SchemaError(schema::join(path, "modulation_mode"), "expected a string");
        try {
            t.modulation_mode = modulation_from_string(j["modulation_mode"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(schema::join(path, "modulation_mode"), e.what());
        }
    }
    t.rcs = schema::number_or(j, "rcs", t.rcs, path);
    if (!(t.rcs > 0.0)) throw SchemaError(schema::join(path, "rcs"), "must be positive");
    if (j.contains("rcs_gain_table")) {
        const auto& tab = j["rcs_gain_table"];
        const auto tp = schema::join(path, "rcs_gain_table");
        if (!tab.is_array()) throw SchemaError(tp, "expected [[angle_deg, gain_db], ...]");
        for (const auto& row : tab) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
                throw SchemaError(tp, "expected [[angle_deg, gain_db], ...]");
            t.rcs_gain_table.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        std::sort(t.rcs_gain_table.begin(), t.rcs_gain_table.end());
    }
    t.trajectory = Trajectory::from_json(schema::require(j, "trajectory", path), schema::join(path, "trajectory"));
    t.oscillator_drift_ppm_per_s = schema::number_or(j, "oscillator_drift_ppm_per_s", 0.0, path);
    t.phase_jitter_rad = schema::number_or(j, "phase_jitter_rad", 0.0, path);
    if (t.phase_jitter_rad < 0.0) throw SchemaError(schema::join(path, "phase_jitter_rad"), "must be >= 0");
    t.nlos_attenuation_db = schema::number_or(j, "nlos_attenuation_db", 0.0, path);
    if (j.contains("phase_spikes")) {
        const auto sp = schema::join(path, "phase_spikes");
        const auto& s = j["phase_spikes"];
        schema::reject_unknown_keys(s, {"chirps", "rad"}, sp);
        const auto& c = schema::require(s, "chirps", sp);
        if (!c.is_array()) throw SchemaError(schema::join(sp, "chirps"), "expected an array of chirp indices");
        for (const auto& k : c) {
            if (!k.is_number_integer()) throw SchemaError(schema::join(sp, "chirps"), "expected integers");
            t.phase_spike_chirps.push_back(k.get<long>());
        }
        std::sort(t.phase_spike_chirps.begin(), t.phase_spike_chirps.end());
        t.phase_spike_rad = schema::number_or(s, "rad", t.phase_spike_rad, sp);
    }
    return t;
}

ClutterScatterer clutter_from_json(const nlohmann::json& j, const std::string& path)
{
    schema::reject_unknown_keys(j, {"position", "velocity", "rcs", "co_polarized"}, path);
    ClutterScatterer c;
    c.position = vec3(schema::require(j, "position", path), schema::join(path, "position"));
    if (!(c.position.norm() > 0.0)) throw SchemaError(schema::join(path, "position"), "range must be positive");
    if (j.contains("velocity")) c.velocity = vec3(j["velocity"], schema::join(path, "velocity"));
    c.rcs = schema::number_or(j, "rcs", c.rcs, path);
    if (!(c.rcs > 0.0)) throw SchemaError(schema::join(path, "rcs"), "must be positive");
    if (j.contains("co_polarized")) {
        if (!j["co_polarized"].is_boolean()) throw SchemaError(schema::join(path, "co_polarized"), "expected a boolean");
        c.co_polarized = j["co_polarized"].get<bool>();
    }
    return c;
}

nlohmann::json read_json_file(const std::string& path, const std::string& key)
{
    std::ifstream in(path);
    if (!in) throw SchemaError(key, "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(key, std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

std::size_t Scenario::chirp_count() const
{
    return static_cast<std::size_t>(std::floor(duration_s / radar.tx_period + 1e-9));
}

ModulationMode modulation_from_string(const std::string& s)
{
    if (s == "harmonic") return ModulationMode::harmonic;
    if (s == "square") return ModulationMode::square;
    if (s == "slow_time") return ModulationMode::slow_time;
    throw std::invalid_argument("unknown modulation mode '" + s + "'");
}

std::string to_string(ModulationMode m)
{
    switch (m) {
    case ModulationMode::harmonic: return "harmonic";
    case ModulationMode::square: return "square";
    case ModulationMode::slow_time: return "slow_time";
    }
    return "harmonic";
}

Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir)
{
    schema::reject_unknown_keys(j,
                                {"radar", "tags", "clutter", "noise_floor_dbm", "snr_db", "reference_range_m",
                                 "reference_rcs", "duration_s", "seed", "output", "pipeline"},
                                "");
    Scenario s;
    if (j.contains("radar")) {
        const auto& r = j["radar"];
        if (r.is_string()) {
            const auto name = r.get<std::string>();
            if (name == "default") {
                s.radar = default_radar();
            } else {
                auto p = std::filesystem::path(name);
                if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                s.radar = radar_from_json(read_json_file(p.string(), "radar"));
            }
        } else {
            s.radar = radar_from_json(r);
        }
    }
    const auto& tags = schema::require(j, "tags", "");
    if (!tags.is_array()) throw SchemaError("tags", "expected an array");
    for (std::size_t i = 0; i < tags.size(); ++i)
        s.tags.push_back(tag_from_json(tags[i], "tags[" + std::to_string(i) + "]"));
    for (std::size_t a = 0; a < s.tags.size(); ++a)
        for (std::size_t b = a + 1; b < s.tags.size(); ++b)
            if (s.tags[a].tag_id == s.tags[b].tag_id)
                throw SchemaError("tags[" + std::to_string(b) + "].tag_id", "duplicate tag_id");
    if (j.contains("clutter")) {
        const auto& c = j["clutter"];
        if (!c.is_array()) throw SchemaError("clutter", "expected an array");
        for (std::size_t i = 0; i < c.size(); ++i)
            s.clutter.push_back(clutter_from_json(c[i], "clutter[" + std::to_string(i) + "]"));
    }
    if (j.contains("noise_floor_dbm") && !j["noise_floor_dbm"].is_null())
        s.noise_floor_dbm = schema::number(j, "noise_floor_dbm", "");
    s.snr_db = schema::number_or(j, "snr_db", s.snr_db, "");
    s.reference_range_m = schema::number_or(j, "reference_range_m", s.reference_range_m, "");
    if (!(s.reference_range_m > 0.0)) throw SchemaError("reference_range_m", "must be positive");
    s.reference_rcs = schema::number_or(j, "reference_rcs", s.reference_rcs, "");
    if (!(s.reference_rcs > 0.0)) throw SchemaError("reference_rcs", "must be positive");
    s.duration_s = schema::number(j, "duration_s", "");
    if (!(s.duration_s > 0.0)) throw SchemaError("duration_s", "must be positive");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            throw SchemaError("seed", "expected a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output")) {
        schema::reject_unknown_keys(j["output"], {"dir"}, "output");
        if (j["output"].contains("dir")) {
            if (!j["output"]["dir"].is_string()) throw SchemaError("output.dir", "expected a string");
            s.output_dir = j["output"]["dir"].get<std::string>();
        }
    }
    if (j.contains("pipeline")) s.pipeline = pipeline_options_from_json(j["pipeline"], "pipeline");

    for (std::size_t i = 0; i < s.tags.size(); ++i) {
        const auto& t = s.tags[i];
        const double end = static_cast<double>(s.chirp_count()) * s.radar.tx_period;
        if (!t.trajectory.defined_at(0.0) || !t.trajectory.defined_at(std::max(0.0, end - s.radar.tx_period)))
            throw SchemaError("tags[" + std::to_string(i) + "].trajectory", "does not cover the scenario duration");
        if (t.modulation_mode != ModulationMode::slow_time && t.f_m >= 0.5 * s.radar.sample_rate)
            throw SchemaError("tags[" + std::to_string(i) + "].f_m", "must lie below the Nyquist frequency");
    }
    return s;
}

Scenario load_scenario(const std::string& path)
{
    const auto j = read_json_file(path, "scenario");
    return scenario_from_json(j, std::filesystem::path(path).parent_path().string().empty()
                                     ? "."
                                     : std::filesystem::path(path).parent_path().string());
}

nlohmann::json to_json(const Scenario& s)
{
    nlohmann::json tags = nlohmann::json::array();
    for (const auto& t : s.tags) {
        nlohmann::json jt = {{"tag_id", t.tag_id},
                             {"f_m", t.f_m},
                             {"phi_m0", t.phi_m0},
                             {"modulation_mode", to_string(t.modulation_mode)},
                             {"rcs", t.rcs},
                             {"trajectory", t.trajectory.to_json()},
                             {"oscillator_drift_ppm_per_s", t.oscillator_drift_ppm_per_s},
                             {"phase_jitter_rad", t.phase_jitter_rad},
                             {"nlos_attenuation_db", t.nlos_attenuation_db}};
        if (!t.rcs_gain_table.empty()) {
            nlohmann::json tab = nlohmann::json::array();
            for (const auto& [a, g] : t.rcs_gain_table) tab.push_back({a, g});
            jt["rcs_gain_table"] = tab;
        }
        if (!t.phase_spike_chirps.empty())
            jt["phase_spikes"] = {{"chirps", t.phase_spike_chirps}, {"rad", t.phase_spike_rad}};
        tags.push_back(jt);
    }
    nlohmann::json clutter = nlohmann::json::array();
    for (const auto& c : s.clutter)
        clutter.push_back({{"position", vec_json(c.position)},
                           {"velocity", vec_json(c.velocity)},
                           {"rcs", c.rcs},
                           {"co_polarized", c.co_polarized}});
    nlohmann::json j = {{"radar", to_json(s.radar)},
                        {"tags", tags},
                        {"clutter", clutter},
                        {"snr_db", s.snr_db},
                        {"reference_range_m", s.reference_range_m},
                        {"reference_rcs", s.reference_rcs},
                        {"duration_s", s.duration_s},
                        {"seed", s.seed},
                        {"pipeline", to_json(s.pipeline)}};
    j["noise_floor_dbm"] = s.noise_floor_dbm ? nlohmann::json(*s.noise_floor_dbm) : nlohmann::json(nullptr);
    if (!s.output_dir.empty()) j["output"] = {{"dir", s.output_dir}};
    return j;
}

double table_gain_db(const std::vector<std::pair<double, double>>& table, double angle_deg)
{
    if (table.empty()) return 0.0;
    if (angle_deg <= table.front().first) return table.front().second;
    if (angle_deg >= table.back().first) return table.back().second;
    auto hi = std::upper_bound(table.begin(), table.end(), angle_deg,
                               [](double a, const std::pair<double, double>& p) { return a < p.first; });
    auto lo = std::prev(hi);
    const double w = (angle_deg - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

}  // namespace dragonfly
