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

#include "dragonfly/radar_config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dragonfly/errors.hpp"
#include "dragonfly/phase.hpp"

namespace dragonfly {

namespace schema {

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path)
{
    if (!obj.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || item.key() == a;
        if (!known) throw SchemaError(join(path, item.key()), "unknown key");
    }
}

const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(join(path, key), "missing required key");
    return *it;
}

double number(const nlohmann::json& obj, const char* key, const std::string& path)
{
    const auto& v = require(obj, key, path);
    if (!v.is_number()) throw SchemaError(join(path, key), "expected a number");
    return v.get<double>();
}

double number_or(const nlohmann::json& obj, const char* key, double fallback, const std::string& path)
{
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

std::size_t count(const nlohmann::json& obj, const char* key, const std::string& path)
{
    const auto& v = require(obj, key, path);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw SchemaError(join(path, key), "expected a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace schema

void RadarConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("RadarConfig: " + what); };
    if (!(f0 > 0.0)) fail("f0 must be positive");
    if (!(chirp_time > 0.0)) fail("chirp_time must be positive");
    if (!(bandwidth > 0.0)) fail("bandwidth must be positive");
    if (!(sample_rate > 0.0)) fail("sample_rate must be positive");
    if (samples_per_chirp == 0) fail("samples_per_chirp must be positive");
    // The nominal chirp time is quoted rounded (4096 samples at 1.2 Msps is
    // 3.413 ms against a nominal 3.4 ms), so allow 1 % of slack.
    if (static_cast<double>(samples_per_chirp) > 1.01 * chirp_time * sample_rate)
        fail("samples_per_chirp exceeds chirp_time * sample_rate");
    if (tx_period < chirp_time) fail("tx_period must be >= chirp_time");
    if (!(d_rx > 0.0) || !(d_tx > 0.0)) fail("antenna spacings must be positive");
    if (n_rx == 0) fail("n_rx must be positive");
    if (n_tx != 2) fail("only n_tx = 2 is supported by the elevation disambiguation");
    if (range_fft_len < samples_per_chirp) fail("range_fft_len must be >= samples_per_chirp");
    if (angle_fft_len < n_rx) fail("angle_fft_len must be >= n_rx");
    if (clutter_suppression < 0.0) fail("clutter_suppression must be non-negative");
}

RadarConfig default_radar()
{
    RadarConfig cfg;
    cfg.f0 = 24.0e9;
    cfg.bandwidth = 250.0e6;
    cfg.chirp_time = 3.4e-3;
    cfg.sample_rate = 1.2e6;
    cfg.samples_per_chirp = 4096;
    cfg.n_rx = 8;
    cfg.n_tx = 2;
    const double lambda = kSpeedOfLight / cfg.f0;
    cfg.d_rx = 0.5 * lambda;
    cfg.d_tx = 2.0 * lambda;
    cfg.tx_period = 6.8e-3;
    cfg.range_fft_len = 16384;
    cfg.angle_fft_len = 1024;
    cfg.eirp = 29.0;
    cfg.clutter_suppression = 30.0;
    return cfg;
}

double wavelength(const RadarConfig& cfg) { return kSpeedOfLight / cfg.f0; }

double chirp_slope(const RadarConfig& cfg) { return cfg.bandwidth / cfg.chirp_time; }

double beat_frequency(const RadarConfig& cfg, double range_m)
{
    if (range_m < 0.0) throw std::domain_error("beat_frequency: negative range");
    return 2.0 * range_m * chirp_slope(cfg) / kSpeedOfLight;
}

double range_from_beat(const RadarConfig& cfg, double beat_hz)
{
    if (beat_hz < 0.0) throw std::domain_error("range_from_beat: negative beat frequency");
    return beat_hz * kSpeedOfLight / (2.0 * chirp_slope(cfg));
}

double range_resolution(const RadarConfig& cfg) { return kSpeedOfLight / (2.0 * cfg.bandwidth); }

double max_unambiguous_range(const RadarConfig& cfg)
{
    return cfg.chirp_time * cfg.sample_rate * kSpeedOfLight / (4.0 * cfg.bandwidth);
}

double doppler_frequency(const RadarConfig& cfg, double radial_velocity)
{
    return 2.0 * radial_velocity * cfg.f0 / kSpeedOfLight;
}

double velocity_ambiguity(const RadarConfig& cfg)
{
    return kSpeedOfLight / (8.0 * cfg.f0 * cfg.tx_period);
}

double max_acceleration(const RadarConfig& cfg)
{
    return kSpeedOfLight / (16.0 * cfg.f0 * cfg.tx_period * cfg.tx_period);
}

double mid_chirp_time(const RadarConfig& cfg)
{
    return 0.5 * static_cast<double>(cfg.samples_per_chirp - 1) / cfg.sample_rate;
}

double mid_chirp_frequency(const RadarConfig& cfg) { return cfg.f0 + chirp_slope(cfg) * mid_chirp_time(cfg); }

RadarConfig radar_from_json(const nlohmann::json& j)
{
    const std::string path = "radar";
    schema::reject_unknown_keys(j,
                                {"f0", "bandwidth", "chirp_time", "sample_rate", "samples_per_chirp", "n_rx",
                                 "d_rx", "n_tx", "d_tx", "tx_period", "range_fft_len", "angle_fft_len", "eirp",
                                 "clutter_suppression"},
                                path);
    RadarConfig cfg;
    cfg.f0 = schema::number(j, "f0", path);
    cfg.bandwidth = schema::number(j, "bandwidth", path);
    cfg.chirp_time = schema::number(j, "chirp_time", path);
    cfg.sample_rate = schema::number(j, "sample_rate", path);
    cfg.samples_per_chirp = schema::count(j, "samples_per_chirp", path);
    cfg.n_rx = schema::count(j, "n_rx", path);
    cfg.d_rx = schema::number(j, "d_rx", path);
    cfg.n_tx = schema::count(j, "n_tx", path);
    cfg.d_tx = schema::number(j, "d_tx", path);
    cfg.tx_period = schema::number(j, "tx_period", path);
    cfg.range_fft_len = schema::count(j, "range_fft_len", path);
    cfg.angle_fft_len = schema::count(j, "angle_fft_len", path);
    cfg.eirp = schema::number_or(j, "eirp", 29.0, path);
    cfg.clutter_suppression = schema::number_or(j, "clutter_suppression", 0.0, path);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, e.what());
    }
    return cfg;
}

nlohmann::json to_json(const RadarConfig& cfg)
{
    return {{"f0", cfg.f0},
            {"bandwidth", cfg.bandwidth},
            {"chirp_time", cfg.chirp_time},
            {"sample_rate", cfg.sample_rate},
            {"samples_per_chirp", cfg.samples_per_chirp},
            {"n_rx", cfg.n_rx},
            {"d_rx", cfg.d_rx},
            {"n_tx", cfg.n_tx},
            {"d_tx", cfg.d_tx},
            {"tx_period", cfg.tx_period},
            {"range_fft_len", cfg.range_fft_len},
            {"angle_fft_len", cfg.angle_fft_len},
            {"eirp", cfg.eirp},
            {"clutter_suppression", cfg.clutter_suppression}};
}

}  // namespace dragonfly
