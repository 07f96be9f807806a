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

#include "dragonfly/options.hpp"

#include <string>

#include "dragonfly/errors.hpp"

namespace dragonfly {

namespace {

bool boolean_or(const nlohmann::json& j, const char* key, bool fallback, const std::string& path)
{
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw SchemaError(schema::join(path, key), "expected a boolean");
    return j[key].get<bool>();
}

std::size_t count_or(const nlohmann::json& j, const char* key, std::size_t fallback, const std::string& path)
{
    return j.contains(key) ? schema::count(j, key, path) : fallback;
}

}  // namespace

DetectorOptions detector_options_from_json(const nlohmann::json& j, const std::string& path)
{
    schema::reject_unknown_keys(j,
                                {"window", "max_range_m", "snr_threshold_db", "pair_tolerance_bins",
                                 "ambiguity_margin_db", "mirror_average"},
                                path);
    DetectorOptions o;
    if (j.contains("window")) {
        const auto& w = j["window"];
        if (w == "hann") o.window = WindowKind::hann;
        else if (w == "rectangular") o.window = WindowKind::rectangular;
        else throw SchemaError(schema::join(path, "window"), "expected 'hann' or 'rectangular'");
    }
    o.max_range_m = schema::number_or(j, "max_range_m", o.max_range_m, path);
    if (!(o.max_range_m > 0.0)) throw SchemaError(schema::join(path, "max_range_m"), "must be positive");
    o.snr_threshold_db = schema::number_or(j, "snr_threshold_db", o.snr_threshold_db, path);
    o.pair_tolerance_bins = schema::number_or(j, "pair_tolerance_bins", o.pair_tolerance_bins, path);
    o.ambiguity_margin_db = schema::number_or(j, "ambiguity_margin_db", o.ambiguity_margin_db, path);
    o.mirror_average = boolean_or(j, "mirror_average", o.mirror_average, path);
    return o;
}

ElevationOptions elevation_options_from_json(const nlohmann::json& j, const std::string& path)
{
    schema::reject_unknown_keys(j,
                                {"prior", "prior_window", "accel_compensation", "exception_handler",
                                 "accel_threshold_fraction", "sigma_accel_fraction", "sigma_beta_rad",
                                 "sigma_delta_rad", "sigma_elevation_accel", "outlier_nis", "kf_warmup"},
                                path);
    ElevationOptions o;
    if (j.contains("prior")) {
        const auto& p = j["prior"];
        if (p == "range_rate") o.prior = TrajectoryPrior::range_rate;
        else if (p == "min_speed") o.prior = TrajectoryPrior::min_speed;
        else throw SchemaError(schema::join(path, "prior"), "expected 'range_rate' or 'min_speed'");
    }
    o.prior_window = count_or(j, "prior_window", o.prior_window, path);
    if (o.prior_window < 4) throw SchemaError(schema::join(path, "prior_window"), "must be at least 4");
    o.accel_compensation = boolean_or(j, "accel_compensation", o.accel_compensation, path);
    o.exception_handler = boolean_or(j, "exception_handler", o.exception_handler, path);
    o.accel_threshold_fraction = schema::number_or(j, "accel_threshold_fraction", o.accel_threshold_fraction, path);
    o.sigma_accel_fraction = schema::number_or(j, "sigma_accel_fraction", o.sigma_accel_fraction, path);
    o.sigma_beta_rad = schema::number_or(j, "sigma_beta_rad", o.sigma_beta_rad, path);
    o.sigma_delta_rad = schema::number_or(j, "sigma_delta_rad", o.sigma_delta_rad, path);
    o.sigma_elevation_accel = schema::number_or(j, "sigma_elevation_accel", o.sigma_elevation_accel, path);
    o.outlier_nis = schema::number_or(j, "outlier_nis", o.outlier_nis, path);
    o.kf_warmup = count_or(j, "kf_warmup", o.kf_warmup, path);
    if (!(o.sigma_beta_rad > 0.0) || !(o.sigma_delta_rad > 0.0) || !(o.sigma_accel_fraction > 0.0) ||
        !(o.sigma_elevation_accel > 0.0))
        throw SchemaError(path, "noise parameters must be positive");
    return o;
}

PipelineOptions pipeline_options_from_json(const nlohmann::json& j, const std::string& path)
{
    schema::reject_unknown_keys(j, {"detector", "elevation", "batch_size", "parallel"}, path);
    PipelineOptions o;
    if (j.contains("detector")) o.detector = detector_options_from_json(j["detector"], schema::join(path, "detector"));
    if (j.contains("elevation"))
        o.elevation = elevation_options_from_json(j["elevation"], schema::join(path, "elevation"));
    o.batch_size = count_or(j, "batch_size", o.batch_size, path);
    if (o.batch_size == 0) throw SchemaError(schema::join(path, "batch_size"), "must be positive");
    o.parallel = boolean_or(j, "parallel", o.parallel, path);
    return o;
}

nlohmann::json to_json(const PipelineOptions& o)
{
    const auto& d = o.detector;
    const auto& e = o.elevation;
    return {{"detector",
             {{"window", d.window == WindowKind::hann ? "hann" : "rectangular"},
              {"max_range_m", d.max_range_m},
              {"snr_threshold_db", d.snr_threshold_db},
              {"pair_tolerance_bins", d.pair_tolerance_bins},
              {"ambiguity_margin_db", d.ambiguity_margin_db},
              {"mirror_average", d.mirror_average}}},
            {"elevation",
             {{"prior", e.prior == TrajectoryPrior::min_speed ? "min_speed" : "range_rate"},
              {"prior_window", e.prior_window},
              {"accel_compensation", e.accel_compensation},
              {"exception_handler", e.exception_handler},
              {"accel_threshold_fraction", e.accel_threshold_fraction},
              {"sigma_accel_fraction", e.sigma_accel_fraction},
              {"sigma_beta_rad", e.sigma_beta_rad},
              {"sigma_delta_rad", e.sigma_delta_rad},
              {"sigma_elevation_accel", e.sigma_elevation_accel},
              {"outlier_nis", e.outlier_nis},
              {"kf_warmup", e.kf_warmup}}},
            {"batch_size", o.batch_size},
            {"parallel", o.parallel}};
}

}  // namespace dragonfly
