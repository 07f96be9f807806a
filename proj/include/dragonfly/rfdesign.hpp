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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dragonfly {

/// Retrodirective lens geometry.
struct LensDesign {
    double focal_length = 0.0; // F (m)
    double half_extent = 0.0;  // h, centre pixel to outermost pixel (m)
    double epsilon_r = 1.0;

    void validate() const;
};

/// 2 atan(h / 2F).
double field_of_view(const LensDesign& d);

/// 2 F (sqrt(epsilon_r) - 1).
double lens_radius(const LensDesign& d);

/// Radar equation inputs, linear units.
struct LinkBudget {
    double p_t = 0.0;     // W
    double p_r_min = 0.0; // W
    double g_t = 0.0;
    double g_r = 0.0;
    double lambda = 0.0;  // m
    double sigma = 0.0;   // m^2

    void validate() const;
};

/// 10 dBm, -135 dBm, 10 dBi, 12 dBi, 0.01 m^2, 12.5 mm.
LinkBudget reference_budget();

/// (P_t G_t G_r lambda^2 sigma / ((4 pi)^3 P_r))^(1/4).
double max_range(const LinkBudget& b);

/// (angle in degrees, RCS in dBsm), sorted by angle.
using RcsTable = std::vector<std::pair<double, double>>;

/// RCS in dBsm, linear in dB between points and clamped at the ends.
double rcs_dbsm_at(const RcsTable& table, double angle_deg);

/// Reads "angle_deg,rcs_dbsm" rows; a non-numeric first line is taken as a header.
RcsTable load_rcs_csv(const std::string& path);

struct RangeAtAngle {
    double angle_deg = 0.0;
    double rcs_dbsm = 0.0;
    double range_m = 0.0;
};

/// max_range with sigma taken from the table at each angle.
std::vector<RangeAtAngle> range_vs_angle(const LinkBudget& b, const RcsTable& table,
                                         const std::vector<double>& angles_deg);
/// Same, on the table's own angles.
std::vector<RangeAtAngle> range_vs_angle(const LinkBudget& b, const RcsTable& table);

/// Width (deg) of the angular span where range stays above `fraction` of its peak.
double coverage_width_deg(const std::vector<RangeAtAngle>& curve, double fraction);

/**
 * Evaluates a design document:
 *   {"lens": {focal_length_m, half_extent_m, epsilon_r},
 *    "budget": {p_t_dbm, p_r_min_dbm, g_t_dbi, g_r_dbi, lambda_m, sigma_m2},
 *    "rcs_tables": {"name": "file.csv", ...}}
 * Every section is optional; relative table paths resolve against base_dir.
 */
nlohmann::json design_report(const nlohmann::json& doc, const std::string& base_dir = ".");

}  // namespace dragonfly
