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

#include "dragonfly/rfdesign.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dragonfly/errors.hpp"
#include "dragonfly/phase.hpp"

namespace dragonfly {

void LensDesign::validate() const
{
    if (!(focal_length > 0.0)) throw std::invalid_argument("lens focal_length must be positive");
    if (!(half_extent >= 0.0)) throw std::invalid_argument("lens half_extent must be non-negative");
    if (!(epsilon_r >= 1.0)) throw std::invalid_argument("lens epsilon_r must be at least 1");
}

double field_of_view(const LensDesign& d) { return 2.0 * std::atan(d.half_extent / (2.0 * d.focal_length)); }

double lens_radius(const LensDesign& d) { return d.focal_length * 2.0 * (std::sqrt(d.epsilon_r) - 1.0); }

void LinkBudget::validate() const
{
    if (!(p_t > 0.0) || !(p_r_min > 0.0) || !(g_t > 0.0) || !(g_r > 0.0) || !(lambda > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("link budget terms must be positive");
}

LinkBudget reference_budget()
{
    return {dbm_to_watts(10.0), dbm_to_watts(-135.0), db_to_linear(10.0), db_to_linear(12.0), 0.0125, 0.01};
}

double max_range(const LinkBudget& b)
{
    const double four_pi_cubed = std::pow(4.0 * kPi, 3);
    return std::pow(b.p_t * b.g_t * b.g_r * b.lambda * b.lambda * b.sigma / (four_pi_cubed * b.p_r_min), 0.25);
}

double rcs_dbsm_at(const RcsTable& table, double angle_deg)
{
    if (table.empty()) throw std::invalid_argument("empty RCS table");
    if (angle_deg <= table.front().first) return table.front().second;
    if (angle_deg >= table.back().first) return table.back().second;
    auto hi = std::lower_bound(table.begin(), table.end(), angle_deg,
                               [](const auto& p, double a) { return p.first < a; });
    auto lo = hi - 1;
    const double w = (angle_deg - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

RcsTable load_rcs_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open RCS table " + path);
    RcsTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        ss.imbue(std::locale::classic());
        double a = 0.0, v = 0.0;
        if (!(ss >> a >> v)) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("malformed RCS row in " + path + ": " + line);
        }
        first = false;
        t.emplace_back(a, v);
    }
    std::sort(t.begin(), t.end());
    if (t.empty()) throw std::runtime_error("RCS table " + path + " has no rows");
    return t;
}

std::vector<RangeAtAngle> range_vs_angle(const LinkBudget& b, const RcsTable& table,
                                         const std::vector<double>& angles_deg)
{
    std::vector<RangeAtAngle> out;
    out.reserve(angles_deg.size());
    for (double a : angles_deg) {
        LinkBudget bb = b;
        const double dbsm = rcs_dbsm_at(table, a);
        bb.sigma = db_to_linear(dbsm);
        out.push_back({a, dbsm, max_range(bb)});
    }
    return out;
}

std::vector<RangeAtAngle> range_vs_angle(const LinkBudget& b, const RcsTable& table)
{
    std::vector<double> angles;
    angles.reserve(table.size());
    for (const auto& p : table) angles.push_back(p.first);
    return range_vs_angle(b, table, angles);
}

double coverage_width_deg(const std::vector<RangeAtAngle>& curve, double fraction)
{
    if (curve.empty()) return 0.0;
    auto peak = std::max_element(curve.begin(), curve.end(),
                                 [](const auto& a, const auto& b) { return a.range_m < b.range_m; });
    const double level = fraction * peak->range_m;
    // Walk outwards from the peak; interpolate the crossing on each side.
    auto crossing = [&](int dir) {
        auto i = static_cast<std::ptrdiff_t>(peak - curve.begin());
        const auto n = static_cast<std::ptrdiff_t>(curve.size());
        while (true) {
            const std::ptrdiff_t j = i + dir;
            if (j < 0 || j >= n) return curve[static_cast<std::size_t>(i)].angle_deg;
            const auto& a = curve[static_cast<std::size_t>(i)];
            const auto& b = curve[static_cast<std::size_t>(j)];
            if (b.range_m < level) {
                const double w = (a.range_m - level) / (a.range_m - b.range_m);
                return a.angle_deg + w * (b.angle_deg - a.angle_deg);
            }
            i = j;
        }
    };
    return crossing(1) - crossing(-1);
}

nlohmann::json design_report(const nlohmann::json& doc, const std::string& base_dir)
{
    schema::reject_unknown_keys(doc, {"lens", "budget", "rcs_tables", "angles_deg"}, "");
    nlohmann::json out = nlohmann::json::object();
    if (doc.contains("lens")) {
        const auto& j = doc["lens"];
        schema::reject_unknown_keys(j, {"focal_length_m", "half_extent_m", "epsilon_r"}, "lens");
        LensDesign d{schema::number(j, "focal_length_m", "lens"), schema::number(j, "half_extent_m", "lens"),
                     schema::number(j, "epsilon_r", "lens")};
        try {
            d.validate();
        } catch (const std::invalid_argument& e) {
            throw SchemaError("lens", e.what());
        }
        out["lens"] = {{"focal_length_m", d.focal_length},
                       {"half_extent_m", d.half_extent},
                       {"epsilon_r", d.epsilon_r},
                       {"field_of_view_deg", rad2deg(field_of_view(d))},
                       {"surface_radius_m", lens_radius(d)}};
    }
    LinkBudget b = reference_budget();
    const bool have_budget = doc.contains("budget");
    if (have_budget) {
        const auto& j = doc["budget"];
        schema::reject_unknown_keys(j, {"p_t_dbm", "p_r_min_dbm", "g_t_dbi", "g_r_dbi", "lambda_m", "sigma_m2"},
                                    "budget");
        b.p_t = dbm_to_watts(schema::number(j, "p_t_dbm", "budget"));
        b.p_r_min = dbm_to_watts(schema::number(j, "p_r_min_dbm", "budget"));
        b.g_t = db_to_linear(schema::number(j, "g_t_dbi", "budget"));
        b.g_r = db_to_linear(schema::number(j, "g_r_dbi", "budget"));
        b.lambda = schema::number(j, "lambda_m", "budget");
        b.sigma = schema::number_or(j, "sigma_m2", b.sigma, "budget");
        try {
            b.validate();
        } catch (const std::invalid_argument& e) {
            throw SchemaError("budget", e.what());
        }
        out["budget"] = {{"p_t_w", b.p_t},   {"p_r_min_w", b.p_r_min}, {"g_t", b.g_t},
                         {"g_r", b.g_r},     {"lambda_m", b.lambda},   {"sigma_m2", b.sigma},
                         {"max_range_m", max_range(b)}};
    }
    if (doc.contains("rcs_tables")) {
        const auto& tables = doc["rcs_tables"];
        if (!tables.is_object()) throw SchemaError("rcs_tables", "expected an object of name -> csv path");
        std::vector<double> angles;
        if (doc.contains("angles_deg")) {
            if (!doc["angles_deg"].is_array()) throw SchemaError("angles_deg", "expected an array");
            for (const auto& a : doc["angles_deg"]) {
                if (!a.is_number()) throw SchemaError("angles_deg", "expected numbers");
                angles.push_back(a.get<double>());
            }
        }
        nlohmann::json curves = nlohmann::json::object();
        for (const auto& [name, path] : tables.items()) {
            if (!path.is_string()) throw SchemaError(schema::join("rcs_tables", name), "expected a file path");
            std::filesystem::path p(path.get<std::string>());
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            const RcsTable t = load_rcs_csv(p.string());
            const auto curve = angles.empty() ? range_vs_angle(b, t) : range_vs_angle(b, t, angles);
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& r : curve) rows.push_back({r.angle_deg, r.rcs_dbsm, r.range_m});
            curves[name] = {{"columns", {"angle_deg", "rcs_dbsm", "range_m"}},
                            {"rows", rows},
                            {"coverage_50pct_deg", coverage_width_deg(curve, 0.5)}};
        }
        out["range_vs_angle"] = curves;
    }
    if (!have_budget) out["reference_max_range_m"] = max_range(b);
    return out;
}

}  // namespace dragonfly
