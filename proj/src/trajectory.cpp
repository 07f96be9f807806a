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

#include "dragonfly/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dragonfly/errors.hpp"

namespace dragonfly {

namespace {

constexpr double kTimeSlack = 1e-9;

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
        throw SchemaError(path, "expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

Spherical to_spherical(const Vec3& p)
{
    Spherical s;
    s.range = p.norm();
    s.azimuth = std::atan2(p.y(), p.x());
    s.elevation = s.range > 0.0 ? std::asin(std::clamp(p.z() / s.range, -1.0, 1.0)) : 0.0;
    return s;
}

Vec3 to_cartesian(const Spherical& s)
{
    const double ce = std::cos(s.elevation);
    return {s.range * ce * std::cos(s.azimuth), s.range * ce * std::sin(s.azimuth), s.range * std::sin(s.elevation)};
}

Trajectory::Trajectory(Kind kind, std::vector<Segment> segments, nlohmann::json source)
    : kind_(kind), segments_(std::move(segments)), source_(std::move(source))
{
    if (segments_.empty()) throw std::invalid_argument("Trajectory: no segments");
}

Trajectory Trajectory::constant(const Vec3& position)
{
    Segment s{0.0, std::numeric_limits<double>::infinity(), position, Vec3::Zero(), Vec3::Zero()};
    return Trajectory(Kind::constant, {s}, {{"type", "static"}, {"position", vec_json(position)}});
}

Trajectory Trajectory::constant_velocity(const Vec3& start, const std::vector<VelocityLeg>& legs)
{
    if (legs.empty()) throw std::invalid_argument("Trajectory: constant_velocity needs at least one leg");
    std::vector<Segment> segs;
    nlohmann::json jl = nlohmann::json::array();
    double t = 0.0;
    Vec3 p = start;
    for (const auto& leg : legs) {
        if (!(leg.duration > 0.0)) throw std::invalid_argument("Trajectory: leg duration must be positive");
        segs.push_back({t, t + leg.duration, p, leg.velocity, Vec3::Zero()});
        p += leg.velocity * leg.duration;
        t += leg.duration;
        jl.push_back({{"duration", leg.duration}, {"velocity", vec_json(leg.velocity)}});
    }
    return Trajectory(Kind::constant_velocity, std::move(segs),
                      {{"type", "constant_velocity"}, {"start", vec_json(start)}, {"legs", jl}});
}

Trajectory Trajectory::constant_acceleration(const Vec3& start, const Vec3& initial_velocity,
                                             const std::vector<AccelerationLeg>& legs)
{
    if (legs.empty()) throw std::invalid_argument("Trajectory: constant_acceleration needs at least one leg");
    std::vector<Segment> segs;
    nlohmann::json jl = nlohmann::json::array();
    double t = 0.0;
    Vec3 p = start;
    Vec3 v = initial_velocity;
    for (const auto& leg : legs) {
        if (!(leg.duration > 0.0)) throw std::invalid_argument("Trajectory: leg duration must be positive");
        segs.push_back({t, t + leg.duration, p, v, leg.acceleration});
        p += v * leg.duration + 0.5 * leg.acceleration * leg.duration * leg.duration;
        v += leg.acceleration * leg.duration;
        t += leg.duration;
        jl.push_back({{"duration", leg.duration}, {"acceleration", vec_json(leg.acceleration)}});
    }
    return Trajectory(Kind::constant_acceleration, std::move(segs),
                      {{"type", "constant_acceleration"},
                       {"start", vec_json(start)},
                       {"initial_velocity", vec_json(initial_velocity)},
                       {"legs", jl}});
}

Trajectory Trajectory::waypoints(const std::vector<Waypoint>& points)
{
    if (points.size() < 2) throw std::invalid_argument("Trajectory: waypoints need at least two points");
    std::vector<Segment> segs;
    nlohmann::json jp = nlohmann::json::array();
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double dt = points[i + 1].t - points[i].t;
        if (!(dt > 0.0)) throw std::invalid_argument("Trajectory: waypoint times must increase");
        segs.push_back(
            {points[i].t, points[i + 1].t, points[i].position, (points[i + 1].position - points[i].position) / dt,
             Vec3::Zero()});
    }
    for (const auto& p : points)
        jp.push_back({p.t, p.position.x(), p.position.y(), p.position.z()});
    return Trajectory(Kind::waypoints, std::move(segs), {{"type", "waypoints"}, {"points", jp}});
}

bool Trajectory::defined_at(double t) const
{
    return t >= start_time() - kTimeSlack && t <= end_time() + kTimeSlack;
}

const Trajectory::Segment& Trajectory::segment_at(double t) const
{
    if (!defined_at(t)) throw std::domain_error("Trajectory: time " + std::to_string(t) + " s outside definition");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double tt, const Segment& s) { return tt < s.t0; });
    if (it == segments_.begin()) return segments_.front();
    return *std::prev(it);
}

Vec3 Trajectory::position(double t) const
{
    const auto& s = segment_at(t);
    const double dt = t - s.t0;
    return s.p0 + s.v0 * dt + 0.5 * s.a0 * dt * dt;
}

Vec3 Trajectory::velocity(double t) const
{
    const auto& s = segment_at(t);
    return s.v0 + s.a0 * (t - s.t0);
}

Vec3 Trajectory::acceleration(double t) const { return segment_at(t).a0; }

double Trajectory::radial_velocity(double t) const
{
    const Vec3 p = position(t);
    const double r = p.norm();
    return r > 0.0 ? p.dot(velocity(t)) / r : 0.0;
}

double Trajectory::radial_acceleration(double t) const
{
    const Vec3 p = position(t);
    const Vec3 v = velocity(t);
    const double r = p.norm();
    if (r == 0.0) return 0.0;
    const double pv = p.dot(v);
    return (v.squaredNorm() + p.dot(acceleration(t))) / r - pv * pv / (r * r * r);
}

nlohmann::json Trajectory::to_json() const { return source_; }

Trajectory Trajectory::from_json(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    const auto& type = schema::require(j, "type", path);
    if (!type.is_string()) throw SchemaError(schema::join(path, "type"), "expected a string");
    const auto kind = type.get<std::string>();
    try {
        if (kind == "static") {
            schema::reject_unknown_keys(j, {"type", "position"}, path);
            return constant(vec_from_json(schema::require(j, "position", path), schema::join(path, "position")));
        }
        if (kind == "constant_velocity") {
            schema::reject_unknown_keys(j, {"type", "start", "legs"}, path);
            std::vector<VelocityLeg> legs;
            const auto& jl = schema::require(j, "legs", path);
            if (!jl.is_array()) throw SchemaError(schema::join(path, "legs"), "expected an array");
            for (std::size_t i = 0; i < jl.size(); ++i) {
                const auto lp = schema::join(path, "legs[" + std::to_string(i) + "]");
                schema::reject_unknown_keys(jl[i], {"duration", "velocity"}, lp);
                legs.push_back({schema::number(jl[i], "duration", lp),
                                vec_from_json(schema::require(jl[i], "velocity", lp), schema::join(lp, "velocity"))});
            }
            return constant_velocity(vec_from_json(schema::require(j, "start", path), schema::join(path, "start")),
                                     legs);
        }
        if (kind == "constant_acceleration") {
            schema::reject_unknown_keys(j, {"type", "start", "initial_velocity", "legs"}, path);
            std::vector<AccelerationLeg> legs;
            const auto& jl = schema::require(j, "legs", path);
            if (!jl.is_array()) throw SchemaError(schema::join(path, "legs"), "expected an array");
            for (std::size_t i = 0; i < jl.size(); ++i) {
                const auto lp = schema::join(path, "legs[" + std::to_string(i) + "]");
                schema::reject_unknown_keys(jl[i], {"duration", "acceleration"}, lp);
                legs.push_back(
                    {schema::number(jl[i], "duration", lp),
                     vec_from_json(schema::require(jl[i], "acceleration", lp), schema::join(lp, "acceleration"))});
            }
            Vec3 v0 = Vec3::Zero();
            if (j.contains("initial_velocity"))
                v0 = vec_from_json(j["initial_velocity"], schema::join(path, "initial_velocity"));
            return constant_acceleration(
                vec_from_json(schema::require(j, "start", path), schema::join(path, "start")), v0, legs);
        }
        if (kind == "waypoints") {
            schema::reject_unknown_keys(j, {"type", "points"}, path);
            const auto& jp = schema::require(j, "points", path);
            if (!jp.is_array()) throw SchemaError(schema::join(path, "points"), "expected an array");
            std::vector<Waypoint> pts;
            for (std::size_t i = 0; i < jp.size(); ++i) {
                const auto& e = jp[i];
                if (!e.is_array() || e.size() != 4)
                    throw SchemaError(schema::join(path, "points[" + std::to_string(i) + "]"), "expected [t, x, y, z]");
                pts.push_back({e[0].get<double>(), {e[1].get<double>(), e[2].get<double>(), e[3].get<double>()}});
            }
            return waypoints(pts);
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, e.what());
    }
    throw SchemaError(schema::join(path, "type"), "unknown trajectory type '" + kind + "'");
}

}  // namespace dragonfly
