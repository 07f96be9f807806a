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

#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace dragonfly {

using Vec3 = Eigen::Vector3d;

/// Radar-centred spherical coordinates. x is boresight, y points left, z up;
/// azimuth is measured in the x-y plane and elevation from that plane.
struct Spherical {
    double range = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
};

Spherical to_spherical(const Vec3& p);
Vec3 to_cartesian(const Spherical& s);

/**
 * Piecewise-quadratic 3D trajectory relative to the radar at the origin.
 *
 * Every supported representation (static point, constant-velocity legs,
 * constant-acceleration legs, linearly interpolated waypoints) is stored as a
 * list of contiguous segments p(t) = p0 + v0 (t - t0) + a0 (t - t0)^2 / 2, so
 * position is continuous by construction.
 */
class Trajectory {
public:
    enum class Kind { constant, constant_velocity, constant_acceleration, waypoints };

    struct VelocityLeg {
        double duration;
        Vec3 velocity;
    };
    struct AccelerationLeg {
        double duration;
        Vec3 acceleration;
    };
    struct Waypoint {
        double t;
        Vec3 position;
    };
    struct Segment {
        double t0;
        double t1;
        Vec3 p0;
        Vec3 v0;
        Vec3 a0;
    };

    Trajectory() : Trajectory(constant(Vec3::Zero())) {}

    /// Defined for all t >= 0.
    static Trajectory constant(const Vec3& position);
    static Trajectory constant_velocity(const Vec3& start, const std::vector<VelocityLeg>& legs);
    static Trajectory constant_acceleration(const Vec3& start, const Vec3& initial_velocity,
                                            const std::vector<AccelerationLeg>& legs);
    static Trajectory waypoints(const std::vector<Waypoint>& points);

    Kind kind() const { return kind_; }
    double start_time() const { return segments_.front().t0; }
    double end_time() const { return segments_.back().t1; }
    bool defined_at(double t) const;

    /// All of these throw std::domain_error outside [start_time, end_time].
    Vec3 position(double t) const;
    Vec3 velocity(double t) const;
    Vec3 acceleration(double t) const;
    double radial_velocity(double t) const;
    double radial_acceleration(double t) const;

    const std::vector<Segment>& segments() const { return segments_; }

    nlohmann::json to_json() const;
    static Trajectory from_json(const nlohmann::json& j, const std::string& path);

private:
    Trajectory(Kind kind, std::vector<Segment> segments, nlohmann::json source);
    const Segment& segment_at(double t) const;

    Kind kind_;
    std::vector<Segment> segments_;
    nlohmann::json source_;
};

}  // namespace dragonfly
