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

#include <cmath>
#include <numbers>

namespace dragonfly {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, used everywhere
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces x into [0, period).
inline double wrap_mod(double x, double period)
{
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

/// Reduces x into [-period/2, period/2).
inline double wrap_centered(double x, double period)
{
    return wrap_mod(x + 0.5 * period, period) - 0.5 * period;
}

/// Reduces an angle into [-pi, pi).
inline double wrap_to_pi(double x) { return wrap_centered(x, kTwoPi); }

/// Shortest distance between two points on a circle of the given circumference.
inline double circular_distance(double a, double b, double period = kTwoPi)
{
    return std::abs(wrap_centered(a - b, period));
}

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Power ratios.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace dragonfly
