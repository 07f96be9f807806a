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

#include "dragonfly/kalman.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace dragonfly {

void Kalman2::predict(const Mat& f, const Mat& q)
{
    x_ = f * x_;
    p_ = f * p_ * f.transpose() + q;
    p_ = 0.5 * (p_ + p_.transpose());
}

double Kalman2::log_likelihood(const Row& h, double z, double r) const
{
    const double s = innovation_variance(h, r);
    const double y = innovation(h, z);
    return -0.5 * (y * y / s + std::log(2.0 * std::numbers::pi * s));
}

void Kalman2::update(const Row& h, double z, double r)
{
    const double s = innovation_variance(h, r);
    const Vec k = p_ * h.transpose() / s;
    x_ += k * innovation(h, z);
    const Mat a = Mat::Identity() - k * h;
    p_ = a * p_ * a.transpose() + k * r * k.transpose();
    p_ = 0.5 * (p_ + p_.transpose());
}

bool Kalman2::positive_definite() const
{
    return p_(0, 0) > 0.0 && p_.determinant() > 0.0 && std::isfinite(p_.sum());
}

}  // namespace dragonfly
