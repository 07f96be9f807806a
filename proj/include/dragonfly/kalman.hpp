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

#include <Eigen/Core>

namespace dragonfly {

/// Two-state linear Kalman filter with scalar measurements.
class Kalman2 {
public:
    using Vec = Eigen::Vector2d;
    using Mat = Eigen::Matrix2d;
    using Row = Eigen::RowVector2d;

    Kalman2() = default;
    Kalman2(const Vec& x0, const Mat& p0) : x_(x0), p_(p0) {}

    void predict(const Mat& f, const Mat& q);

    /// Innovation mean and variance of measurement z = H x + noise(r).
    double innovation(const Row& h, double z) const { return z - h.dot(x_); }
    double innovation_variance(const Row& h, double r) const { return h * p_ * h.transpose() + r; }

    /// Log of the Gaussian predictive density of z.
    double log_likelihood(const Row& h, double z, double r) const;

    /// Joseph-form update; keeps P symmetric positive-definite.
    void update(const Row& h, double z, double r);

    const Vec& state() const { return x_; }
    const Mat& covariance() const { return p_; }
    void shift_state(const Vec& dx) { x_ += dx; }
    bool positive_definite() const;

private:
    Vec x_ = Vec::Zero();
    Mat p_ = Mat::Identity();
};

}  // namespace dragonfly
