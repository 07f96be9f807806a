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

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dragonfly/chirp2d.hpp"
#include "dragonfly/kalman.hpp"
#include "dragonfly/options.hpp"
#include "dragonfly/radar_config.hpp"

namespace dragonfly {

/// A predecessor chirp needed by the alpha/beta recurrences is missing.
class GapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lost the elevation track (|sin| would exceed 1).
class TrackingLost : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// (phi_plus - phi_minus) / 2 reduced into [0, pi).
double radial_phase(double phi_plus, double phi_minus);
double radial_phase(const Detection& det);

/// Input to the tracker: one chirp's radial phase and range.
struct PhaseSample {
    long k = 0;
    double t = 0.0;
    double phi_r = 0.0;
    double range = 0.0;
};

struct PhaseRecord {
    long k = 0;               // chirp that completed the estimate
    long ref_k = 0;           // chirp the elevation refers to (k - 1)
    double t_ref = 0.0;
    double phi_r = 0.0;       // after any outlier repair
    double alpha = 0.0;
    std::array<double, 2> beta_candidates{};
    double beta_chosen = 0.0; // in [0, 2 pi)
    double delta = 0.0;       // in [0, pi)
    double delta_unwrapped = 0.0;
    double elevation = 0.0;   // rad
    double v_r_est = 0.0;     // m/s, reduced modulo the unambiguous span
    bool valid = false;
    bool exception = false;   // the likelihood handler made the choice
    bool outlier = false;     // the chirp's phase was replaced by the prediction
    bool ambiguous = false;   // the trajectory prior could not separate the two options
};

struct PhaseSeries {
    std::vector<PhaseRecord> records;
    int trajectory = 0;         // 0: first candidate chain, 1: pi-shifted chain
    bool trajectory_ambiguous = false;
    std::size_t exceptions = 0;
    std::size_t outliers = 0;
    std::size_t gaps = 0;

    const PhaseRecord* find(long k) const;
};

/// Radial phases indexed by chirp; missing chirps are NaN.
struct PhaseHistory {
    long first_k = 0;
    std::vector<double> phi;

    bool has(long k) const;
    double at(long k) const;
    void set(long k, double v);
};

struct AlphaBeta {
    double alpha = 0.0;                // in [0, pi), parity sign applied
    std::array<double, 2> beta{};      // beta mod pi and that plus pi
};

/// Throws GapError when chirp k-1 or k-2 is missing.
AlphaBeta alpha_beta(const PhaseHistory& phases, long k);

/// Index of the candidate within pi/2 of `previous` on the 2 pi circle.
int choose_by_proximity(const std::array<double, 2>& candidates, double previous);

/// delta from alpha and a chosen beta for chirp parity k % 2, reduced to [0, pi).
double delta_from(long k, double alpha, double beta);

/// asin(delta * lambda / (2 pi d_tx)); throws TrackingLost outside [-1, 1].
double elevation_from_delta(const RadarConfig& cfg, double delta_unwrapped);

/// Half-width in sin(elevation) of the principal interval, lambda / (4 d_tx).
double principal_sine(const RadarConfig& cfg);

/// Information handed to a user-supplied trajectory prior.
struct PriorContext {
    double velocity_span = 0.0;     // m/s covered by 2 pi of beta
    double chain_velocity = 0.0;    // first chain's velocity at the window centre, reduced
    double range_rate = 0.0;        // least-squares slope of range over the window
    double window_centre_t = 0.0;
};

struct ExceptionState {
    Kalman2 kf_radial; // [v_R, a_R]
    Kalman2 kf_elev;   // [elevation, elevation rate]
    double accel_threshold = 0.0;
    double sigma_accel = 0.0;
    double sigma_velocity = 0.0;   // measurement noise of the beta-derived velocity
    double sigma_elev_accel = 0.0;
    double outlier_nis = 13.8;
};

/// Velocity and elevation implied by one beta hypothesis.
struct Hypothesis {
    double velocity = 0.0;
    double elevation = 0.0;
    double sigma_elevation = 0.0;
};

struct ExceptionDecision {
    int choice = -1;                 // -1: reject the chirp as an outlier
    std::array<double, 2> log_score{};
    std::array<double, 2> nis{};
    bool tie = false;
};

/// Scores both hypotheses under the filters' predictive densities (filters
/// must already be predicted to this chirp). Ties fall back to `proximity`.
ExceptionDecision handle_exception(const ExceptionState& state, double tx_period,
                                   const std::array<Hypothesis, 2>& hyp, int proximity);

/**
 * Sequential elevation tracker for one tag.
 *
 * Samples must arrive in increasing k. The first prior_window samples are
 * buffered until the trajectory prior has picked one of the two candidate
 * chains; they are then replayed and later samples are processed as they come.
 */
class ElevationTracker {
public:
    ElevationTracker(const RadarConfig& cfg, ElevationOptions opt);
    /// Carrier used to turn beta into velocity; defaults to the mid-chirp frequency.
    ElevationTracker(const RadarConfig& cfg, ElevationOptions opt, double carrier_hz);

    void push(const PhaseSample& s);
    PhaseSeries finalize();

    bool decided() const { return decided_; }
    const ExceptionState& exception_state() const { return chain_.state; }

private:
    struct Chain {
        bool started = false;
        bool anchored = false;
        bool kf_ready = false;
        std::size_t updates = 0;
        long last_k = 0;
        double last_beta = 0.0;
        double beta_unwrapped = 0.0;
        double last_delta_unwrapped = 0.0;
        std::vector<std::pair<long, double>> betas; // recent (k, chosen beta)
        ExceptionState state;
    };

    void decide();
    void reset_chain();
    void step(long k);
    std::optional<double> chosen_beta(long k) const;

    RadarConfig cfg_;
    ElevationOptions opt_;
    double carrier_;
    double k_beta_;   // rad of beta per m/s
    double lambda_;
    std::vector<PhaseSample> samples_;
    PhaseHistory raw_;
    PhaseHistory phases_;
    bool decided_ = false;
    int flip_ = 0;
    bool ambiguous_ = false;
    Chain chain_;
    PhaseSeries series_;
};

/// Runs the tracker over a finished list of samples.
PhaseSeries track_elevation(const RadarConfig& cfg, const std::vector<PhaseSample>& samples,
                            const ElevationOptions& opt);

/// Proximity-only chain with no acceleration term and no exception handler.
PhaseSeries disambiguate_constant_velocity(const RadarConfig& cfg, const std::vector<PhaseSample>& samples,
                                           ElevationOptions opt = {});

/// Proximity chain with the acceleration term, exception handler off.
PhaseSeries disambiguate_accelerating(const RadarConfig& cfg, const std::vector<PhaseSample>& samples,
                                      ElevationOptions opt = {});

/// Elevation that ignores beta (delta = alpha), unwrapped from the principal interval.
std::vector<double> beta_ignored_elevation(const RadarConfig& cfg, const PhaseSeries& series);

}  // namespace dragonfly
