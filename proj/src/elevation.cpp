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

#include "dragonfly/elevation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dragonfly/phase.hpp"

namespace dragonfly {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Kalman2::Mat transition(double dt)
{
    Kalman2::Mat f;
    f << 1.0, dt, 0.0, 1.0;
    return f;
}

// Random-walk acceleration for the (v, a) filter, G = [dt, 1]^T.
Kalman2::Mat process_noise(double dt, double sigma)
{
    Kalman2::Vec g(dt, 1.0);
    return sigma * sigma * g * g.transpose();
}

// White acceleration for the (angle, rate) filter, G = [dt^2/2, dt]^T.
Kalman2::Mat rate_process_noise(double dt, double sigma)
{
    Kalman2::Vec g(0.5 * dt * dt, dt);
    return sigma * sigma * g * g.transpose();
}

// Removes the residual second-difference (radial acceleration) term from delta.
double compensate(long k, double delta, double beta, std::optional<double> beta_km2)
{
    if (!beta_km2) return delta;
    const double d2 = wrap_to_pi(beta - *beta_km2) / 8.0;
    return wrap_mod(k % 2 != 0 ? delta - d2 : delta + d2, kPi);
}

double unwrap_near(double value, double reference, double period)
{
    return value + period * std::round((reference - value) / period);
}

}  // namespace

double radial_phase(double phi_plus, double phi_minus) { return wrap_mod(0.5 * (phi_plus - phi_minus), kPi); }

double radial_phase(const Detection& det) { return radial_phase(det.phi_plus, det.phi_minus); }

const PhaseRecord* PhaseSeries::find(long k) const
{
    auto it = std::lower_bound(records.begin(), records.end(), k,
                               [](const PhaseRecord& r, long kk) { return r.k < kk; });
    return it != records.end() && it->k == k ? &*it : nullptr;
}

bool PhaseHistory::has(long k) const
{
    if (phi.empty() || k < first_k || k >= first_k + static_cast<long>(phi.size())) return false;
    return !std::isnan(phi[static_cast<std::size_t>(k - first_k)]);
}

double PhaseHistory::at(long k) const
{
    if (!has(k)) throw GapError("no radial phase for chirp " + std::to_string(k));
    return phi[static_cast<std::size_t>(k - first_k)];
}

void PhaseHistory::set(long k, double v)
{
    if (phi.empty()) first_k = k;
    if (k < first_k) {
        phi.insert(phi.begin(), static_cast<std::size_t>(first_k - k), kNaN);
        first_k = k;
    }
    const auto idx = static_cast<std::size_t>(k - first_k);
    if (idx >= phi.size()) phi.resize(idx + 1, kNaN);
    phi[idx] = v;
}

AlphaBeta alpha_beta(const PhaseHistory& phases, long k)
{
    if (!phases.has(k) || !phases.has(k - 1) || !phases.has(k - 2))
        throw GapError("chirp " + std::to_string(k) + " lacks a predecessor");
    const double p0 = phases.at(k), p1 = phases.at(k - 1), p2 = phases.at(k - 2);
    AlphaBeta ab;
    ab.alpha = wrap_mod(k % 2 != 0 ? p0 - p1 : p1 - p0, kPi);
    const double b = wrap_mod(p0 - p2, kPi);
    ab.beta = {b, b + kPi};
    return ab;
}

int choose_by_proximity(const std::array<double, 2>& c, double previous)
{
    return circular_distance(c[1], previous) < circular_distance(c[0], previous) ? 1 : 0;
}

double delta_from(long k, double alpha, double beta)
{
    return wrap_mod(k % 2 != 0 ? alpha - 0.5 * beta : alpha + 0.5 * beta, kPi);
}

double principal_sine(const RadarConfig& cfg) { return wavelength(cfg) / (4.0 * cfg.d_tx); }

double elevation_from_delta(const RadarConfig& cfg, double delta_unwrapped)
{
    const double s = delta_unwrapped * wavelength(cfg) / (kTwoPi * cfg.d_tx);
    if (!(std::abs(s) <= 1.0)) throw TrackingLost("elevation phase outside the visible region");
    return std::asin(s);
}

ExceptionDecision handle_exception(const ExceptionState& st, double tx_period, const std::array<Hypothesis, 2>& hyp,
                                   int proximity)
{
    ExceptionDecision d;
    const Kalman2::Row hr(1.0, -tx_period);
    const Kalman2::Row he(1.0, 0.0);
    const double rv = st.sigma_velocity * st.sigma_velocity;
    for (int i = 0; i < 2; ++i) {
        const double re = hyp[i].sigma_elevation * hyp[i].sigma_elevation;
        const double yr = st.kf_radial.innovation(hr, hyp[i].velocity);
        const double ye = st.kf_elev.innovation(he, hyp[i].elevation);
        d.nis[i] = yr * yr / st.kf_radial.innovation_variance(hr, rv) + ye * ye / st.kf_elev.innovation_variance(he, re);
        d.log_score[i] =
            st.kf_radial.log_likelihood(hr, hyp[i].velocity, rv) + st.kf_elev.log_likelihood(he, hyp[i].elevation, re);
    }
    const double scale = std::max({1.0, std::abs(d.log_score[0]), std::abs(d.log_score[1])});
    int best;
    if (std::abs(d.log_score[0] - d.log_score[1]) <= 1e-12 * scale) {
        d.tie = true;
        best = proximity;
    } else {
        best = d.log_score[1] > d.log_score[0] ? 1 : 0;
    }
    d.choice = d.nis[best] > st.outlier_nis ? -1 : best;
    return d;
}

ElevationTracker::ElevationTracker(const RadarConfig& cfg, ElevationOptions opt)
    : ElevationTracker(cfg, std::move(opt), mid_chirp_frequency(cfg))
{
}

ElevationTracker::ElevationTracker(const RadarConfig& cfg, ElevationOptions opt, double carrier_hz)
    : cfg_(cfg), opt_(std::move(opt)), carrier_(carrier_hz)
{
    k_beta_ = 8.0 * kPi * carrier_ * cfg_.tx_period / kSpeedOfLight;
    lambda_ = wavelength(cfg_);
    reset_chain();
}

void ElevationTracker::reset_chain()
{
    chain_ = Chain{};
    const double amax = max_acceleration(cfg_);
    chain_.state.accel_threshold = opt_.accel_threshold_fraction * amax;
    chain_.state.sigma_accel = opt_.sigma_accel_fraction * amax;
    chain_.state.sigma_velocity = opt_.sigma_beta_rad / k_beta_;
    chain_.state.sigma_elev_accel = opt_.sigma_elevation_accel;
    chain_.state.outlier_nis = opt_.outlier_nis;
    series_ = PhaseSeries{};
}

std::optional<double> ElevationTracker::chosen_beta(long k) const
{
    for (auto it = chain_.betas.rbegin(); it != chain_.betas.rend(); ++it)
        if (it->first == k) return it->second;
    return std::nullopt;
}

void ElevationTracker::push(const PhaseSample& s)
{
    if (!samples_.empty() && s.k <= samples_.back().k)
        throw std::invalid_argument("ElevationTracker: samples must arrive in increasing chirp order");
    samples_.push_back(s);
    raw_.set(s.k, wrap_mod(s.phi_r, kPi));
    phases_.set(s.k, wrap_mod(s.phi_r, kPi));
    if (!decided_) {
        if (samples_.size() >= opt_.prior_window) decide();
        return;
    }
    step(s.k);
}

void ElevationTracker::decide()
{
    auto replay = [this](int flip) {
        flip_ = flip;
        reset_chain();
        phases_ = raw_;
        for (const auto& s : samples_) step(s.k);
    };
    replay(0);

    const double span = kTwoPi / k_beta_;
    int flip = 0;
    ambiguous_ = false;
    if (!series_.records.empty() && samples_.size() >= 2) {
        // Least-squares range rate over the buffered window.
        const double n = static_cast<double>(samples_.size());
        double tm = 0.0, rm = 0.0;
        for (const auto& s : samples_) {
            tm += s.t;
            rm += s.range;
        }
        tm /= n;
        rm /= n;
        double num = 0.0, den = 0.0;
        for (const auto& s : samples_) {
            num += (s.t - tm) * (s.range - rm);
            den += (s.t - tm) * (s.t - tm);
        }
        const double rate = den > 0.0 ? num / den : 0.0;
        const PhaseRecord* centre = &series_.records.front();
        for (const auto& r : series_.records)
            if (std::abs(r.t_ref - tm) < std::abs(centre->t_ref - tm)) centre = &r;
        const double v0 = wrap_centered(centre->beta_chosen / k_beta_, span);
        const double v1 = wrap_centered(v0 + 0.5 * span, span);
        double d0 = 0.0, d1 = 0.0;
        switch (opt_.prior) {
        case TrajectoryPrior::range_rate:
            d0 = circular_distance(rate, v0, span);
            d1 = circular_distance(rate, v1, span);
            flip = d1 < d0 ? 1 : 0;
            break;
        case TrajectoryPrior::min_speed:
            d0 = std::abs(v0);
            d1 = std::abs(v1);
            flip = d1 < d0 ? 1 : 0;
            break;
        case TrajectoryPrior::custom:
            if (!opt_.custom_prior) throw std::invalid_argument("ElevationTracker: custom prior without a callback");
            flip = opt_.custom_prior(PriorContext{span, v0, rate, tm}) != 0 ? 1 : 0;
            d0 = 0.0;
            d1 = span;
            break;
        }
        ambiguous_ = std::abs(d0 - d1) < 0.05 * span;
    }
    decided_ = true;
    if (flip != 0) replay(flip);
    else flip_ = 0;
}

void ElevationTracker::step(long k)
{
    AlphaBeta ab;
    try {
        ab = alpha_beta(phases_, k);
    } catch (const GapError&) {
        ++series_.gaps;
        return;
    }
    Chain& c = chain_;
    const double T = cfg_.tx_period;
    PhaseRecord r;
    r.k = k;
    r.ref_k = k - 1;
    r.t_ref = static_cast<double>(k - 1) * T;

    int choice = c.started ? choose_by_proximity(ab.beta, c.last_beta) : flip_;

    if (c.kf_ready) {
        for (long i = c.last_k; i < k; ++i) {
            c.state.kf_radial.predict(transition(T), process_noise(T, c.state.sigma_accel));
            c.state.kf_elev.predict(transition(T), rate_process_noise(T, c.state.sigma_elev_accel));
        }
    }

    const Kalman2::Row hr(1.0, -T);
    if (opt_.exception_handler && c.kf_ready && c.updates >= opt_.kf_warmup) {
        const double a_pred = c.state.kf_radial.state()(1);
        const double gap = static_cast<double>(k - c.last_k);
        const double a_obs = wrap_to_pi(ab.beta[choice] - c.last_beta) / (k_beta_ * T * gap);
        if (std::abs(a_pred) > c.state.accel_threshold || std::abs(a_obs) > c.state.accel_threshold) {
            const double v_pred = hr.dot(c.state.kf_radial.state());
            const double phi_pred = c.state.kf_elev.state()(0);
            const double delta_pred = kTwoPi * cfg_.d_tx * std::sin(phi_pred) / lambda_;
            std::array<Hypothesis, 2> hyp;
            for (int i = 0; i < 2; ++i) {
                const double b = unwrap_near(ab.beta[i], v_pred * k_beta_, kTwoPi);
                hyp[i].velocity = b / k_beta_;
                double d = delta_from(k, ab.alpha, ab.beta[i]);
                if (opt_.accel_compensation) d = compensate(k, d, ab.beta[i], chosen_beta(k - 2));
                d = unwrap_near(d, delta_pred, kPi);
                const double s = std::clamp(d * lambda_ / (kTwoPi * cfg_.d_tx), -1.0, 1.0);
                hyp[i].elevation = std::asin(s);
                hyp[i].sigma_elevation =
                    opt_.sigma_delta_rad * lambda_ / (kTwoPi * cfg_.d_tx * std::max(std::cos(hyp[i].elevation), 1e-3));
            }
            const auto dec = handle_exception(c.state, T, hyp, choice);
            if (dec.choice < 0) {
                const double beta_pred = wrap_mod(v_pred * k_beta_, kTwoPi);
                phases_.set(k, wrap_mod(phases_.at(k - 2) + beta_pred, kPi));
                ab = alpha_beta(phases_, k);
                choice = choose_by_proximity(ab.beta, beta_pred);
                r.outlier = true;
                ++series_.outliers;
            } else {
                choice = dec.choice;
                r.exception = true;
                ++series_.exceptions;
            }
        }
    }

    const double beta = ab.beta[choice];
    double delta = delta_from(k, ab.alpha, beta);
    if (opt_.accel_compensation) delta = compensate(k, delta, beta, chosen_beta(k - 2));
    double delta_unw;
    if (!c.anchored) {
        delta_unw = wrap_centered(delta, kPi);
        c.anchored = true;
    } else {
        delta_unw = unwrap_near(delta, c.last_delta_unwrapped, kPi);
    }
    r.phi_r = phases_.at(k);
    r.alpha = ab.alpha;
    r.beta_candidates = ab.beta;
    r.beta_chosen = beta;
    r.delta = delta;
    r.delta_unwrapped = delta_unw;
    r.v_r_est = wrap_centered(beta / k_beta_, kTwoPi / k_beta_);
    r.ambiguous = ambiguous_;
    try {
        r.elevation = elevation_from_delta(cfg_, delta_unw);
        r.valid = true;
    } catch (const TrackingLost&) {
        r.elevation = kNaN;
        r.valid = false;
    }

    c.beta_unwrapped = c.started ? c.beta_unwrapped + wrap_to_pi(beta - c.last_beta) : beta;
    const double v_meas = c.beta_unwrapped / k_beta_;
    if (!c.kf_ready) {
        if (r.valid) {
            const double amax = max_acceleration(cfg_);
            Kalman2::Mat p0 = Kalman2::Mat::Zero();
            p0(0, 0) = c.state.sigma_velocity * c.state.sigma_velocity;
            p0(1, 1) = amax * amax;
            c.state.kf_radial = Kalman2(Kalman2::Vec(v_meas, 0.0), p0);
            const double se = opt_.sigma_delta_rad * lambda_ / (kTwoPi * cfg_.d_tx);
            Kalman2::Mat e0 = Kalman2::Mat::Zero();
            e0(0, 0) = se * se;
            e0(1, 1) = 1.0;
            c.state.kf_elev = Kalman2(Kalman2::Vec(r.elevation, 0.0), e0);
            c.kf_ready = true;
            c.updates = 1;
        }
    } else if (!r.outlier && r.valid) {
        c.state.kf_radial.update(hr, v_meas, c.state.sigma_velocity * c.state.sigma_velocity);
        const double se = opt_.sigma_delta_rad * lambda_ /
                          (kTwoPi * cfg_.d_tx * std::max(std::cos(r.elevation), 1e-3));
        c.state.kf_elev.update(Kalman2::Row(1.0, 0.0), r.elevation, se * se);
        ++c.updates;
    }

    c.started = true;
    c.last_k = k;
    c.last_beta = beta;
    c.last_delta_unwrapped = delta_unw;
    c.betas.emplace_back(k, beta);
    if (c.betas.size() > 8) c.betas.erase(c.betas.begin());
    series_.records.push_back(r);
}

PhaseSeries ElevationTracker::finalize()
{
    if (!decided_ && !samples_.empty()) decide();
    series_.trajectory = flip_;
    series_.trajectory_ambiguous = ambiguous_;
    return series_;
}

PhaseSeries track_elevation(const RadarConfig& cfg, const std::vector<PhaseSample>& samples,
                            const ElevationOptions& opt)
{
    ElevationTracker t(cfg, opt);
    for (const auto& s : samples) t.push(s);
    return t.finalize();
}

PhaseSeries disambiguate_constant_velocity(const RadarConfig& cfg, const std::vector<PhaseSample>& samples,
                                           ElevationOptions opt)
{
    opt.exception_handler = false;
    opt.accel_compensation = false;
    return track_elevation(cfg, samples, opt);
}

PhaseSeries disambiguate_accelerating(const RadarConfig& cfg, const std::vector<PhaseSample>& samples,
                                      ElevationOptions opt)
{
    opt.exception_handler = false;
    opt.accel_compensation = true;
    return track_elevation(cfg, samples, opt);
}

std::vector<double> beta_ignored_elevation(const RadarConfig& cfg, const PhaseSeries& series)
{
    std::vector<double> out;
    out.reserve(series.records.size());
    bool anchored = false;
    double last = 0.0;
    for (const auto& r : series.records) {
        const double d = anchored ? unwrap_near(r.alpha, last, kPi) : wrap_centered(r.alpha, kPi);
        anchored = true;
        last = d;
        const double s = d * wavelength(cfg) / (kTwoPi * cfg.d_tx);
        out.push_back(std::abs(s) <= 1.0 ? std::asin(s) : kNaN);
    }
    return out;
}

}  // namespace dragonfly
