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

#include "dragonfly/synth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "dragonfly/kernels.hpp"
#include "dragonfly/phase.hpp"

namespace dragonfly {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double cycles_to_rad(double cycles) { return kTwoPi * (cycles - std::floor(cycles)); }

double tag_amplitude(const Scenario& s, const Calibration& cal, const TagScenario& tag, const Vec3& p)
{
    const double r = p.norm();
    const double off_boresight = rad2deg(std::acos(std::clamp(p.x() / r, -1.0, 1.0)));
    const double rcs = tag.rcs * db_to_linear(table_gain_db(tag.rcs_gain_table, off_boresight));
    const double rr = s.reference_range_m / r;
    return cal.reference_amp * std::sqrt(rcs / s.reference_rcs) * rr * rr *
           std::pow(10.0, -tag.nlos_attenuation_db / 20.0);
}

}  // namespace

std::uint64_t chirp_seed(std::uint64_t seed, long k)
{
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(k)));
}

TagIfPhases tag_if_phases(const RadarConfig& cfg, const TagScenario& tag, long k)
{
    TagIfPhases ph;
    ph.t_start = static_cast<double>(k) * cfg.tx_period;
    const Vec3 p = tag.trajectory.position(ph.t_start);
    const double lambda = wavelength(cfg);
    ph.range = p.norm();
    ph.f_b = beat_frequency(cfg, ph.range);
    const double uy = ph.range > 0.0 ? p.y() / ph.range : 0.0;
    const double uz = ph.range > 0.0 ? p.z() / ph.range : 0.0;
    const double drift = tag.oscillator_drift_ppm_per_s * 1e-6;
    ph.f_m = tag.f_m * (1.0 + drift * ph.t_start);
    ph.phi_m = wrap_mod(cycles_to_rad(tag.f_m * (ph.t_start + 0.5 * drift * ph.t_start * ph.t_start)) + tag.phi_m0,
                        kTwoPi);
    double geo = cycles_to_rad(2.0 * ph.range * cfg.f0 / kSpeedOfLight);
    if (k % 2 != 0) geo += kTwoPi * cfg.d_tx * uz / lambda;
    ph.phi_geo = wrap_mod(geo, kTwoPi);
    ph.psi_plus = wrap_mod(ph.phi_m + ph.phi_geo, kTwoPi);
    ph.psi_minus = wrap_mod(ph.phi_m - ph.phi_geo, kTwoPi);
    ph.rx_step = kTwoPi * cfg.d_rx * uy / lambda;
    return ph;
}

Calibration calibrate(const Scenario& s)
{
    Calibration c;
    const double var = s.noise_floor_dbm ? std::pow(10.0, *s.noise_floor_dbm / 10.0) : 1.0;
    c.noise_sigma = s.noise_floor_dbm ? std::sqrt(var) : 0.0;
    const double snr = db_to_linear(s.snr_db);
    const double n = static_cast<double>(s.radar.n_rx);
    const double m = static_cast<double>(s.radar.samples_per_chirp);
    // Peak of |Y|^2 over its noise mean: A^2 N (M-1) / (6 var) for Hann, A^2 N M / (4 var) rectangular.
    if (s.pipeline.detector.window == WindowKind::hann) c.reference_amp = std::sqrt(6.0 * var * snr / (n * (m - 1.0)));
    else c.reference_amp = std::sqrt(4.0 * var * snr / (n * m));
    return c;
}

IfFrame synth_chirp(const RadarConfig& cfg, const Scenario& scenario, long k, std::uint64_t noise_seed, Exec exec)
{
    const Calibration cal = calibrate(scenario);
    const double t0 = static_cast<double>(k) * cfg.tx_period;
    IfFrame frame(k, static_cast<int>(k % 2), t0, cfg.n_rx, cfg.samples_per_chirp);
    const double nyquist = 0.5 * cfg.sample_rate;
    const double lambda = wavelength(cfg);

    std::vector<kernels::Tone> tones;
    std::vector<kernels::GatedTone> gated;
    for (const auto& tag : scenario.tags) {
        TagIfPhases ph = tag_if_phases(cfg, tag, k);
        const double amp = tag_amplitude(scenario, cal, tag, tag.trajectory.position(t0));
        double psi_p = ph.psi_plus;
        double psi_m = ph.psi_minus;
        double geo = ph.phi_geo;
        if (tag.phase_jitter_rad > 0.0) {
            std::mt19937_64 rng(splitmix64(noise_seed ^ (0xA5A5A5A5ULL + static_cast<std::uint64_t>(tag.tag_id))));
            const double j = std::normal_distribution<double>(0.0, tag.phase_jitter_rad)(rng);
            psi_p += j;
            psi_m -= j;
            geo += j;
        }
        if (std::binary_search(tag.phase_spike_chirps.begin(), tag.phase_spike_chirps.end(), k))
            psi_p += tag.phase_spike_rad;
        switch (tag.modulation_mode) {
        case ModulationMode::harmonic:
            tones.push_back({amp, ph.f_m + ph.f_b, psi_p, ph.rx_step});
            tones.push_back({amp, ph.f_m - ph.f_b, psi_m, -ph.rx_step});
            break;
        case ModulationMode::square: {
            // Scaled so the fundamental pair matches harmonic mode.
            tones.push_back({0.5 * kPi * amp, ph.f_b, geo, ph.rx_step});
            for (int h = 1; h * ph.f_m - ph.f_b < nyquist; h += 2) {
                const double c = (((h - 1) / 2) % 2 == 0 ? 1.0 : -1.0) / h;
                const double fp = h * ph.f_m + ph.f_b;
                const double base = static_cast<double>(h) * ph.phi_m;
                const double pp = h == 1 ? psi_p : base + geo;
                const double pm = h == 1 ? psi_m : base - geo;
                if (fp < nyquist) tones.push_back({amp * c, fp, pp, ph.rx_step});
                tones.push_back({amp * c, h * ph.f_m - ph.f_b, pm, -ph.rx_step});
            }
            break;
        }
        case ModulationMode::slow_time:
            gated.push_back({{kPi * amp, ph.f_b, geo, ph.rx_step}, ph.f_m, ph.phi_m});
            break;
        }
    }
    for (const auto& c : scenario.clutter) {
        const Vec3 p = c.position + c.velocity * t0;
        const double r = p.norm();
        const double rr = scenario.reference_range_m / r;
        double amp = cal.reference_amp * std::sqrt(c.rcs / scenario.reference_rcs) * rr * rr;
        if (c.co_polarized) amp *= std::pow(10.0, -cfg.clutter_suppression / 20.0);
        double geo = cycles_to_rad(2.0 * r * cfg.f0 / kSpeedOfLight);
        if (k % 2 != 0) geo += kTwoPi * cfg.d_tx * (p.z() / r) / lambda;
        tones.push_back({amp, beat_frequency(cfg, r), geo, kTwoPi * cfg.d_rx * (p.y() / r) / lambda});
    }

    std::vector<double> acc(cfg.n_rx * cfg.samples_per_chirp, 0.0);
    if (exec == Exec::serial)
        kernels::accumulate_tones_serial(tones, gated, cfg.sample_rate, cfg.n_rx, cfg.samples_per_chirp, acc);
    else
        kernels::accumulate_tones_parallel(tones, gated, cfg.sample_rate, cfg.n_rx, cfg.samples_per_chirp, acc);

    if (cal.noise_sigma > 0.0) {
        for (std::size_t n = 0; n < cfg.n_rx; ++n) {
            std::mt19937_64 rng(splitmix64(noise_seed + 0x632BE59BD9B4E019ULL * (n + 1)));
            std::normal_distribution<double> gauss(0.0, cal.noise_sigma);
            double* x = acc.data() + n * cfg.samples_per_chirp;
            for (std::size_t j = 0; j < cfg.samples_per_chirp; ++j) x[j] += gauss(rng);
        }
    }
    std::transform(acc.begin(), acc.end(), frame.samples.begin(), [](double v) { return static_cast<float>(v); });
    return frame;
}

std::vector<IfFrame> synth_batch(const RadarConfig& cfg, const Scenario& scenario, long first, std::size_t count,
                                 std::uint64_t seed, Exec exec)
{
    std::vector<IfFrame> frames(count);
    const long n = static_cast<long>(count);
    if (exec == Exec::serial) {
        for (long i = 0; i < n; ++i)
            frames[static_cast<std::size_t>(i)] =
                synth_chirp(cfg, scenario, first + i, chirp_seed(seed, first + i), Exec::serial);
        return frames;
    }
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            frames[static_cast<std::size_t>(i)] =
                synth_chirp(cfg, scenario, first + i, chirp_seed(seed, first + i), Exec::parallel);
        } catch (...) {
#pragma omp critical(dragonfly_synth_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return frames;
}

std::vector<IfFrame> synth_sequence(const RadarConfig& cfg, const Scenario& scenario, std::size_t n_chirps,
                                    std::uint64_t seed, Exec exec)
{
    return synth_batch(cfg, scenario, 0, n_chirps, seed, exec);
}

}  // namespace dragonfly
