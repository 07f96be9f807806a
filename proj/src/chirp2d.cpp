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

#include "dragonfly/chirp2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dragonfly/phase.hpp"

namespace dragonfly {

namespace {

struct Candidate {
    std::size_t bin;
    std::size_t angle;
    double power;
};

// Median of a Gamma(n, 1) variable divided by its mean (Wilson-Hilferty style series).
double gamma_median_ratio(double n) { return (n - 1.0 / 3.0 + 8.0 / (405.0 * n)) / n; }

double log_mag(const cplx& z)
{
    return std::log(std::max(std::abs(z), std::numeric_limits<double>::min()));
}

struct PeakEstimate {
    double freq;           // interpolated
    double angle_bin;      // signed, interpolated
    double phase_centroid; // at mid-chirp and the array centre
    double power;
};

PeakEstimate refine_peak(const RangeAzimuthSpectrum& s, const Candidate& c)
{
    const std::size_t la = s.angle_len;
    const std::size_t u0 = c.angle;
    const double dr = quadratic_peak_offset(log_mag(s.at(u0, c.bin - 1)), log_mag(s.at(u0, c.bin)),
                                            log_mag(s.at(u0, c.bin + 1)));
    const double da = quadratic_peak_offset(log_mag(s.at((u0 + la - 1) % la, c.bin)), log_mag(s.at(u0, c.bin)),
                                            log_mag(s.at((u0 + 1) % la, c.bin)));
    const double u_grid = s.signed_bin(static_cast<double>(u0));
    PeakEstimate e;
    e.freq = s.bin_hz(static_cast<double>(c.bin) + dr);
    e.angle_bin = u_grid + da;
    // The symmetric windows make the grid-point phase exact once referred to
    // their centres, independent of the interpolated offsets.
    e.phase_centroid = std::arg(s.at(u0, c.bin)) + kTwoPi * s.bin_hz(static_cast<double>(c.bin)) * s.centre_time() +
                       (static_cast<double>(s.n_rx) - 1.0) * kPi * u_grid / static_cast<double>(la);
    e.power = c.power;
    return e;
}

}  // namespace

double quadratic_peak_offset(double a, double b, double c)
{
    const double den = a - 2.0 * b + c;
    if (!(den < 0.0)) return 0.0;
    return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

TagChannel make_channel(const RadarConfig& cfg, int tag_id, double f_m, const DetectorOptions& opt)
{
    return {tag_id, f_m, beat_frequency(cfg, opt.max_range_m)};
}

std::pair<std::size_t, std::size_t> channel_bins(const RadarConfig& cfg, const TagChannel& ch)
{
    const double per_bin = static_cast<double>(cfg.range_fft_len) / cfg.sample_rate;
    const double lo = std::floor((ch.f_m - ch.half_width) * per_bin) - 3.0;
    const double hi = std::ceil((ch.f_m + ch.half_width) * per_bin) + 4.0;
    const double max_bin = static_cast<double>(cfg.range_fft_len / 2 + 1);
    return {static_cast<std::size_t>(std::clamp(lo, 0.0, max_bin)), static_cast<std::size_t>(std::clamp(hi, 0.0, max_bin))};
}

PeakPair detect_tag_peaks(const RangeAzimuthSpectrum& s, const TagChannel& ch, const DetectorOptions& opt)
{
    const double per_bin = static_cast<double>(s.fft_len) / s.sample_rate;
    const double lo_f = std::floor((ch.f_m - ch.half_width) * per_bin);
    const double hi_f = std::ceil((ch.f_m + ch.half_width) * per_bin);
    const std::size_t lo = static_cast<std::size_t>(std::max(lo_f, static_cast<double>(s.bin_lo + 1)));
    const std::size_t hi = static_cast<std::size_t>(std::min(hi_f + 1.0, static_cast<double>(s.bin_hi - 1)));
    if (hi <= lo + 2) throw NoTagDetected("search band outside the spectrum block");

    const std::size_t la = s.angle_len;
    std::vector<double> power(hi - lo);
    std::vector<std::size_t> best_u(hi - lo);
    std::vector<double> energy(hi - lo);
    for (std::size_t b = lo; b < hi; ++b) {
        const cplx* row = s.profile(b);
        double pmax = -1.0, e = 0.0;
        std::size_t umax = 0;
        for (std::size_t u = 0; u < la; ++u) {
            const double p = std::norm(row[u]);
            e += p;
            if (p > pmax) {
                pmax = p;
                umax = u;
            }
        }
        power[b - lo] = pmax;
        best_u[b - lo] = umax;
        energy[b - lo] = e / static_cast<double>(la);
    }
    std::vector<double> sorted = energy;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    const double noise_mean = std::max(sorted[sorted.size() / 2] / gamma_median_ratio(static_cast<double>(s.n_rx)),
                                       std::numeric_limits<double>::min());
    const double threshold = noise_mean * std::log(2.0) * db_to_linear(opt.snr_threshold_db);

    std::vector<Candidate> peaks;
    for (std::size_t b = lo + 1; b + 1 < hi; ++b) {
        const double p = power[b - lo];
        if (p >= threshold && p > power[b - lo - 1] && p >= power[b - lo + 1]) peaks.push_back({b, best_u[b - lo], p});
    }
    if (peaks.size() < 2) throw NoTagDetected("fewer than two peaks above threshold");

    const double center_bin = ch.f_m * per_bin;
    const double mirror_tol = static_cast<double>(la) / static_cast<double>(s.n_rx);
    struct Pair {
        std::size_t i, j;
        double score;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < peaks.size(); ++i)
        for (std::size_t j = i + 1; j < peaks.size(); ++j) {
            const double mid = 0.5 * static_cast<double>(peaks[i].bin + peaks[j].bin);
            if (std::abs(mid - center_bin) > opt.pair_tolerance_bins) continue;
            const double mirrored =
                circular_distance(static_cast<double>(peaks[j].angle), -static_cast<double>(peaks[i].angle),
                                  static_cast<double>(la));
            if (mirrored > mirror_tol) continue;
            pairs.push_back({i, j, std::min(peaks[i].power, peaks[j].power)});
        }
    if (pairs.empty()) throw NoTagDetected("no symmetric peak pair around the channel frequency");
    // peaks are sorted by frequency, so the first maximum is the lowest-frequency one
    std::size_t best = 0;
    for (std::size_t p = 1; p < pairs.size(); ++p)
        if (pairs[p].score > pairs[best].score) best = p;
    const double margin = db_to_linear(-opt.ambiguity_margin_db);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (p == best) continue;
        const bool disjoint = pairs[p].i != pairs[best].i && pairs[p].i != pairs[best].j &&
                              pairs[p].j != pairs[best].i && pairs[p].j != pairs[best].j;
        if (disjoint && pairs[p].score >= margin * pairs[best].score)
            throw AmbiguousPair("two disjoint peak pairs of similar strength in channel of tag " +
                                std::to_string(ch.tag_id));
    }

    const Candidate& minus = peaks[pairs[best].i];
    const Candidate& plus = peaks[pairs[best].j];
    const PeakEstimate ep = refine_peak(s, plus);
    const PeakEstimate em = refine_peak(s, minus);

    PeakPair out;
    out.f_plus = ep.freq;
    out.f_minus = em.freq;
    out.azimuth_bin_plus = ep.angle_bin;
    out.azimuth_bin_minus = em.angle_bin;
    out.snr_db_plus = linear_to_db(ep.power / noise_mean);
    out.snr_db_minus = linear_to_db(em.power / noise_mean);
    out.noise_level = noise_mean;
    const double t_c = s.centre_time();
    const double half_aperture = (static_cast<double>(s.n_rx) - 1.0) * kPi / static_cast<double>(la);
    out.phi_plus_centroid = wrap_mod(ep.phase_centroid, kTwoPi);
    out.phi_minus_centroid = wrap_mod(em.phase_centroid, kTwoPi);
    out.phi_plus = wrap_mod(ep.phase_centroid - kTwoPi * ep.freq * t_c - half_aperture * ep.angle_bin, kTwoPi);
    out.phi_minus = wrap_mod(em.phase_centroid - kTwoPi * em.freq * t_c - half_aperture * em.angle_bin, kTwoPi);
    return out;
}

Detection localize2d(const RadarConfig& cfg, const PeakPair& pair, long k, const DetectorOptions& opt)
{
    if (!(pair.f_plus > pair.f_minus)) throw std::domain_error("localize2d: peaks out of order");
    Detection d;
    d.k = k;
    d.tx_channel = static_cast<int>(k % 2);
    d.t_start = static_cast<double>(k) * cfg.tx_period;
    d.f_b = 0.5 * (pair.f_plus - pair.f_minus);
    d.range = range_from_beat(cfg, d.f_b);
    const double u = opt.mirror_average ? 0.5 * (pair.azimuth_bin_plus - pair.azimuth_bin_minus) : pair.azimuth_bin_plus;
    d.direction_cosine = wavelength(cfg) * u / (cfg.d_rx * static_cast<double>(cfg.angle_fft_len));
    if (!(std::abs(d.direction_cosine) < 1.0)) throw std::domain_error("localize2d: |sin(azimuth)| >= 1");
    d.azimuth = std::asin(d.direction_cosine);
    d.phi_plus = pair.phi_plus;
    d.phi_minus = pair.phi_minus;
    d.phi_plus_centroid = pair.phi_plus_centroid;
    d.phi_minus_centroid = pair.phi_minus_centroid;
    d.f_center = pair.center();
    d.snr_db = std::min(pair.snr_db_plus, pair.snr_db_minus);
    return d;
}

std::vector<ChannelResult> detect_frame(const RadarConfig& cfg, const IfFrame& frame,
                                        const std::vector<TagChannel>& channels, const DetectorOptions& opt, Exec exec)
{
    const auto spectra = range_spectra(cfg, frame, opt.window, exec);
    std::vector<ChannelResult> out;
    out.reserve(channels.size());
    for (const auto& ch : channels) {
        ChannelResult r;
        r.tag_id = ch.tag_id;
        const auto [lo, hi] = channel_bins(cfg, ch);
        const auto block = angle_spectrum(cfg, spectra, lo, hi, exec);
        try {
            r.pair = detect_tag_peaks(block, ch, opt);
            r.detection = localize2d(cfg, *r.pair, frame.k, opt);
            r.detection->tag_id = ch.tag_id;
            r.detection->t_start = frame.t_start;
            r.detection->tx_channel = frame.tx_channel;
            r.status = DetectStatus::ok;
        } catch (const NoTagDetected& e) {
            r.status = DetectStatus::no_tag;
            r.message = e.what();
        } catch (const AmbiguousPair& e) {
            r.status = DetectStatus::ambiguous;
            r.message = e.what();
        } catch (const std::domain_error& e) {
            r.status = DetectStatus::rejected;
            r.message = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace dragonfly
