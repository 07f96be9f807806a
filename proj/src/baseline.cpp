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

#include "dragonfly/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dragonfly/chirp2d.hpp"
#include "dragonfly/fft.hpp"
#include "dragonfly/spectrum.hpp"

namespace dragonfly {

RangeDopplerMap range_doppler_map(const RadarConfig& cfg, const std::vector<IfFrame>& frames, std::size_t n_chirps,
                                  int tx, double max_range_m)
{
    std::vector<const IfFrame*> sel;
    for (const auto& f : frames) {
        if (f.tx_channel != tx) continue;
        check_frame(cfg, f);
        sel.push_back(&f);
        if (sel.size() == n_chirps) break;
    }
    if (n_chirps < 2 || sel.size() < n_chirps)
        throw std::invalid_argument("range_doppler_map: not enough frames on the requested Tx channel");

    RangeDopplerMap m;
    m.n_doppler = n_chirps;
    m.range_fft_len = cfg.range_fft_len;
    m.sample_rate = cfg.sample_rate;
    m.chirp_interval = (sel.back()->t_start - sel.front()->t_start) / static_cast<double>(n_chirps - 1);
    const double bin_hz = m.range_bin_hz();
    m.n_range = std::min(cfg.range_fft_len / 2 + 1,
                         static_cast<std::size_t>(std::ceil(beat_frequency(cfg, max_range_m) / bin_hz)) + 2);

    const std::size_t ns = cfg.samples_per_chirp;
    const auto w_fast = make_window(WindowKind::hann, ns);
    const auto w_slow = make_window(WindowKind::hann, n_chirps);
    std::vector<std::complex<double>> fast(n_chirps * m.n_range);
    std::vector<double> buf(cfg.range_fft_len, 0.0);
    std::vector<std::complex<double>> spec(cfg.range_fft_len / 2 + 1);
    for (std::size_t c = 0; c < n_chirps; ++c) {
        const float* x = sel[c]->channel(0);
        std::fill(buf.begin(), buf.end(), 0.0);
        for (std::size_t j = 0; j < ns; ++j) buf[j] = w_fast[j] * static_cast<double>(x[j]);
        fft::forward_real(cfg.range_fft_len, buf.data(), spec.data());
        for (std::size_t r = 0; r < m.n_range; ++r) fast[c * m.n_range + r] = w_slow[c] * spec[r];
    }

    m.data.assign(n_chirps * m.n_range, {});
    std::vector<std::complex<double>> col(n_chirps), out(n_chirps);
    for (std::size_t r = 0; r < m.n_range; ++r) {
        for (std::size_t c = 0; c < n_chirps; ++c) col[c] = fast[c * m.n_range + r];
        fft::forward_complex(n_chirps, col.data(), out.data());
        for (std::size_t d = 0; d < n_chirps; ++d) {
            // Centre the zero-Doppler bin at n_doppler / 2.
            const std::size_t src = (d + n_chirps - n_chirps / 2) % n_chirps;
            m.data[d * m.n_range + r] = out[src];
        }
    }
    return m;
}

SlowTimePeak slow_time_localize(const RadarConfig& cfg, const RangeDopplerMap& map, double f_m, double window_hz,
                                std::size_t min_range_bin)
{
    const double dbin = map.doppler_bin_hz();
    const double centre = 0.5 * static_cast<double>(map.n_doppler);
    const auto lo_d = static_cast<long>(std::ceil((f_m - window_hz) / dbin + centre));
    const auto hi_d = static_cast<long>(std::floor((f_m + window_hz) / dbin + centre));
    const long nd = static_cast<long>(map.n_doppler);
    SlowTimePeak best;
    bool found = false;
    for (long d = std::max(0L, lo_d); d <= std::min(nd - 1, hi_d); ++d) {
        for (std::size_t r = min_range_bin; r < map.n_range; ++r) {
            const double p = std::norm(map.at(static_cast<std::size_t>(d), r));
            if (p > best.power) {
                best.power = p;
                best.doppler_bin = static_cast<std::size_t>(d);
                best.range_bin = r;
                found = true;
            }
        }
    }
    if (!found || !(best.power > 0.0)) throw NoTagDetected("no slow-time peak near the modulation frequency");

    auto logp = [&](long d, long r) {
        return std::log(std::max(std::norm(map.at(static_cast<std::size_t>(d), static_cast<std::size_t>(r))), 1e-300));
    };
    const long d0 = static_cast<long>(best.doppler_bin), r0 = static_cast<long>(best.range_bin);
    double dd = 0.0, dr = 0.0;
    if (d0 > 0 && d0 + 1 < nd) dd = quadratic_peak_offset(logp(d0 - 1, r0), logp(d0, r0), logp(d0 + 1, r0));
    if (r0 > 0 && r0 + 1 < static_cast<long>(map.n_range))
        dr = quadratic_peak_offset(logp(d0, r0 - 1), logp(d0, r0), logp(d0, r0 + 1));
    best.apparent_frequency = map.doppler_hz(static_cast<double>(d0) + dd);
    best.range = range_from_beat(cfg, (static_cast<double>(r0) + dr) * map.range_bin_hz());
    return best;
}

}  // namespace dragonfly
