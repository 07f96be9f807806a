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

#include "dragonfly/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dragonfly/kernels.hpp"

namespace dragonfly {

std::vector<double> make_window(WindowKind kind, std::size_t m)
{
    std::vector<double> w(m, 1.0);
    if (kind == WindowKind::hann && m > 1) {
        for (std::size_t j = 0; j < m; ++j)
            w[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m - 1));
    }
    return w;
}

void check_frame(const RadarConfig& cfg, const IfFrame& frame)
{
    if (frame.n_rx != cfg.n_rx || frame.n_samples != cfg.samples_per_chirp ||
        frame.samples.size() != frame.n_rx * frame.n_samples)
        throw std::invalid_argument("frame dimensions " + std::to_string(frame.n_rx) + "x" +
                                    std::to_string(frame.n_samples) + " do not match the radar configuration " +
                                    std::to_string(cfg.n_rx) + "x" + std::to_string(cfg.samples_per_chirp));
}

ChannelSpectra range_spectra(const RadarConfig& cfg, const IfFrame& frame, WindowKind window, Exec exec)
{
    check_frame(cfg, frame);
    ChannelSpectra s;
    s.n_rx = cfg.n_rx;
    s.fft_len = cfg.range_fft_len;
    s.n_bins = cfg.range_fft_len / 2 + 1;
    const auto w = make_window(window, cfg.samples_per_chirp);
    if (exec == Exec::serial) kernels::range_fft_serial(frame, w, s.fft_len, s.data);
    else kernels::range_fft_parallel(frame, w, s.fft_len, s.data);
    return s;
}

RangeAzimuthSpectrum angle_spectrum(const RadarConfig& cfg, const ChannelSpectra& spectra, std::size_t bin_lo,
                                    std::size_t bin_hi, Exec exec)
{
    RangeAzimuthSpectrum r;
    r.fft_len = spectra.fft_len;
    r.angle_len = cfg.angle_fft_len;
    r.n_rx = spectra.n_rx;
    r.n_samples = cfg.samples_per_chirp;
    r.bin_lo = bin_lo;
    r.bin_hi = std::min(bin_hi, spectra.n_bins);
    r.sample_rate = cfg.sample_rate;
    r.spacing_over_lambda = cfg.d_rx / wavelength(cfg);
    if (exec == Exec::serial)
        kernels::angle_fft_serial(spectra.data, spectra.n_rx, spectra.n_bins, r.bin_lo, r.bin_hi, r.angle_len, r.data);
    else
        kernels::angle_fft_parallel(spectra.data, spectra.n_rx, spectra.n_bins, r.bin_lo, r.bin_hi, r.angle_len,
                                    r.data);
    return r;
}

RangeAzimuthSpectrum range_azimuth_spectrum(const RadarConfig& cfg, const IfFrame& frame, WindowKind window,
                                            Exec exec)
{
    const auto s = range_spectra(cfg, frame, window, exec);
    return angle_spectrum(cfg, s, 0, s.n_bins, exec);
}

double RangeAzimuthSpectrum::energy() const
{
    const std::size_t nyquist = fft_len / 2;
    double e = 0.0;
    for (std::size_t b = bin_lo; b < bin_hi; ++b) {
        const double weight = (b == 0 || (fft_len % 2 == 0 && b == nyquist)) ? 1.0 : 2.0;
        double row = 0.0;
        const cplx* p = profile(b);
        for (std::size_t u = 0; u < angle_len; ++u) row += std::norm(p[u]);
        e += weight * row;
    }
    return e / (static_cast<double>(fft_len) * static_cast<double>(angle_len));
}

double windowed_energy(const IfFrame& frame, WindowKind window)
{
    const auto w = make_window(window, frame.n_samples);
    double e = 0.0;
    for (std::size_t n = 0; n < frame.n_rx; ++n)
        for (std::size_t j = 0; j < frame.n_samples; ++j) {
            const double v = w[j] * static_cast<double>(frame.at(n, j));
            e += v * v;
        }
    return e;
}

}  // namespace dragonfly
