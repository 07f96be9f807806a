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

#include <complex>
#include <cstddef>
#include <vector>

#include "dragonfly/if_frame.hpp"
#include "dragonfly/options.hpp"
#include "dragonfly/radar_config.hpp"

namespace dragonfly {

using cplx = std::complex<double>;

enum class Exec { serial, parallel };

/// Symmetric window of length m (Hann: 0.5 - 0.5 cos(2 pi j / (m - 1))).
std::vector<double> make_window(WindowKind kind, std::size_t m);

/// Zero-padded fast-time spectra for every Rx channel, bins 0 .. L/2 inclusive.
struct ChannelSpectra {
    std::size_t n_rx = 0;
    std::size_t fft_len = 0;
    std::size_t n_bins = 0;
    std::vector<cplx> data; // [n][b]

    cplx& at(std::size_t n, std::size_t b) { return data[n * n_bins + b]; }
    const cplx& at(std::size_t n, std::size_t b) const { return data[n * n_bins + b]; }
};

/**
 * Range-azimuth spectrum over a contiguous block of range bins [bin_lo, bin_hi).
 *
 * Storage is range-major so that one range bin's angular profile is
 * contiguous. Angular bins run 0 .. angle_len-1; signed_bin() maps them to
 * [-angle_len/2, angle_len/2).
 */
struct RangeAzimuthSpectrum {
    std::size_t fft_len = 0;
    std::size_t angle_len = 0;
    std::size_t n_rx = 0;
    std::size_t n_samples = 0;        // fast-time samples before padding
    std::size_t bin_lo = 0;
    std::size_t bin_hi = 0;
    double sample_rate = 0.0;
    double spacing_over_lambda = 0.0; // d_rx / lambda
    std::vector<cplx> data;           // [(b - bin_lo) * angle_len + u]

    std::size_t range_bins() const { return bin_hi - bin_lo; }
    const cplx& at(std::size_t u, std::size_t b) const { return data[(b - bin_lo) * angle_len + u]; }
    cplx& at(std::size_t u, std::size_t b) { return data[(b - bin_lo) * angle_len + u]; }
    const cplx* profile(std::size_t b) const { return data.data() + (b - bin_lo) * angle_len; }

    /// Time of the fast-time window centre, (n_samples - 1) / (2 f_S).
    double centre_time() const { return 0.5 * static_cast<double>(n_samples - 1) / sample_rate; }
    double bin_hz(double b) const { return b * sample_rate / static_cast<double>(fft_len); }
    double hz_to_bin(double f) const { return f * static_cast<double>(fft_len) / sample_rate; }
    double signed_bin(double u) const
    {
        const double la = static_cast<double>(angle_len);
        return u >= 0.5 * la ? u - la : u;
    }
    /// Direction cosine along the Rx array for a (possibly fractional) angular bin.
    double direction_cosine(double u) const
    {
        return signed_bin(u) / (spacing_over_lambda * static_cast<double>(angle_len));
    }
    /// Energy with the one-sided weighting; equals the windowed time-domain
    /// energy when the block covers all bins.
    double energy() const;
};

ChannelSpectra range_spectra(const RadarConfig& cfg, const IfFrame& frame, WindowKind window,
                             Exec exec = Exec::parallel);

RangeAzimuthSpectrum angle_spectrum(const RadarConfig& cfg, const ChannelSpectra& spectra, std::size_t bin_lo,
                                    std::size_t bin_hi, Exec exec = Exec::parallel);

/// Full positive-half spectrum of one frame. Throws std::invalid_argument on
/// a frame whose dimensions do not match cfg.
RangeAzimuthSpectrum range_azimuth_spectrum(const RadarConfig& cfg, const IfFrame& frame,
                                            WindowKind window = WindowKind::hann, Exec exec = Exec::parallel);

double windowed_energy(const IfFrame& frame, WindowKind window);

void check_frame(const RadarConfig& cfg, const IfFrame& frame);

}  // namespace dragonfly
