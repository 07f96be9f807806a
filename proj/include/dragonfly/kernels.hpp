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

// Hot loops, each in a plain serial form (the reference used by the tests)
// and an OpenMP form used by the pipeline. The two agree to rounding.

#include <complex>
#include <cstddef>
#include <vector>

#include "dragonfly/if_frame.hpp"

namespace dragonfly::kernels {

using cplx = std::complex<double>;

/// x_n(t_j) += amp * cos(2 pi freq t_j + phase0 + n * phase_step), t_j = j / fs.
struct Tone {
    double amp;
    double freq;
    double phase0;
    double phase_step;
};

/// Same carrier multiplied by an on/off gate: 1 while cos(2 pi gate_freq t + gate_phase0) >= 0.
struct GatedTone {
    Tone carrier;
    double gate_freq;
    double gate_phase0;
};

void accumulate_tones_serial(const std::vector<Tone>& tones, const std::vector<GatedTone>& gated, double fs,
                             std::size_t n_rx, std::size_t n_samples, std::vector<double>& out);
void accumulate_tones_parallel(const std::vector<Tone>& tones, const std::vector<GatedTone>& gated, double fs,
                               std::size_t n_rx, std::size_t n_samples, std::vector<double>& out);

/// Windowed, zero-padded real FFT of every channel: out[n * (L/2+1) + b].
void range_fft_serial(const IfFrame& frame, const std::vector<double>& window, std::size_t fft_len,
                      std::vector<cplx>& out);
void range_fft_parallel(const IfFrame& frame, const std::vector<double>& window, std::size_t fft_len,
                        std::vector<cplx>& out);

/// Zero-padded FFT across channels for range bins [lo, hi):
/// out[(b - lo) * angle_len + u].
void angle_fft_serial(const std::vector<cplx>& spectra, std::size_t n_rx, std::size_t n_bins, std::size_t lo,
                      std::size_t hi, std::size_t angle_len, std::vector<cplx>& out);
void angle_fft_parallel(const std::vector<cplx>& spectra, std::size_t n_rx, std::size_t n_bins, std::size_t lo,
                        std::size_t hi, std::size_t angle_len, std::vector<cplx>& out);

}  // namespace dragonfly::kernels
