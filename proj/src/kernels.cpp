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

#include "dragonfly/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dragonfly/fft.hpp"

namespace dragonfly::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_out(std::size_t n_rx, std::size_t n_samples, std::vector<double>& out)
{
    if (out.size() != n_rx * n_samples) out.assign(n_rx * n_samples, 0.0);
}

void accumulate_gated(const GatedTone& g, double fs, std::size_t n, std::size_t n_samples, double* x)
{
    const auto& c = g.carrier;
    const double ph = c.phase0 + static_cast<double>(n) * c.phase_step;
    for (std::size_t j = 0; j < n_samples; ++j) {
        const double t = static_cast<double>(j) / fs;
        if (std::cos(kTwoPi * g.gate_freq * t + g.gate_phase0) >= 0.0) x[j] += c.amp * std::cos(kTwoPi * c.freq * t + ph);
    }
}

}  // namespace

void accumulate_tones_serial(const std::vector<Tone>& tones, const std::vector<GatedTone>& gated, double fs,
                             std::size_t n_rx, std::size_t n_samples, std::vector<double>& out)
{
    check_out(n_rx, n_samples, out);
    for (std::size_t n = 0; n < n_rx; ++n) {
        double* x = out.data() + n * n_samples;
        for (const auto& tone : tones) {
            const double ph = tone.phase0 + static_cast<double>(n) * tone.phase_step;
            for (std::size_t j = 0; j < n_samples; ++j)
                x[j] += tone.amp * std::cos(kTwoPi * tone.freq * (static_cast<double>(j) / fs) + ph);
        }
        for (const auto& g : gated) accumulate_gated(g, fs, n, n_samples, x);
    }
}

void accumulate_tones_parallel(const std::vector<Tone>& tones, const std::vector<GatedTone>& gated, double fs,
                               std::size_t n_rx, std::size_t n_samples, std::vector<double>& out)
{
    check_out(n_rx, n_samples, out);
    const long nrx = static_cast<long>(n_rx);
#pragma omp parallel for schedule(static)
    for (long ni = 0; ni < nrx; ++ni) {
        const auto n = static_cast<std::size_t>(ni);
        double* x = out.data() + n * n_samples;
        for (const auto& tone : tones) {
            // Phasor recurrence; re-seeded every block to bound drift.
            const double w = kTwoPi * tone.freq / fs;
            const double ph = tone.phase0 + static_cast<double>(n) * tone.phase_step;
            const cplx step(std::cos(w), std::sin(w));
            constexpr std::size_t kBlock = 512;
            for (std::size_t j0 = 0; j0 < n_samples; j0 += kBlock) {
                const double a = w * static_cast<double>(j0) + ph;
                cplx z(tone.amp * std::cos(a), tone.amp * std::sin(a));
                const std::size_t j1 = std::min(n_samples, j0 + kBlock);
                for (std::size_t j = j0; j < j1; ++j) {
                    x[j] += z.real();
                    z *= step;
                }
            }
        }
        for (const auto& g : gated) accumulate_gated(g, fs, n, n_samples, x);
    }
}

namespace {

void range_fft_channel(const IfFrame& frame, const std::vector<double>& window, std::size_t fft_len, std::size_t n,
                       std::vector<double>& buf, cplx* out)
{
    buf.assign(fft_len, 0.0);
    const float* x = frame.channel(n);
    for (std::size_t j = 0; j < frame.n_samples; ++j) buf[j] = window[j] * static_cast<double>(x[j]);
    fft::forward_real(fft_len, buf.data(), out);
}

}  // namespace

void range_fft_serial(const IfFrame& frame, const std::vector<double>& window, std::size_t fft_len,
                      std::vector<cplx>& out)
{
    const std::size_t nb = fft_len / 2 + 1;
    out.assign(frame.n_rx * nb, cplx{});
    std::vector<double> buf;
    for (std::size_t n = 0; n < frame.n_rx; ++n) range_fft_channel(frame, window, fft_len, n, buf, out.data() + n * nb);
}

void range_fft_parallel(const IfFrame& frame, const std::vector<double>& window, std::size_t fft_len,
                        std::vector<cplx>& out)
{
    const std::size_t nb = fft_len / 2 + 1;
    out.assign(frame.n_rx * nb, cplx{});
    const long nrx = static_cast<long>(frame.n_rx);
#pragma omp parallel
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (long n = 0; n < nrx; ++n)
            range_fft_channel(frame, window, fft_len, static_cast<std::size_t>(n), buf,
                              out.data() + static_cast<std::size_t>(n) * nb);
    }
}

void angle_fft_serial(const std::vector<cplx>& spectra, std::size_t n_rx, std::size_t n_bins, std::size_t lo,
                      std::size_t hi, std::size_t angle_len, std::vector<cplx>& out)
{
    if (hi > n_bins || lo > hi) throw std::out_of_range("angle_fft: bin block out of range");
    out.assign((hi - lo) * angle_len, cplx{});
    // Direct DFT over the n_rx populated inputs.
    std::vector<cplx> twiddle(angle_len);
    for (std::size_t m = 0; m < angle_len; ++m)
        twiddle[m] = std::polar(1.0, -kTwoPi * static_cast<double>(m) / static_cast<double>(angle_len));
    for (std::size_t b = lo; b < hi; ++b) {
        cplx* row = out.data() + (b - lo) * angle_len;
        for (std::size_t u = 0; u < angle_len; ++u) {
            cplx acc{};
            for (std::size_t n = 0; n < n_rx; ++n) acc += spectra[n * n_bins + b] * twiddle[(n * u) % angle_len];
            row[u] = acc;
        }
    }
}

void angle_fft_parallel(const std::vector<cplx>& spectra, std::size_t n_rx, std::size_t n_bins, std::size_t lo,
                        std::size_t hi, std::size_t angle_len, std::vector<cplx>& out)
{
    if (hi > n_bins || lo > hi) throw std::out_of_range("angle_fft: bin block out of range");
    out.assign((hi - lo) * angle_len, cplx{});
    const long count = static_cast<long>(hi - lo);
#pragma omp parallel
    {
        std::vector<cplx> in(angle_len);
#pragma omp for schedule(static)
        for (long i = 0; i < count; ++i) {
            const std::size_t b = lo + static_cast<std::size_t>(i);
            std::fill(in.begin(), in.end(), cplx{});
            for (std::size_t n = 0; n < n_rx; ++n) in[n] = spectra[n * n_bins + b];
            fft::forward_complex(angle_len, in.data(), out.data() + static_cast<std::size_t>(i) * angle_len);
        }
    }
}

}  // namespace dragonfly::kernels
