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

// Serial reference versus OpenMP kernels on the default radar geometry.
// Run with OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "dragonfly/kernels.hpp"
#include "dragonfly/radar_config.hpp"
#include "dragonfly/scenario.hpp"
#include "dragonfly/spectrum.hpp"
#include "dragonfly/synth.hpp"

using namespace dragonfly;
namespace k = dragonfly::kernels;

namespace {

std::vector<k::Tone> make_tones(std::size_t n)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> f(50e3, 500e3), ph(0.0, 6.28);
    std::vector<k::Tone> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({1.0, f(rng), ph(rng), ph(rng)});
    return out;
}

IfFrame noise_frame(const RadarConfig& cfg)
{
    IfFrame f(0, 0, 0.0, cfg.n_rx, cfg.samples_per_chirp);
    std::mt19937_64 rng(5);
    std::normal_distribution<float> g;
    for (auto& v : f.samples) v = g(rng);
    return f;
}

Scenario three_tags()
{
    Scenario s;
    for (int i = 0; i < 3; ++i) {
        TagScenario t;
        t.tag_id = i + 1;
        t.f_m = 200e3 + 50e3 * i;
        t.trajectory = Trajectory::constant(Vec3(4.0 + i, 0.5 * i, 0.2));
        s.tags.push_back(t);
    }
    return s;
}

template <auto Fn>
void bm_tones(benchmark::State& st)
{
    const auto cfg = default_radar();
    const auto tones = make_tones(std::size_t(st.range(0)));
    std::vector<double> out;
    for (auto _ : st) {
        out.assign(cfg.n_rx * cfg.samples_per_chirp, 0.0);
        Fn(tones, {}, cfg.sample_rate, cfg.n_rx, cfg.samples_per_chirp, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Fn>
void bm_range_fft(benchmark::State& st)
{
    const auto cfg = default_radar();
    const auto frame = noise_frame(cfg);
    const auto w = make_window(WindowKind::hann, cfg.samples_per_chirp);
    std::vector<k::cplx> out;
    for (auto _ : st) {
        Fn(frame, w, cfg.range_fft_len, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Fn>
void bm_angle_fft(benchmark::State& st)
{
    const auto cfg = default_radar();
    const auto frame = noise_frame(cfg);
    const auto w = make_window(WindowKind::hann, cfg.samples_per_chirp);
    std::vector<k::cplx> spectra, out;
    k::range_fft_serial(frame, w, cfg.range_fft_len, spectra);
    const std::size_t n_bins = cfg.range_fft_len / 2 + 1;
    for (auto _ : st) {
        Fn(spectra, cfg.n_rx, n_bins, 0, n_bins, cfg.angle_fft_len, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_synth(benchmark::State& st)
{
    const auto s = three_tags();
    const Exec exec = st.range(0) ? Exec::parallel : Exec::serial;
    long kk = 0;
    for (auto _ : st) {
        auto f = synth_chirp(s.radar, s, kk++, 1, exec);
        benchmark::DoNotOptimize(f.samples.data());
    }
}

}  // namespace

BENCHMARK(bm_tones<k::accumulate_tones_serial>)->Name("tones/serial")->Arg(4)->Arg(32);
BENCHMARK(bm_tones<k::accumulate_tones_parallel>)->Name("tones/parallel")->Arg(4)->Arg(32);
BENCHMARK(bm_range_fft<k::range_fft_serial>)->Name("range_fft/serial");
BENCHMARK(bm_range_fft<k::range_fft_parallel>)->Name("range_fft/parallel");
BENCHMARK(bm_angle_fft<k::angle_fft_serial>)->Name("angle_fft/serial");
BENCHMARK(bm_angle_fft<k::angle_fft_parallel>)->Name("angle_fft/parallel");
BENCHMARK(bm_synth)->Name("synth_chirp")->Arg(0)->Arg(1)->ArgName("parallel");

BENCHMARK_MAIN();
