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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dragonfly {

/// One chirp of real IF samples, channel-major: samples[n * n_samples + j].
struct IfFrame {
    long k = 0;
    int tx_channel = 0;
    double t_start = 0.0;
    std::size_t n_rx = 0;
    std::size_t n_samples = 0;
    std::vector<float> samples;

    IfFrame() = default;
    IfFrame(long k_, int tx, double t0, std::size_t rx, std::size_t ns)
        : k(k_), tx_channel(tx), t_start(t0), n_rx(rx), n_samples(ns), samples(rx * ns, 0.0f)
    {
    }

    float& at(std::size_t n, std::size_t j) { return samples[n * n_samples + j]; }
    float at(std::size_t n, std::size_t j) const { return samples[n * n_samples + j]; }
    const float* channel(std::size_t n) const { return samples.data() + n * n_samples; }
    float* channel(std::size_t n) { return samples.data() + n * n_samples; }

    bool operator==(const IfFrame&) const = default;
};

/// Binary frame dump, see docs/frame_format.md.
inline constexpr char kFrameMagic[8] = {'D', 'F', 'L', 'Y', 'I', 'F', '0', '1'};

class FrameWriter {
public:
    explicit FrameWriter(std::ostream& out);
    void write(const IfFrame& f);

private:
    std::ostream& out_;
};

class FrameReader {
public:
    /// Throws std::runtime_error on a bad magic.
    explicit FrameReader(std::istream& in);
    /// False at a clean end of stream; throws on truncation.
    bool next(IfFrame& f);

private:
    std::istream& in_;
};

void write_frames(const std::string& path, const std::vector<IfFrame>& frames);
std::vector<IfFrame> read_frames(const std::string& path);

}  // namespace dragonfly
