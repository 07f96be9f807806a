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

#include "dragonfly/if_frame.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dragonfly {

static_assert(std::endian::native == std::endian::little, "frame dump I/O assumes a little-endian host");

namespace {

template <typename T>
void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& v)
{
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return static_cast<std::size_t>(in.gcount()) == sizeof(T);
}

}  // namespace

FrameWriter::FrameWriter(std::ostream& out) : out_(out) { out_.write(kFrameMagic, sizeof(kFrameMagic)); }

void FrameWriter::write(const IfFrame& f)
{
    if (f.samples.size() != f.n_rx * f.n_samples) throw std::invalid_argument("FrameWriter: inconsistent frame size");
    put<std::int64_t>(out_, f.k);
    put<std::int32_t>(out_, f.tx_channel);
    put<double>(out_, f.t_start);
    put<std::uint32_t>(out_, static_cast<std::uint32_t>(f.n_rx));
    put<std::uint32_t>(out_, static_cast<std::uint32_t>(f.n_samples));
    out_.write(reinterpret_cast<const char*>(f.samples.data()),
               static_cast<std::streamsize>(f.samples.size() * sizeof(float)));
    if (!out_) throw std::runtime_error("FrameWriter: write failed");
}

FrameReader::FrameReader(std::istream& in) : in_(in)
{
    char magic[8];
    in_.read(magic, sizeof(magic));
    if (in_.gcount() != sizeof(magic) || std::memcmp(magic, kFrameMagic, sizeof(magic)) != 0)
        throw std::runtime_error("FrameReader: not a frame dump (bad magic)");
}

bool FrameReader::next(IfFrame& f)
{
    std::int64_t k;
    if (!get(in_, k)) {
        if (in_.gcount() == 0) return false;
        throw std::runtime_error("FrameReader: truncated header");
    }
    std::int32_t tx;
    double t0;
    std::uint32_t nrx, ns;
    if (!get(in_, tx) || !get(in_, t0) || !get(in_, nrx) || !get(in_, ns))
        throw std::runtime_error("FrameReader: truncated header");
    f = IfFrame(static_cast<long>(k), tx, t0, nrx, ns);
    const auto bytes = static_cast<std::streamsize>(f.samples.size() * sizeof(float));
    in_.read(reinterpret_cast<char*>(f.samples.data()), bytes);
    if (in_.gcount() != bytes) throw std::runtime_error("FrameReader: truncated samples");
    return true;
}

void write_frames(const std::string& path, const std::vector<IfFrame>& frames)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    FrameWriter w(out);
    for (const auto& f : frames) w.write(f);
}

std::vector<IfFrame> read_frames(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    FrameReader r(in);
    std::vector<IfFrame> frames;
    IfFrame f;
    while (r.next(f)) frames.push_back(std::move(f));
    return frames;
}

}  // namespace dragonfly
