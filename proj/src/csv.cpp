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

#include "dragonfly/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "dragonfly/phase.hpp"

namespace dragonfly::csv {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') cells.back().pop_back();
    return cells;
}

double parse_double(const std::string& s)
{
    if (s == "nan") return std::nan("");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error("bad number in CSV: '" + s + "'");
    return v;
}

long parse_long(const std::string& s)
{
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error("bad integer in CSV: '" + s + "'");
    return v;
}

/// Maps header names to column indices; throws when a required column is missing.
struct Columns {
    std::vector<std::string> names;

    std::size_t operator[](const std::string& name) const
    {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw std::runtime_error("CSV lacks column '" + name + "'");
    }
};

}  // namespace

std::string format(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

void write_detections(std::ostream& out, const std::vector<Detection>& dets)
{
    out << "k,tx_channel,tag_id,f_b,range_m,azimuth_deg,phi_plus_rad,phi_minus_rad,snr_db\n";
    for (const auto& d : dets)
        out << d.k << ',' << d.tx_channel << ',' << d.tag_id << ',' << format(d.f_b) << ',' << format(d.range) << ','
            << format(rad2deg(d.azimuth)) << ',' << format(d.phi_plus) << ',' << format(d.phi_minus) << ','
            << format(d.snr_db) << '\n';
}

void write_elevation(std::ostream& out, int tag_id, const PhaseSeries& series, bool header)
{
    if (header) out << "k,tag_id,beta_chosen_rad,delta_rad,elevation_deg,v_r_est_mps,exception_flag\n";
    for (const auto& r : series.records) {
        const int flag = r.outlier ? 2 : (r.exception ? 1 : 0);
        out << r.ref_k << ',' << tag_id << ',' << format(r.beta_chosen) << ',' << format(r.delta_unwrapped) << ','
            << format(r.valid ? rad2deg(r.elevation) : std::nan("")) << ',' << format(r.v_r_est) << ',' << flag
            << '\n';
    }
}

void write_track(std::ostream& out, const std::vector<TrackPoint>& track, bool header)
{
    if (header) out << "t,tag_id,x,y,z,range,azimuth_deg,elevation_deg,valid\n";
    for (const auto& p : track)
        out << format(p.t) << ',' << p.tag_id << ',' << format(p.x) << ',' << format(p.y) << ',' << format(p.z) << ','
            << format(p.range) << ',' << format(rad2deg(p.azimuth)) << ',' << format(rad2deg(p.elevation)) << ','
            << (p.valid ? 1 : 0) << '\n';
}

void write_truth(std::ostream& out, const std::vector<TruthPoint>& truth)
{
    out << "t,tag_id,x,y,z\n";
    for (const auto& p : truth)
        out << format(p.t) << ',' << p.tag_id << ',' << format(p.position.x()) << ',' << format(p.position.y()) << ','
            << format(p.position.z()) << '\n';
}

std::vector<TrackPoint> read_track(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty track CSV");
    const Columns col{split(line)};
    const std::size_t ct = col["t"], cid = col["tag_id"], cx = col["x"], cy = col["y"], cz = col["z"],
                      cr = col["range"], ca = col["azimuth_deg"], ce = col["elevation_deg"], cv = col["valid"];
    std::vector<TrackPoint> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c = split(line);
        if (c.size() != col.names.size()) throw std::runtime_error("track CSV row has the wrong width: " + line);
        TrackPoint p;
        p.t = parse_double(c[ct]);
        p.tag_id = static_cast<int>(parse_long(c[cid]));
        p.x = parse_double(c[cx]);
        p.y = parse_double(c[cy]);
        p.z = parse_double(c[cz]);
        p.range = parse_double(c[cr]);
        p.azimuth = deg2rad(parse_double(c[ca]));
        p.elevation = deg2rad(parse_double(c[ce]));
        p.valid = parse_long(c[cv]) != 0;
        out.push_back(p);
    }
    return out;
}

std::vector<TruthPoint> read_truth(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty truth CSV");
    const Columns col{split(line)};
    const std::size_t ct = col["t"], cid = col["tag_id"], cx = col["x"], cy = col["y"], cz = col["z"];
    std::vector<TruthPoint> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c = split(line);
        if (c.size() != col.names.size()) throw std::runtime_error("truth CSV row has the wrong width: " + line);
        out.push_back({parse_double(c[ct]), static_cast<int>(parse_long(c[cid])),
                       Vec3(parse_double(c[cx]), parse_double(c[cy]), parse_double(c[cz]))});
    }
    return out;
}

std::vector<TrackPoint> read_track_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_track(in);
}

std::vector<TruthPoint> read_truth_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_truth(in);
}

}  // namespace dragonfly::csv
