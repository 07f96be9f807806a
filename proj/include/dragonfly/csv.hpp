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

#include <iosfwd>
#include <string>
#include <vector>

#include "dragonfly/chirp2d.hpp"
#include "dragonfly/elevation.hpp"
#include "dragonfly/tracker.hpp"

namespace dragonfly::csv {

/// Shortest round-trippable text for 9 significant digits, '.' separator, no locale.
std::string format(double x);

void write_detections(std::ostream& out, const std::vector<Detection>& dets);
void write_elevation(std::ostream& out, int tag_id, const PhaseSeries& series, bool header = true);
void write_track(std::ostream& out, const std::vector<TrackPoint>& track, bool header = true);
void write_truth(std::ostream& out, const std::vector<TruthPoint>& truth);

std::vector<TrackPoint> read_track(std::istream& in);
std::vector<TruthPoint> read_truth(std::istream& in);

/// File helpers; throw std::runtime_error when the file cannot be opened.
std::vector<TrackPoint> read_track_file(const std::string& path);
std::vector<TruthPoint> read_truth_file(const std::string& path);

}  // namespace dragonfly::csv
