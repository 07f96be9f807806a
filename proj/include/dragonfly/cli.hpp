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

namespace dragonfly {

/// Entry point of the dragonfly-sim tool. Results go to `out`; failures are
/// reported on `err` as one JSON object and a nonzero status is returned
/// (2 for schema errors, 64 for usage errors, 1 otherwise).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes a range-Doppler map as "DFLYRD01", u32 n_doppler, u32 n_range,
/// f64 doppler_bin_hz, f64 range_bin_hz, then complex64 cells, Doppler-major.
struct RangeDopplerMap;
void write_range_doppler(const std::string& path, const RangeDopplerMap& map);

}  // namespace dragonfly
