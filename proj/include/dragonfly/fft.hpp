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

namespace dragonfly::fft {

using cplx = std::complex<double>;

/// Forward real-to-complex transform of length n; writes n/2 + 1 bins.
/// `in` must hold n values. Thread-safe: plans are cached behind a mutex and
/// executed with the new-array interface.
void forward_real(std::size_t n, const double* in, cplx* out);

/// Forward complex transform of length n, exp(-2 pi i j m / n) kernel.
void forward_complex(std::size_t n, const cplx* in, cplx* out);

/// Number of distinct plans created so far (for diagnostics).
std::size_t cached_plans();

}  // namespace dragonfly::fft
