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

#include "dragonfly/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <fftw3.h>

namespace dragonfly::fft {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::map<std::pair<int, std::size_t>, PlanPtr>& plans()
{
    static std::map<std::pair<int, std::size_t>, PlanPtr> p;
    return p;
}

// FFTW_UNALIGNED lets the plan run on arbitrary std::vector storage.
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_plan plan_for(int kind, std::size_t n)
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto& cache = plans();
    auto it = cache.find({kind, n});
    if (it != cache.end()) return it->second.get();
    const int ni = static_cast<int>(n);
    fftw_plan p = nullptr;
    if (kind == 0) {
        double* in = fftw_alloc_real(n);
        fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
        p = fftw_plan_dft_r2c_1d(ni, in, out, kFlags);
        fftw_free(in);
        fftw_free(out);
    } else {
        fftw_complex* in = fftw_alloc_complex(n);
        fftw_complex* out = fftw_alloc_complex(n);
        p = fftw_plan_dft_1d(ni, in, out, FFTW_FORWARD, kFlags);
        fftw_free(in);
        fftw_free(out);
    }
    if (!p) throw std::runtime_error("fft: plan creation failed");
    cache.emplace(std::make_pair(kind, n), PlanPtr(p));
    return p;
}

}  // namespace

void forward_real(std::size_t n, const double* in, cplx* out)
{
    fftw_execute_dft_r2c(plan_for(0, n), const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void forward_complex(std::size_t n, const cplx* in, cplx* out)
{
    fftw_execute_dft(plan_for(1, n), reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

std::size_t cached_plans()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    return plans().size();
}

}  // namespace dragonfly::fft
