// Copyright 2026 The kzpar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KZ_LOOP_HPP
#define KZ_LOOP_HPP

#include <chrono>
#include <utility>

#include "kz/solver.hpp"

namespace kz::detail {

inline double
seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

///
/// Single-threaded outer loop: test the stopping criterion on x^(k), stop at
/// the iteration budget, otherwise advance with step(x, k).
///
template <typename Step>
RunReport
run_loop(const Workload& w, const RunControl& ctl, Step&& step)
{
    const LoopLimits lim = loop_limits(w, ctl);
    DenseVector      x(w.system().cols(), 0.0);

    std::size_t k         = 0;
    std::size_t evals     = 0;
    bool        converged = false;

    if (ctl.observer)
        ctl.observer(0, x);

    const auto t0 = std::chrono::steady_clock::now();
    while (true)
    {
        if (lim.stop_on_error)
        {
            ++evals;
            if (distance_sq(x, *lim.reference) < lim.epsilon)
            {
                converged = true;
                break;
            }
        }
        if (k >= lim.max_iterations)
            break;
        step(x, k);
        ++k;
        if (ctl.observer)
            ctl.observer(k, x);
    }
    const double elapsed = seconds_since(t0);

    return finish_report(w, ctl, std::move(x), k, converged, elapsed, evals);
}

} // namespace kz::detail

#endif // KZ_LOOP_HPP
