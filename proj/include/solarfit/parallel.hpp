// Copyright (c) 2026 The solarfit authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace solarfit {

/// Explicit request if given, else $SOLARFIT_THREADS, else hardware
/// concurrency (at least 1).
std::size_t
resolve_thread_count(std::optional<std::size_t> requested = std::nullopt);

/// Runs body(i) for i in [0, n) over `threads` workers using contiguous
/// static chunks. Results must be written by index so output never depends
/// on scheduling. If any call throws, the exception of the smallest failing
/// index is rethrown after all workers finish.
template<typename Body>
void
parallel_for(std::size_t n, std::size_t threads, Body&& body)
{
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }

    struct Failure
    {
        std::size_t index = std::numeric_limits<std::size_t>::max();
        std::exception_ptr error;
    };
    std::vector<Failure> failures(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t lo = std::min(n, t * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        workers.emplace_back([&, t, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    body(i);
                } catch (...) {
                    failures[t] = { i, std::current_exception() };
                    return;
                }
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    const auto first = std::min_element(failures.begin(), failures.end(),
                                        [](const Failure& a, const Failure& b) { return a.index < b.index; });
    if (first->error) {
        std::rethrow_exception(first->error);
    }
}

}
