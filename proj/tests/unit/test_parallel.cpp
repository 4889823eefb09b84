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

#include "solarfit/error.hpp"
#include "solarfit/parallel.hpp"

#include "doctest.h"

#include <cstdlib>
#include <stdexcept>
#include <string>

using namespace solarfit;

TEST_CASE("parallel_for visits every index once")
{
    for (std::size_t threads : { 1, 2, 3, 8, 64 }) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) {
            CHECK(h == 1);
        }
    }
    std::size_t calls = 0;
    parallel_for(0, 4, [&](std::size_t) { ++calls; });
    CHECK(calls == 0);
}

TEST_CASE("parallel_for rethrows the lowest failing index")
{
    for (std::size_t threads : { 1, 4 }) {
        try {
            parallel_for(100, threads, [](std::size_t i) {
                if (i == 30 || i == 80) {
                    throw std::runtime_error(std::to_string(i));
                }
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "30");
        }
    }
}

TEST_CASE("thread count resolution")
{
    CHECK(resolve_thread_count(3) == 3);
    CHECK_THROWS_AS(resolve_thread_count(0), InvalidArgumentError);
    setenv("SOLARFIT_THREADS", "5", 1);
    CHECK(resolve_thread_count() == 5);
    CHECK(resolve_thread_count(2) == 2);
    setenv("SOLARFIT_THREADS", "many", 1);
    CHECK_THROWS_AS(resolve_thread_count(), InvalidArgumentError);
    unsetenv("SOLARFIT_THREADS");
    CHECK(resolve_thread_count() >= 1);
}
