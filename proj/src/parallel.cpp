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

#include "solarfit/parallel.hpp"
#include "solarfit/error.hpp"

#include <cstdlib>
#include <string>

namespace solarfit {

std::size_t
resolve_thread_count(std::optional<std::size_t> requested)
{
    if (requested) {
        if (*requested == 0) {
            throw InvalidArgumentError("thread count must be positive");
        }
        return *requested;
    }
    if (const char* env = std::getenv("SOLARFIT_THREADS"); env && *env) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception&) {
        }
        throw InvalidArgumentError(std::string("SOLARFIT_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}
