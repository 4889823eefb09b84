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

#include <optional>
#include <string>
#include <string_view>

namespace solarfit {

/// Fixed-point text with `decimals` digits, rounding half away from zero.
/// Values within a few ulps of a decimal tie count as the tie, so 7.60995
/// prints as 7.6100 even when its binary value sits just below.
std::string
format_fixed(double x, int decimals);

/// Rounds to `decimals` digits, ties (up to binary noise) to even.
double
round_half_even(double x, int decimals);

/// Shortest text that parses back to the same double.
std::string
format_shortest(double x);

/// Whole-token parse; nullopt on any trailing garbage.
std::optional<double>
parse_double(std::string_view s);

}
