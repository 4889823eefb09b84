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

#include "solarfit/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace solarfit {

namespace {

double
pow10(int d)
{
    double p = 1.0;
    for (int i = 0; i < d; ++i) {
        p *= 10.0;
    }
    return p;
}

// Tolerance for treating a scaled value as sitting on a .5 tie.
double
tie_slack(double scaled)
{
    return std::abs(scaled) * 4e-15 + 1e-12;
}

}

std::string
format_fixed(double x, int decimals)
{
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    const double scaled = std::abs(x) * pow10(decimals);
    if (scaled >= 9e15) {
        char buf[512];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
        return buf;
    }
    double whole = std::floor(scaled);
    if (scaled - whole >= 0.5 - tie_slack(scaled)) {
        whole += 1.0;
    }
    auto digits = std::to_string(static_cast<std::int64_t>(whole));
    if (decimals > 0) {
        if (digits.size() <= static_cast<std::size_t>(decimals)) {
            digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
        }
        digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    }
    if (x < 0 && whole != 0.0) {
        digits.insert(0, "-");
    }
    return digits;
}

double
round_half_even(double x, int decimals)
{
    const double p = pow10(decimals);
    const double scaled = x * p;
    const double lower = std::floor(scaled);
    const double frac = scaled - lower;
    const double slack = tie_slack(scaled);
    double r;
    if (std::abs(frac - 0.5) <= slack) {
        r = std::fmod(lower, 2.0) == 0.0 ? lower : lower + 1.0;
    } else {
        r = frac < 0.5 ? lower : lower + 1.0;
    }
    return r / p;
}

std::string
format_shortest(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::optional<double>
parse_double(std::string_view s)
{
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

}
