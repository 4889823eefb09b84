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

#include "doctest.h"

#include <cmath>

using namespace solarfit;

TEST_CASE("format_fixed rounds half away from zero")
{
    CHECK(format_fixed(2.5, 0) == "3");
    CHECK(format_fixed(-2.5, 0) == "-3");
    CHECK(format_fixed(0.0, 4) == "0.0000");
    CHECK(format_fixed(-0.00001, 4) == "0.0000");
    CHECK(format_fixed(1.23456, 2) == "1.23");
    CHECK(format_fixed(123.0, 1) == "123.0");
}

TEST_CASE("format_fixed treats binary noise around a decimal tie as the tie")
{
    // 45 panels * 0.4 kWp * 1.6911 at u = 0.25 and 0.75.
    CHECK(format_fixed(45 * 0.4 * 1.6911 * 0.25, 4) == "7.6100");
    CHECK(format_fixed(45 * 0.4 * 1.6911 * 0.75, 4) == "22.8299");
    CHECK(format_fixed(45 * 0.4 * 1.6911 * 0.1, 4) == "3.0440");
    CHECK(format_fixed(45 * 0.4 * 1.6911 * 0.5, 4) == "15.2199");
    CHECK(format_fixed(45 * 0.4 * 1.6911, 4) == "30.4398");
}

TEST_CASE("format_fixed handles huge and non-finite values")
{
    CHECK(format_fixed(1e20, 2) == "100000000000000000000.00");
    CHECK(format_fixed(NAN, 2) == "nan");
    CHECK(format_fixed(-INFINITY, 2) == "-inf");
}

TEST_CASE("round_half_even")
{
    CHECK(round_half_even(0.125, 2) == doctest::Approx(0.12));
    CHECK(round_half_even(0.375, 2) == doctest::Approx(0.38));
    CHECK(round_half_even(2.5, 0) == 2.0);
    CHECK(round_half_even(3.5, 0) == 4.0);
    CHECK(round_half_even(7.5434, 1) == doctest::Approx(7.5));
}

TEST_CASE("format_shortest round-trips")
{
    for (double v : { 0.1, 1.0 / 3.0, 1e-300, 6371008.8, -2.5, 500.0 }) {
        const auto back = parse_double(format_shortest(v));
        REQUIRE(back);
        CHECK(*back == v);
    }
    CHECK(format_shortest(500.0) == "500");
}

TEST_CASE("parse_double is whole-token")
{
    CHECK(parse_double("1.5") == 1.5);
    CHECK(parse_double("+2") == 2.0);
    CHECK(parse_double("-1e3") == -1000.0);
    CHECK_FALSE(parse_double(""));
    CHECK_FALSE(parse_double("1.5x"));
    CHECK_FALSE(parse_double("abc"));
    CHECK_FALSE(parse_double(" 1"));
}
