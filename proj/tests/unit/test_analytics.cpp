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

#include "fixtures.hpp"
#include "solarfit/analytics.hpp"
#include "solarfit/error.hpp"

#include "doctest.h"

#include <random>

using namespace solarfit;
using solarfit::test::rect_footprint;

namespace {

RooftopAssessment
fake(const std::string& id, Point2 c, double sp_full, double area = 100.0)
{
    RooftopAssessment a;
    a.building_id = id;
    a.centroid = c;
    a.footprint_area = area;
    a.pv_out = 1.7;
    for (double u : kDefaultUtilization) {
        a.sp_by_u.emplace_back(u, sp_full * u);
    }
    return a;
}

}

TEST_CASE("solar potential of the demo roof")
{
    const PanelSpec spec;
    CHECK(solar_potential(45, spec, 1.6911, 1.0) == doctest::Approx(30.4398).epsilon(1e-9));
    CHECK(std::abs(solar_potential(45, spec, 1.6911, 1.0) - 30.4398) <= 1e-4);
    // Linear in u: no rounding of n * u.
    CHECK(solar_potential(45, spec, 1.6911, 0.1) == doctest::Approx(3.04398));
    CHECK(solar_potential(0, spec, 1.6911, 0.5) == 0.0);
    CHECK_THROWS_AS(solar_potential(45, spec, 1.6911, 0.0), InvalidArgumentError);
    CHECK_THROWS_AS(solar_potential(45, spec, 1.6911, 1.5), InvalidArgumentError);
    CHECK_THROWS_AS(solar_potential(45, spec, 0.0, 0.5), InvalidArgumentError);
    CHECK_THROWS_AS(solar_potential(-1, spec, 1.6, 0.5), InvalidArgumentError);
}

TEST_CASE("households served")
{
    CHECK(households_served(40.81) == 7.5);
    CHECK(households_served(9.747) == 1.8);
    CHECK(households_served(0.0) == 0.0);
    CHECK_THROWS_AS(households_served(1.0, 0.0), InvalidArgumentError);
}

TEST_CASE("standard error")
{
    const std::vector<double> v{ 1, 2, 3, 4 };
    CHECK(standard_error(v) == doctest::Approx(0.6454972243679028));
    const std::vector<double> c(7, 3.25);
    CHECK(standard_error(c) == 0.0);
    const std::vector<double> one{ 1.0 };
    CHECK_THROWS_AS(standard_error(one), InsufficientSamplesError);
}

TEST_CASE("utilization validation")
{
    CHECK_NOTHROW(validate_utilization(kDefaultUtilization));
    CHECK_THROWS_AS(validate_utilization(std::vector<double>{}), InvalidArgumentError);
    CHECK_THROWS_AS(validate_utilization(std::vector<double>{ 0.5, 0.25 }), InvalidArgumentError);
    CHECK_THROWS_AS(validate_utilization(std::vector<double>{ 0.0, 0.25 }), InvalidArgumentError);
    CHECK_THROWS_AS(validate_utilization(std::vector<double>{ 1.2 }), InvalidArgumentError);
}

TEST_CASE("assess a rooftop end to end")
{
    auto grid = test::uniform_grid(2, 2, -100, -100, 100, 1.6911);
    AssessOptions opts;
    opts.nodata_policy = NodataPolicy::Fail;
    auto a = assess_rooftop(rect_footprint("demo", 0, 0, 10, 9.9), grid, opts);
    CHECK(a.panel_count == 45);
    CHECK(a.pv_out == 1.6911);
    CHECK(a.footprint_area == doctest::Approx(99.0));
    CHECK(std::abs(a.sp_at(1.0) - 30.4398) <= 1e-4);
    CHECK(a.sp_at(0.5) == doctest::Approx(15.2199));
    CHECK_THROWS_AS(a.sp_at(0.3), InvalidArgumentError);
}

TEST_CASE("assess_all is independent of the thread count")
{
    std::mt19937_64 rng(17);
    std::vector<FootprintPolygon> fps;
    for (int i = 0; i < 200; ++i) {
        fps.push_back(test::random_star(rng, "b" + std::to_string(199 - i), 8, { 5.0 * i, 0 }, 3, 9));
    }
    auto grid = test::uniform_grid(20, 2, -50, -50, 60, 1.7);
    AssessOptions opts;
    auto one = assess_all(fps, grid, opts, 1);
    auto many = assess_all(fps, grid, opts, 7);
    REQUIRE(one.size() == many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].building_id == many[i].building_id);
        CHECK(one[i].panel_count == many[i].panel_count);
        CHECK(one[i].sp_by_u == many[i].sp_by_u);
    }
    CHECK(std::is_sorted(one.begin(), one.end(),
                         [](const auto& a, const auto& b) { return a.building_id < b.building_id; }));
}

TEST_CASE("ground coverage ratio extremes")
{
    // 1 km^2 districts; dense: 270 buildings of 1000 m^2, sparse: 55 of 100 m^2.
    auto district = make_district("d", { rect_footprint("d", 0, 0, 1000, 1000) });
    std::vector<RooftopAssessment> dense, sparse;
    for (int i = 0; i < 270; ++i) {
        dense.push_back(fake(std::to_string(i), { 1, 1 }, 1, 1000.0));
    }
    for (int i = 0; i < 55; ++i) {
        sparse.push_back(fake(std::to_string(i), { 1, 1 }, 1, 100.0));
    }
    CHECK(std::abs(ground_coverage_ratio(dense, district) - 0.27) <= 1e-9);
    CHECK(std::abs(ground_coverage_ratio(sparse, district) - 0.0055) <= 1e-9);
}

TEST_CASE("hypothetical capacity of a flat square kilometre")
{
    auto district = make_district("d", { rect_footprint("d", 0, 0, 1000, 1000) });
    auto grid = test::uniform_grid(4, 4, -500, -500, 500, 1.7);
    // 1e6 / 1.98 * 0.4 * 1.7
    CHECK(std::abs(hypothetical_capacity(district, PanelSpec{}, grid) - 343434.34343434346) <= 0.01);
}

TEST_CASE("district assignment ties go to the first name")
{
    std::vector<District> ds{ make_district("west", { rect_footprint("w", 0, 0, 10, 10) }),
                              make_district("east", { rect_footprint("e", 10, 0, 10, 10) }) };
    std::vector<RooftopAssessment> as{ fake("a", { 5, 5 }, 1), fake("b", { 10, 5 }, 1), fake("c", { 15, 5 }, 1),
                                       fake("d", { 50, 5 }, 1) };
    auto idx = assign_districts(as, ds);
    CHECK(idx[0] == 0u);
    CHECK(idx[1] == 1u); // "east" < "west"
    CHECK(idx[2] == 1u);
    CHECK_FALSE(idx[3]);
}

TEST_CASE("district report aggregates in id order")
{
    auto district = make_district("d", { rect_footprint("d", 0, 0, 1000, 1000) });
    auto grid = test::uniform_grid(4, 4, -500, -500, 500, 1.7);
    std::vector<RooftopAssessment> as{ fake("a", { 1, 1 }, 10), fake("b", { 2, 2 }, 20), fake("c", { 3, 3 }, 400) };
    ReportOptions opts;
    auto r = district_report(as, district, grid, opts);
    CHECK(r.building_count == 3);
    CHECK(r.tsp.back() == doctest::Approx(430));
    CHECK(r.asp.back() == doctest::Approx(430.0 / 3));
    CHECK(r.tsp[2] == doctest::Approx(215));
    REQUIRE(r.se[0]);
    const std::vector<double> at10{ 1, 2, 40 };
    CHECK(*r.se[0] == doctest::Approx(standard_error(at10)));
    CHECK(r.gcr == doctest::Approx(300.0 / 1e6));
    CHECK(*r.tsp_over_hc == doctest::Approx(430 / 343434.34343434346));
    // Overflow at u = 0.5: only "c" (200) is below 350, so none.
    CHECK(r.overflow_count == 0);

    std::vector<RooftopAssessment> single{ fake("z", { 1, 1 }, 800) };
    auto s = district_report(single, district, grid, opts);
    CHECK_FALSE(s.se[0]);
    CHECK(s.overflow_count == 1);

    auto u = unassigned_report(as, opts);
    CHECK(u.name == "unassigned");
    CHECK_FALSE(u.gcr);
    CHECK_FALSE(u.hc);
    CHECK_FALSE(u.tsp_over_hc);

    ReportOptions partial;
    partial.utilization = { 0.1, 0.5 };
    partial.histogram_u = 0.5;
    std::vector<RooftopAssessment> short_list{ fake("a", { 1, 1 }, 10) };
    short_list[0].sp_by_u = { { 0.1, 1.0 }, { 0.5, 5.0 } };
    CHECK_FALSE(district_report(short_list, district, grid, partial).tsp_over_hc);
}

TEST_CASE("histogram bins")
{
    std::vector<RooftopAssessment> as;
    for (double sp : { 0.5, 1.0, 9.99, 10.0, 49.0, 100.0, 349.9, 350.0, 1000.0 }) {
        as.push_back(fake(std::to_string(sp), { 0, 0 }, sp));
    }
    auto h = sp_histogram(as, 1.0);
    CHECK(h.counts == std::vector<std::size_t>{ 1, 2, 2, 0, 2, 2 });
    double pct = 0;
    for (double p : h.percents) {
        pct += p;
    }
    CHECK(pct == doctest::Approx(100.0));
    CHECK_THROWS_AS(sp_histogram(as, 1.0, std::vector<double>{ 5, 1 }), InvalidArgumentError);
}

TEST_CASE("heatmap of a single building")
{
    std::vector<RooftopAssessment> as{ fake("a", { 1250, 1250 }, 20) };
    HeatmapOptions opts;
    opts.window_area = 1e6;
    opts.stride = 500;
    auto g = sliding_window_heatmap(as, opts);
    CHECK(g.cell_size == 500);
    std::size_t covered = 0;
    for (std::size_t r = 0; r < g.nrows; ++r) {
        for (std::size_t c = 0; c < g.ncols; ++c) {
            const Point2 cc = g.cell_center(c, r);
            const bool inside = 1250 >= cc.x - 500 && 1250 < cc.x + 500 && 1250 >= cc.y - 500 && 1250 < cc.y + 500;
            if (inside) {
                ++covered;
                CHECK(g.at(c, r) == doctest::Approx(10.0));
            } else {
                CHECK(g.is_nodata(g.at(c, r)));
            }
        }
    }
    CHECK(covered == 4);
    opts.stride = 0;
    CHECK_THROWS_AS(sliding_window_heatmap(as, opts), InvalidArgumentError);
}

TEST_CASE("heatmap interior of a checkerboard lattice is uniform")
{
    // 100 m lattice, alternating SP 10 and 30; every 2 km window holds 20 x 20 points.
    std::vector<RooftopAssessment> as;
    for (int i = 0; i < 80; ++i) {
        for (int j = 0; j < 80; ++j) {
            as.push_back(fake(std::to_string(i * 80 + j), { 50.0 + 100 * i, 50.0 + 100 * j }, (i + j) % 2 ? 30 : 10));
        }
    }
    HeatmapOptions opts;
    opts.u = 1.0;
    opts.extent = Box{ 0, 0, 8000, 8000 };
    opts.threads = 3;
    auto g = sliding_window_heatmap(as, opts);
    CHECK(g.ncols == 16);
    CHECK(g.nrows == 16);
    for (std::size_t r = 2; r < 14; ++r) {
        for (std::size_t c = 2; c < 14; ++c) {
            CHECK(g.at(c, r) == doctest::Approx(20.0).epsilon(1e-12));
        }
    }
    opts.threads = 1;
    CHECK(sliding_window_heatmap(as, opts).values == g.values);
}
