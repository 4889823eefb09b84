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
#include "solarfit/error.hpp"
#include "solarfit/instances.hpp"

#include "doctest.h"

#include <fstream>
#include <random>
#include <set>

using namespace solarfit;

namespace {

MaskPair
blank(std::size_t w, std::size_t h)
{
    MaskPair m;
    m.width = w;
    m.height = h;
    m.building.assign(w * h, 0);
    m.border.assign(w * h, 0);
    return m;
}

void
fill(MaskPair& m, std::size_t c0, std::size_t r0, std::size_t c1, std::size_t r1, std::uint8_t v = 255)
{
    for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) {
            m.building[r * m.width + c] = v;
        }
    }
}

// Unit pixels with y pointing down the image, as the default transform does.
const GeoTransform kPixelGeo{};

}

TEST_CASE("world file coefficients locate pixel centers")
{
    auto g = GeoTransform::from_world_file(0.5, 0.0, 0.0, -0.5, 100.25, 200.75);
    CHECK(g.apply(0, 0) == Point2{ 100.0, 201.0 });
    CHECK(g.apply(24, 14) == Point2{ 112.0, 194.0 });
    CHECK(g.apply(0.5, 0.5) == Point2{ 100.25, 200.75 });
    CHECK(g.determinant() == doctest::Approx(-0.25));
}

TEST_CASE("touching squares split along the border stripe")
{
    auto t = test::touching_squares();
    auto labels = watershed_instances(t.masks);
    CHECK(labels.count == 2);
    CHECK(labels.pixel_count(1) == 100);
    CHECK(labels.pixel_count(2) == 100);
    // The border column is flooded from the left square.
    CHECK(labels.at(11, 5) == labels.at(10, 5));
    CHECK(labels.at(12, 5) != labels.at(11, 5));

    auto polys = trace_all(labels, t.masks.geo);
    REQUIRE(polys.size() == 2);
    CHECK(polys[0].id == "0");
    CHECK(polys[1].id == "1");
    for (std::size_t i = 0; i < 2; ++i) {
        auto reg = regularize(polys[i]);
        const auto& truth = t.truth[i].exterior;
        CHECK(iou_convex(reg, truth) >= 0.95);
    }
}

TEST_CASE("single blob and empty masks")
{
    auto m = blank(30, 30);
    fill(m, 5, 5, 25, 25);
    auto labels = watershed_instances(m);
    CHECK(labels.count == 1);
    CHECK(labels.pixel_count(1) == 400);
    auto poly = trace_polygon(labels, 1, kPixelGeo);
    CHECK(poly.id == "0");
    CHECK(poly.exterior.size() == 4);
    CHECK(polygon_area(poly) == doctest::Approx(400.0));

    auto empty = watershed_instances(blank(10, 10));
    CHECK(empty.count == 0);
    CHECK(trace_all(empty, kPixelGeo).empty());
    CHECK_THROWS_AS(trace_polygon(empty, 1, kPixelGeo), NotFoundError);
}

TEST_CASE("seedless building pixels still form an instance")
{
    auto m = blank(10, 10);
    fill(m, 2, 2, 5, 5);
    for (std::size_t r = 2; r < 5; ++r) {
        for (std::size_t c = 2; c < 5; ++c) {
            m.border[r * m.width + c] = 255;
        }
    }
    auto labels = watershed_instances(m);
    CHECK(labels.count == 1);
    CHECK(labels.pixel_count(1) == 9);
}

TEST_CASE("small seeds are ignored but their pixels are flooded")
{
    auto m = blank(12, 4);
    fill(m, 0, 0, 12, 4);
    // Border everywhere except a 1-pixel seed and a 2x2 seed.
    for (auto& b : m.border) {
        b = 255;
    }
    m.border[0] = 0;
    for (std::size_t r = 1; r < 3; ++r) {
        for (std::size_t c = 8; c < 10; ++c) {
            m.border[r * m.width + c] = 0;
        }
    }
    auto labels = watershed_instances(m);
    CHECK(labels.count == 1);
    CHECK(labels.pixel_count(1) == 48);
}

TEST_CASE("mask validation")
{
    auto m = blank(4, 4);
    m.border.resize(3);
    CHECK_THROWS_AS(watershed_instances(m), InvalidArgumentError);
    auto s = blank(4, 4);
    s.geo.pixel_w = 0;
    s.geo.row_rot = 0;
    CHECK_THROWS_AS(watershed_instances(s), InvalidArgumentError);
}

TEST_CASE("plus shape traces to twelve corners")
{
    auto m = blank(5, 5);
    fill(m, 2, 1, 3, 4);
    fill(m, 1, 2, 4, 3);
    auto labels = watershed_instances(m, { 128, 128, 1 });
    REQUIRE(labels.count == 1);
    auto poly = trace_polygon(labels, 1, kPixelGeo);
    CHECK(poly.exterior.size() == 12);
    CHECK(polygon_area(poly) == doctest::Approx(5.0));
}

TEST_CASE("ring of pixels traces with a hole")
{
    auto m = blank(7, 7);
    fill(m, 1, 1, 6, 6);
    fill(m, 2, 2, 5, 5, 0);
    auto labels = watershed_instances(m);
    REQUIRE(labels.count == 1);
    auto poly = trace_polygon(labels, 1, kPixelGeo);
    CHECK(poly.holes.size() == 1);
    CHECK(polygon_area(poly) == doctest::Approx(16.0));
}

TEST_CASE("traced area equals pixel count for random 4-connected blobs")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pos(2, 25), size(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        InstanceLabelMap labels;
        labels.width = 32;
        labels.height = 32;
        labels.labels.assign(32 * 32, 0);
        labels.count = 1;
        // Chain of overlapping rectangles keeps the blob 4-connected.
        int c = pos(rng), r = pos(rng);
        for (int k = 0; k < 6; ++k) {
            const int w = size(rng), h = size(rng);
            for (int y = r; y < std::min(32, r + h); ++y) {
                for (int x = c; x < std::min(32, c + w); ++x) {
                    labels.labels[static_cast<std::size_t>(y * 32 + x)] = 1;
                }
            }
            c = std::clamp(c + std::uniform_int_distribution<int>(0, w - 1)(rng), 0, 31);
            r = std::clamp(r + std::uniform_int_distribution<int>(0, h - 1)(rng), 0, 31);
        }
        auto poly = trace_polygon(labels, 1, kPixelGeo);
        CHECK(polygon_area(poly) == doctest::Approx(static_cast<double>(labels.pixel_count(1))));
    }
}

TEST_CASE("diagonal pinch pixel is left out of the main contour")
{
    InstanceLabelMap labels;
    labels.width = 6;
    labels.height = 6;
    labels.labels.assign(36, 0);
    labels.count = 1;
    for (std::size_t r = 1; r < 3; ++r) {
        for (std::size_t c = 1; c < 3; ++c) {
            labels.labels[r * 6 + c] = 1;
        }
    }
    labels.labels[3 * 6 + 3] = 1;
    auto poly = trace_polygon(labels, 1, kPixelGeo);
    CHECK(polygon_area(poly) == doctest::Approx(4.0));
}

TEST_CASE("simplify_ring drops points within epsilon")
{
    Ring r{ { 0, 0 }, { 5, 0.1 }, { 10, 0 }, { 10, 10 }, { 5, 10.2 }, { 0, 10 } };
    auto s = simplify_ring(r, 0.5);
    CHECK(s.size() == 4);
    CHECK(simplify_ring(r, 0.0).size() == 6);
}

TEST_CASE("regularize snaps near-rectangles and keeps other shapes")
{
    // Staircase edge: area / MBR area is well above 0.85.
    auto stairs = make_footprint("s", { { 0, 0 }, { 10, 0 }, { 10, 5 }, { 9.7, 5 }, { 9.7, 5.3 }, { 0, 5.3 } });
    auto snapped = regularize(stairs);
    CHECK(snapped.exterior.size() == 4);
    CHECK(snapped.id == "s");

    auto l = make_footprint("L", { { 0, 0 }, { 10, 0 }, { 10, 3 }, { 3, 3 }, { 3, 10 }, { 0, 10 } });
    auto kept = regularize(l);
    CHECK(kept.exterior.size() == 6);
    CHECK(polygon_area(kept) == doctest::Approx(51.0));

    CHECK_THROWS_AS(regularize(l, { -1.0, 0.85 }), InvalidArgumentError);
}

TEST_CASE("regularize is idempotent")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto f = test::random_star(rng, "r", 6 + i % 40, { 0, 0 }, 2.0, 12.0);
        const RegularizeParams params{ 0.2 + 0.01 * (i % 50), 0.85 };
        FootprintPolygon once;
        try {
            once = regularize(f, params);
        } catch (const DegenerateResultError&) {
            continue;
        }
        auto twice = regularize(once, params);
        CHECK(twice.exterior == once.exterior);
    }
}

TEST_CASE("PGM and world file round trip")
{
    auto dir = test::temp_dir("pgm");
    GrayImage img{ 3, 2, { 0, 10, 20, 30, 40, 255 } };
    write_pgm(img, dir / "a.pgm");
    auto back = read_pgm(dir / "a.pgm");
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    CHECK(back.pixels == img.pixels);

    std::ofstream(dir / "a.pgw") << "0.5\n0\n0\n-0.5\n100.25\n200.75\n";
    auto g = read_world_file(dir / "a.pgw");
    CHECK(g.apply(0, 0) == Point2{ 100.0, 201.0 });

    std::ofstream(dir / "bad.pgw") << "0.5\n0\nx\n";
    CHECK_THROWS_AS(read_world_file(dir / "bad.pgw"), ParseError);
    std::ofstream(dir / "p2.pgm") << "P2\n1 1\n255\n0\n";
    CHECK_THROWS_AS(read_pgm(dir / "p2.pgm"), ParseError);
}
