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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace solarfit::test {

FootprintPolygon
rect_footprint(const std::string& id, double x0, double y0, double w, double h)
{
    return make_footprint(id, { { x0, y0 }, { x0 + w, y0 }, { x0 + w, y0 + h }, { x0, y0 + h } });
}

FootprintPolygon
random_star(std::mt19937_64& rng, const std::string& id, std::size_t vertices, Point2 center, double r_min,
            double r_max)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(r_min, r_max);
    for (;;) {
        std::vector<double> angles(vertices);
        for (auto& a : angles) {
            a = angle(rng);
        }
        std::sort(angles.begin(), angles.end());
        Ring ring;
        for (double a : angles) {
            const double r = radius(rng);
            ring.push_back({ center.x + r * std::cos(a), center.y + r * std::sin(a) });
        }
        try {
            return make_footprint(id, std::move(ring));
        } catch (const std::exception&) {
            // Near-duplicate angles can produce a spike; draw again.
        }
    }
}

FootprintPolygon
rigid_motion(const FootprintPolygon& poly, double angle, Point2 shift)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    auto move = [&](const Ring& r) {
        Ring out;
        for (const auto& p : r) {
            out.push_back({ c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y });
        }
        return out;
    };
    std::vector<Ring> holes;
    for (const auto& h : poly.holes) {
        holes.push_back(move(h));
    }
    return make_footprint(poly.id, move(poly.exterior), std::move(holes));
}

PvOutGrid
uniform_grid(std::size_t ncols, std::size_t nrows, double origin_x, double origin_y, double cell, double value)
{
    AsciiGrid g;
    g.ncols = ncols;
    g.nrows = nrows;
    g.origin_x = origin_x;
    g.origin_y = origin_y;
    g.cell_size = cell;
    g.values.assign(ncols * nrows, value);
    return PvOutGrid(std::move(g));
}

double
brute_force_mbr_area(std::span<const Point2> points)
{
    const Ring hull = convex_hull(points);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2 e = hull[(i + 1) % hull.size()] - hull[i];
        const double len = std::hypot(e.x, e.y);
        const Point2 u{ e.x / len, e.y / len };
        const Point2 v{ -u.y, u.x };
        double a0 = std::numeric_limits<double>::infinity(), a1 = -a0, b0 = a0, b1 = -a0;
        for (const auto& p : hull) {
            const double a = dot(p, u);
            const double b = dot(p, v);
            a0 = std::min(a0, a);
            a1 = std::max(a1, a);
            b0 = std::min(b0, b);
            b1 = std::max(b1, b);
        }
        best = std::min(best, (a1 - a0) * (b1 - b0));
    }
    return best;
}

bool
sampled_rect_inside(const OrientedRect& rect, const FootprintPolygon& poly, double step, double slack)
{
    const Point2 u = rect.axis();
    const Point2 v = rect.normal();
    const Point2 origin = rect.center - (0.5 * rect.length) * u - (0.5 * rect.width) * v;
    const auto nu = static_cast<std::size_t>(std::ceil(rect.length / step));
    const auto nv = static_cast<std::size_t>(std::ceil(rect.width / step));
    for (std::size_t i = 0; i <= nu; ++i) {
        const double a = std::min(rect.length, static_cast<double>(i) * step);
        for (std::size_t j = 0; j <= nv; ++j) {
            const double b = std::min(rect.width, static_cast<double>(j) * step);
            if (locate_point(origin + a * u + b * v, poly, slack) == Location::Outside) {
                return false;
            }
        }
    }
    return true;
}

bool
rects_overlap(const OrientedRect& a, const OrientedRect& b, double slack)
{
    const auto ca = a.corners();
    const auto cb = b.corners();
    for (const Point2 axis : { a.axis(), a.normal(), b.axis(), b.normal() }) {
        double a0 = std::numeric_limits<double>::infinity(), a1 = -a0, b0 = a0, b1 = -a0;
        for (const auto& p : ca) {
            a0 = std::min(a0, dot(p, axis));
            a1 = std::max(a1, dot(p, axis));
        }
        for (const auto& p : cb) {
            b0 = std::min(b0, dot(p, axis));
            b1 = std::max(b1, dot(p, axis));
        }
        if (a1 <= b0 + slack || b1 <= a0 + slack) {
            return false;
        }
    }
    return true;
}

TouchingSquares
touching_squares()
{
    TouchingSquares t;
    auto& m = t.masks;
    m.width = 24;
    m.height = 14;
    m.building.assign(m.width * m.height, 0);
    m.border.assign(m.width * m.height, 0);
    // 0.5 m pixels, upper-left pixel centre at (100.25, 200.75).
    m.geo = GeoTransform::from_world_file(0.5, 0.0, 0.0, -0.5, 100.25, 200.75);
    for (std::size_t r = 2; r < 12; ++r) {
        for (std::size_t c = 2; c < 22; ++c) {
            m.building[r * m.width + c] = 230;
        }
        // Last column of the left square is predicted as border.
        m.border[r * m.width + 11] = 240;
    }
    t.truth.push_back(make_footprint("A", { { 101, 195 }, { 106, 195 }, { 106, 200 }, { 101, 200 } }));
    t.truth.push_back(make_footprint("B", { { 106, 195 }, { 111, 195 }, { 111, 200 }, { 106, 200 } }));
    return t;
}

std::filesystem::path
temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("solarfit_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}
