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

#include "solarfit/geometry.hpp"
#include "solarfit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace solarfit {

namespace {

double
orient(Point2 a, Point2 b, Point2 c)
{
    return cross(b - a, c - a);
}

bool
on_segment(Point2 a, Point2 b, Point2 p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed segment intersection with exact sign tests.
bool
segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2)
{
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);

    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
           (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

double
point_segment_distance(Point2 p, Point2 a, Point2 b)
{
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point2 d = p - (a + t * ab);
    return std::hypot(d.x, d.y);
}

// Crossing-number parity of a horizontal ray from p.
bool
ray_parity(Point2 p, std::span<const Point2> ring)
{
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = ring[i];
        const Point2 b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

Ring
clean_ring(Ring ring, const char* what)
{
    for (const auto& p : ring) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidGeometryError(std::string(what) + " has a non-finite coordinate");
        }
    }
    if (ring.size() > 1 && ring.front() == ring.back()) {
        ring.pop_back();
    }
    Ring out;
    out.reserve(ring.size());
    for (const auto& p : ring) {
        if (out.empty() || !(out.back() == p)) {
            out.push_back(p);
        }
    }
    while (out.size() > 1 && out.front() == out.back()) {
        out.pop_back();
    }
    if (out.size() < 3) {
        throw InvalidGeometryError(std::string(what) + " has fewer than 3 distinct vertices");
    }
    return out;
}

void
check_simple(const Ring& ring, const char* what)
{
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 prev = ring[(i + n - 1) % n];
        const Point2 cur = ring[i];
        const Point2 next = ring[(i + 1) % n];
        // Adjacent edges folding back onto each other.
        if (cross(cur - prev, next - cur) == 0 && dot(cur - prev, next - cur) < 0) {
            throw InvalidGeometryError(std::string(what) + " has a spike at vertex " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = ring[i];
        const Point2 b = ring[(i + 1) % n];
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) {
                continue;
            }
            if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) {
                throw InvalidGeometryError(std::string(what) + " is self-intersecting (edges " + std::to_string(i) +
                                           " and " + std::to_string(j) + ")");
            }
        }
    }
}

double
normalize_angle(double a)
{
    constexpr double pi = std::numbers::pi;
    a = std::fmod(a, pi);
    if (a < 0) {
        a += pi;
    }
    if (a >= pi - 1e-12) {
        a = 0.0;
    }
    return a;
}

Ring
clip_convex(const Ring& subject, std::span<const Point2> convex)
{
    Ring out = subject;
    const std::size_t m = convex.size();
    for (std::size_t k = 0; k < m && !out.empty(); ++k) {
        const Point2 c1 = convex[k];
        const Point2 c2 = convex[(k + 1) % m];
        Ring in = std::move(out);
        out.clear();
        const std::size_t n = in.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p = in[i];
            const Point2 q = in[(i + 1) % n];
            const double sp = orient(c1, c2, p);
            const double sq = orient(c1, c2, q);
            if (sp >= 0) {
                out.push_back(p);
            }
            if ((sp >= 0) != (sq >= 0)) {
                const double t = sp / (sp - sq);
                out.push_back(p + t * (q - p));
            }
        }
    }
    return out;
}

}

void
Box::expand(Point2 p)
{
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
}

Box
bounding_box(std::span<const Point2> pts)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    Box b{ inf, inf, -inf, -inf };
    for (const auto& p : pts) {
        b.expand(p);
    }
    return b;
}

FootprintPolygon
make_footprint(std::string id, Ring exterior, std::vector<Ring> holes)
{
    FootprintPolygon poly;
    poly.id = std::move(id);
    poly.exterior = clean_ring(std::move(exterior), "exterior ring");
    check_simple(poly.exterior, "exterior ring");
    double area = ring_signed_area(poly.exterior);
    if (area == 0) {
        throw InvalidGeometryError("exterior ring has zero area");
    }
    if (area < 0) {
        std::reverse(poly.exterior.begin(), poly.exterior.end());
        area = -area;
    }

    for (auto& h : holes) {
        Ring ring = clean_ring(std::move(h), "interior ring");
        check_simple(ring, "interior ring");
        double ha = ring_signed_area(ring);
        if (ha == 0) {
            throw InvalidGeometryError("interior ring has zero area");
        }
        if (ha > 0) {
            std::reverse(ring.begin(), ring.end());
        }
        for (const auto& p : ring) {
            if (locate_point(p, poly.exterior, 0.0) == Location::Outside) {
                throw InvalidGeometryError("interior ring extends outside the exterior ring");
            }
        }
        area -= std::abs(ha);
        poly.holes.push_back(std::move(ring));
    }
    if (!(area > 0)) {
        throw InvalidGeometryError("polygon has non-positive net area");
    }
    return poly;
}

double
ring_signed_area(std::span<const Point2> ring)
{
    const std::size_t n = ring.size();
    if (n < 3) {
        return 0.0;
    }
    // Shift to the first vertex to limit cancellation with large coordinates.
    const Point2 o = ring[0];
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        twice += cross(ring[i] - o, ring[i + 1] - o);
    }
    return 0.5 * twice;
}

double
polygon_area(const FootprintPolygon& poly)
{
    if (poly.exterior.size() < 3) {
        throw InvalidGeometryError("polygon " + poly.id + " has fewer than 3 vertices");
    }
    double area = std::abs(ring_signed_area(poly.exterior));
    for (const auto& h : poly.holes) {
        area -= std::abs(ring_signed_area(h));
    }
    return area;
}

Point2
polygon_centroid(const FootprintPolygon& poly)
{
    const Point2 o = poly.exterior.at(0);
    double sx = 0.0;
    double sy = 0.0;
    double sa = 0.0;
    auto accumulate = [&](const Ring& ring, double sign) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = ring[i] - o;
            const Point2 b = ring[(i + 1) % n] - o;
            const double c = cross(a, b) * sign;
            sa += c;
            sx += (a.x + b.x) * c;
            sy += (a.y + b.y) * c;
        }
    };
    accumulate(poly.exterior, ring_signed_area(poly.exterior) >= 0 ? 1.0 : -1.0);
    for (const auto& h : poly.holes) {
        accumulate(h, ring_signed_area(h) <= 0 ? 1.0 : -1.0);
    }
    if (sa == 0) {
        throw InvalidGeometryError("polygon " + poly.id + " has zero area");
    }
    return { o.x + sx / (3.0 * sa), o.y + sy / (3.0 * sa) };
}

Ring
convex_hull(std::span<const Point2> points)
{
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }

    Ring hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

Point2
OrientedRect::axis() const
{
    return { std::cos(axis_angle), std::sin(axis_angle) };
}

Point2
OrientedRect::normal() const
{
    return { -std::sin(axis_angle), std::cos(axis_angle) };
}

std::array<Point2, 4>
OrientedRect::corners() const
{
    const Point2 u = (0.5 * length) * axis();
    const Point2 v = (0.5 * width) * normal();
    return { center - u - v, center + u - v, center + u + v, center - u + v };
}

OrientedRect
min_bounding_rect(const FootprintPolygon& poly)
{
    if (poly.exterior.size() < 3) {
        throw InvalidGeometryError("polygon " + poly.id + " has fewer than 3 vertices");
    }
    return min_bounding_rect(std::span<const Point2>(poly.exterior));
}

OrientedRect
min_bounding_rect(std::span<const Point2> points)
{
    const Ring hull = convex_hull(points);
    const std::size_t n = hull.size();
    if (n < 3) {
        throw InvalidGeometryError("cannot bound a degenerate point set");
    }

    auto next = [n](std::size_t i) { return (i + 1) % n; };

    OrientedRect best;
    double best_area = std::numeric_limits<double>::infinity();

    // Calipers: k = farthest along the edge, j = farthest from the edge,
    // m = farthest against the edge. All three only ever advance.
    std::size_t k = 1;
    std::size_t j = 1;
    std::size_t m = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 base = hull[i];
        const Point2 e = hull[next(i)] - base;
        const double len = std::hypot(e.x, e.y);
        const Point2 u{ e.x / len, e.y / len };
        const Point2 v{ -u.y, u.x };

        if (i == 0) {
            k = next(i);
        }
        for (std::size_t guard = 0; guard < n && dot(hull[next(k)] - hull[k], u) > 0; ++guard) {
            k = next(k);
        }
        if (i == 0) {
            j = k;
        }
        for (std::size_t guard = 0; guard < n && dot(hull[next(j)] - hull[j], v) > 0; ++guard) {
            j = next(j);
        }
        if (i == 0) {
            m = j;
        }
        for (std::size_t guard = 0; guard < n && dot(hull[next(m)] - hull[m], u) < 0; ++guard) {
            m = next(m);
        }

        const double u_max = dot(hull[k] - base, u);
        const double u_min = dot(hull[m] - base, u);
        const double v_max = dot(hull[j] - base, v);
        const double along = u_max - u_min;
        const double area = along * v_max;

        OrientedRect cand;
        cand.center = base + (0.5 * (u_min + u_max)) * u + (0.5 * v_max) * v;
        if (along >= v_max) {
            cand.length = along;
            cand.width = v_max;
            cand.axis_angle = normalize_angle(std::atan2(u.y, u.x));
        } else {
            cand.length = v_max;
            cand.width = along;
            cand.axis_angle = normalize_angle(std::atan2(v.y, v.x));
        }

        if (i == 0 || area < best_area * (1.0 - 1e-12)) {
            best = cand;
            best_area = area;
        } else if (area <= best_area * (1.0 + 1e-12) && cand.axis_angle < best.axis_angle) {
            best = cand;
            best_area = std::min(best_area, area);
        }
    }
    return best;
}

Location
locate_point(Point2 p, std::span<const Point2> ring, double tol)
{
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, ring[i], ring[(i + 1) % n]) <= tol) {
            return Location::Boundary;
        }
    }
    return ray_parity(p, ring) ? Location::Inside : Location::Outside;
}

Location
locate_point(Point2 p, const FootprintPolygon& poly, double tol)
{
    const Location ext = locate_point(p, poly.exterior, tol);
    if (ext != Location::Inside) {
        return ext;
    }
    for (const auto& h : poly.holes) {
        const Location loc = locate_point(p, h, tol);
        if (loc == Location::Boundary) {
            return Location::Boundary;
        }
        if (loc == Location::Inside) {
            return Location::Outside;
        }
    }
    return Location::Inside;
}

PolygonFrame::PolygonFrame(const FootprintPolygon& poly, Point2 origin, Point2 u, Point2 v)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    m_extent = { inf, inf, -inf, -inf };

    auto add_ring = [&](const Ring& ring) {
        const std::size_t n = ring.size();
        const std::size_t first = m_edges.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 d = ring[i] - origin;
            const Point2 local{ dot(d, u), dot(d, v) };
            m_extent.expand(local);
            m_edges.push_back({ local, local, {} });
        }
        for (std::size_t i = 0; i < n; ++i) {
            Edge& e = m_edges[first + i];
            e.b = m_edges[first + (i + 1) % n].a;
            e.box = { std::min(e.a.x, e.b.x), std::min(e.a.y, e.b.y), std::max(e.a.x, e.b.x), std::max(e.a.y, e.b.y) };
        }
    };
    m_edges.reserve(poly.exterior.size());
    add_ring(poly.exterior);
    for (const auto& h : poly.holes) {
        add_ring(h);
    }
}

bool
PolygonFrame::contains_box(double x0, double y0, double x1, double y1, double tol) const
{
    // Shrink by the tolerance: boundary contact within `tol` is allowed.
    const double bx0 = x0 + tol;
    const double by0 = y0 + tol;
    const double bx1 = x1 - tol;
    const double by1 = y1 - tol;
    if (!(bx0 < bx1 && by0 < by1)) {
        return false;
    }
    if (bx0 < m_extent.min_x || bx1 > m_extent.max_x || by0 < m_extent.min_y || by1 > m_extent.max_y) {
        return false;
    }

    for (const auto& e : m_edges) {
        if (e.box.max_x <= bx0 || e.box.min_x >= bx1 || e.box.max_y <= by0 || e.box.min_y >= by1) {
            continue;
        }
        // Liang-Barsky clip against the shrunken box; an edge whose clipped
        // part has a midpoint strictly inside the box cuts the interior.
        const double dx = e.b.x - e.a.x;
        const double dy = e.b.y - e.a.y;
        const double p[4] = { -dx, dx, -dy, dy };
        const double q[4] = { e.a.x - bx0, bx1 - e.a.x, e.a.y - by0, by1 - e.a.y };
        double t0 = 0.0;
        double t1 = 1.0;
        bool rejected = false;
        for (int s = 0; s < 4 && !rejected; ++s) {
            if (p[s] == 0) {
                rejected = q[s] < 0;
            } else {
                const double r = q[s] / p[s];
                if (p[s] < 0) {
                    t0 = std::max(t0, r);
                } else {
                    t1 = std::min(t1, r);
                }
                rejected = t0 > t1;
            }
        }
        if (rejected || !(t0 < t1)) {
            continue;
        }
        const double tm = 0.5 * (t0 + t1);
        const double mx = e.a.x + tm * dx;
        const double my = e.a.y + tm * dy;
        if (bx0 < mx && mx < bx1 && by0 < my && my < by1) {
            return false;
        }
    }

    // No boundary inside the box: the box is in or out as a whole.
    const double cx = 0.5 * (bx0 + bx1);
    const double cy = 0.5 * (by0 + by1);
    bool inside = false;
    for (const auto& e : m_edges) {
        if ((e.a.y > cy) != (e.b.y > cy)) {
            const double x = e.a.x + (cy - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
            if (cx < x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

bool
rect_inside_polygon(const OrientedRect& rect, const FootprintPolygon& poly)
{
    const PolygonFrame frame(poly, rect.center, rect.axis(), rect.normal());
    const double hl = 0.5 * rect.length;
    const double hw = 0.5 * rect.width;
    return frame.contains_box(-hl, -hw, hl, hw);
}

double
intersection_area_convex(const FootprintPolygon& poly, std::span<const Point2> convex)
{
    double area = std::abs(ring_signed_area(clip_convex(poly.exterior, convex)));
    for (const auto& h : poly.holes) {
        area -= std::abs(ring_signed_area(clip_convex(h, convex)));
    }
    return std::max(area, 0.0);
}

double
iou_convex(const FootprintPolygon& poly, std::span<const Point2> convex)
{
    const double inter = intersection_area_convex(poly, convex);
    const double uni = polygon_area(poly) + std::abs(ring_signed_area(convex)) - inter;
    return uni > 0 ? inter / uni : 0.0;
}

LocalProjection::LocalProjection(LonLat ref)
  : m_ref(ref)
  , m_cos_lat(std::cos(ref.lat * std::numbers::pi / 180.0))
{
    if (!(ref.lat > -90.0 && ref.lat < 90.0)) {
        throw InvalidArgumentError("projection reference latitude must lie in (-90, 90)");
    }
}

Point2
LocalProjection::to_meters(LonLat p) const
{
    constexpr double rad = std::numbers::pi / 180.0;
    return { kEarthRadius * (p.lon - m_ref.lon) * rad * m_cos_lat, kEarthRadius * (p.lat - m_ref.lat) * rad };
}

LonLat
LocalProjection::to_degrees(Point2 p) const
{
    constexpr double deg = 180.0 / std::numbers::pi;
    return { m_ref.lon + p.x / (kEarthRadius * m_cos_lat) * deg, m_ref.lat + p.y / kEarthRadius * deg };
}

std::vector<Point2>
project_to_meters(std::span<const LonLat> ring, LonLat ref)
{
    const LocalProjection proj(ref);
    std::vector<Point2> out;
    out.reserve(ring.size());
    for (const auto& p : ring) {
        out.push_back(proj.to_meters(p));
    }
    return out;
}

}
