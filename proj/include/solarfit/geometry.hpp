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

#include <array>
#include <span>
#include <string>
#include <vector>

namespace solarfit {

/// Projected coordinate in meters (x east, y north).
struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2
operator+(Point2 a, Point2 b)
{
    return { a.x + b.x, a.y + b.y };
}

inline Point2
operator-(Point2 a, Point2 b)
{
    return { a.x - b.x, a.y - b.y };
}

inline Point2
operator*(double s, Point2 a)
{
    return { s * a.x, s * a.y };
}

inline double
dot(Point2 a, Point2 b)
{
    return a.x * b.x + a.y * b.y;
}

inline double
cross(Point2 a, Point2 b)
{
    return a.x * b.y - a.y * b.x;
}

/// Ring of vertices, implicitly closed (the first vertex is not repeated).
using Ring = std::vector<Point2>;

/// Tolerance, in meters, under which a point counts as lying on a boundary.
inline constexpr double kContainmentTolerance = 1e-9;

/// One building footprint. Instances built through make_footprint() always
/// satisfy: exterior CCW, holes CW, every ring simple with >= 3 vertices,
/// no repeated consecutive vertex, and positive net area.
struct FootprintPolygon
{
    std::string id;
    Ring exterior;
    std::vector<Ring> holes;
};

/// Validates and canonicalizes a footprint. A repeated closing vertex and
/// consecutive duplicates are dropped and ring orientations are fixed up.
/// Throws InvalidGeometryError for degenerate, non-finite or self-intersecting
/// input.
FootprintPolygon
make_footprint(std::string id, Ring exterior, std::vector<Ring> holes = {});

/// Shoelace area, positive for CCW rings.
double
ring_signed_area(std::span<const Point2> ring);

/// Net area of the exterior minus holes. Throws InvalidGeometryError if the
/// exterior has fewer than 3 distinct vertices.
double
polygon_area(const FootprintPolygon& poly);

/// Area centroid (holes subtracted).
Point2
polygon_centroid(const FootprintPolygon& poly);

/// Andrew monotone chain. CCW, collinear vertices dropped. Collinear input
/// yields the two extreme points, a single point yields itself.
Ring
convex_hull(std::span<const Point2> points);

struct Box
{
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    bool overlaps(const Box& o) const
    {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }

    void expand(Point2 p);
};

Box
bounding_box(std::span<const Point2> pts);

/// Rotated rectangle. `axis_angle` lies in [0, pi) and points along the long
/// side; `length >= width`.
struct OrientedRect
{
    Point2 center;
    double axis_angle = 0.0;
    double length = 0.0;
    double width = 0.0;

    Point2 axis() const;
    Point2 normal() const;
    double area() const { return length * width; }

    /// CCW corners starting at center - axis*length/2 - normal*width/2.
    std::array<Point2, 4> corners() const;
};

/// Minimum-area enclosing rectangle of the exterior ring (rotating calipers
/// over the convex hull). Ties within 1e-12 relative area go to the
/// smallest axis_angle.
OrientedRect
min_bounding_rect(const FootprintPolygon& poly);

OrientedRect
min_bounding_rect(std::span<const Point2> points);

enum class Location
{
    Outside,
    Boundary,
    Inside
};

Location
locate_point(Point2 p, std::span<const Point2> ring, double tol = kContainmentTolerance);

/// Location relative to the polygon area (holes are outside).
Location
locate_point(Point2 p, const FootprintPolygon& poly, double tol = kContainmentTolerance);

/// Polygon rings re-expressed in an orthonormal frame (origin, u, v) so that
/// axis-aligned box containment can be answered in O(edges).
class PolygonFrame
{
  public:
    PolygonFrame(const FootprintPolygon& poly, Point2 origin, Point2 u, Point2 v);

    /// Closed containment of [x0,x1]x[y0,y1] (frame coordinates), up to `tol`.
    bool contains_box(double x0, double y0, double x1, double y1, double tol = kContainmentTolerance) const;

    const Box& extent() const { return m_extent; }

  private:
    struct Edge
    {
        Point2 a;
        Point2 b;
        Box box;
    };

    std::vector<Edge> m_edges;
    Box m_extent;
};

/// True iff the rectangle lies within the polygon (holes excluded), with
/// boundary contact counting as inside.
bool
rect_inside_polygon(const OrientedRect& rect, const FootprintPolygon& poly);

/// Area of poly ∩ convex, where `convex` is a CCW convex ring.
double
intersection_area_convex(const FootprintPolygon& poly, std::span<const Point2> convex);

/// Intersection over union of a polygon and a CCW convex ring.
double
iou_convex(const FootprintPolygon& poly, std::span<const Point2> convex);

/// Geographic coordinate in degrees (WGS84).
struct LonLat
{
    double lon = 0.0;
    double lat = 0.0;
};

/// Local equirectangular projection about a reference point.
class LocalProjection
{
  public:
    static constexpr double kEarthRadius = 6371008.8;

    explicit LocalProjection(LonLat ref);

    Point2 to_meters(LonLat p) const;
    LonLat to_degrees(Point2 p) const;
    LonLat reference() const { return m_ref; }

  private:
    LonLat m_ref;
    double m_cos_lat;
};

std::vector<Point2>
project_to_meters(std::span<const LonLat> ring, LonLat ref);

}
