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

#include "solarfit/panel_fit.hpp"
#include "solarfit/error.hpp"

#include <cmath>

namespace solarfit {

namespace {

// Slack on grid-cell counts so that exact multiples are not lost to rounding.
constexpr double kCountSlack = 1e-9;

template<typename Visit>
void
place_panels(const FootprintPolygon& poly, const PanelSpec& spec, Visit&& visit)
{
    spec.validate();
    const OrientedRect mbr = min_bounding_rect(poly);
    const Point2 u = mbr.axis();
    const Point2 v = mbr.normal();

    const std::size_t along = static_cast<std::size_t>(std::floor(mbr.length / spec.long_side + kCountSlack));
    const std::size_t across = static_cast<std::size_t>(std::floor(mbr.width / spec.short_side + kCountSlack));
    if (along == 0 || across == 0) {
        return;
    }

    // Anchor corner: quadrant of the centroid in the rectangle frame.
    const Point2 c = polygon_centroid(poly) - mbr.center;
    const double cu = dot(c, u);
    const double cv = dot(c, v);
    const double su = cu > kContainmentTolerance * mbr.length ? 1.0 : -1.0;
    const double sv = cv > kContainmentTolerance * mbr.length ? 1.0 : -1.0;

    const Point2 anchor = mbr.center + (su * 0.5 * mbr.length) * u + (sv * 0.5 * mbr.width) * v;
    const Point2 grid_u = -su * u;
    const Point2 grid_v = -sv * v;

    const PolygonFrame frame(poly, anchor, grid_u, grid_v);
    const double l = spec.long_side;
    const double s = spec.short_side;

    for (std::size_t j = 0; j < across; ++j) {
        const double y0 = static_cast<double>(j) * s;
        const double y1 = static_cast<double>(j + 1) * s;
        for (std::size_t i = 0; i < along; ++i) {
            const double x0 = static_cast<double>(i) * l;
            const double x1 = static_cast<double>(i + 1) * l;
            if (!frame.contains_box(x0, y0, x1, y1)) {
                continue;
            }
            OrientedRect panel;
            panel.center = anchor + (0.5 * (x0 + x1)) * grid_u + (0.5 * (y0 + y1)) * grid_v;
            panel.axis_angle = mbr.axis_angle;
            panel.length = l;
            panel.width = s;
            visit(panel);
        }
    }
}

}

void
PanelSpec::validate() const
{
    if (!(short_side > 0) || !(long_side >= short_side) || !std::isfinite(long_side)) {
        throw InvalidArgumentError("panel sides must satisfy long_side >= short_side > 0");
    }
    if (!(p_nominal > 0) || !std::isfinite(p_nominal)) {
        throw InvalidArgumentError("panel nominal power must be positive");
    }
}

PanelLayout
fit_panels(const FootprintPolygon& poly, const PanelSpec& spec)
{
    PanelLayout layout;
    layout.building_id = poly.id;
    place_panels(poly, spec, [&](const OrientedRect& r) { layout.panels.push_back(r); });
    layout.count = layout.panels.size();
    return layout;
}

std::size_t
count_fitted_panels(const FootprintPolygon& poly, const PanelSpec& spec)
{
    std::size_t n = 0;
    place_panels(poly, spec, [&](const OrientedRect&) { ++n; });
    return n;
}

std::size_t
max_theoretical_count(const FootprintPolygon& poly, const PanelSpec& spec)
{
    spec.validate();
    const double ratio = polygon_area(poly) / spec.area();
    return static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
}

}
