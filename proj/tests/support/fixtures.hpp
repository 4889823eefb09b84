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

// Shared fixtures and independent oracles for the test binaries.

#pragma once

#include "solarfit/analytics.hpp"
#include "solarfit/geometry.hpp"
#include "solarfit/instances.hpp"
#include "solarfit/panel_fit.hpp"
#include "solarfit/pvout_raster.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace solarfit::test {

FootprintPolygon
rect_footprint(const std::string& id, double x0, double y0, double w, double h);

/// Star-shaped simple polygon around `center`: sorted random angles,
/// radii in [r_min, r_max].
FootprintPolygon
random_star(std::mt19937_64& rng, const std::string& id, std::size_t vertices, Point2 center, double r_min,
            double r_max);

/// Rotation by `angle` about the origin followed by translation.
FootprintPolygon
rigid_motion(const FootprintPolygon& poly, double angle, Point2 shift);

/// Every cell set to `value`.
PvOutGrid
uniform_grid(std::size_t ncols, std::size_t nrows, double origin_x, double origin_y, double cell, double value);

/// Smallest area over rectangles aligned with every hull edge, computed by
/// projecting all hull points on each edge direction. O(h^2).
double
brute_force_mbr_area(std::span<const Point2> points);

/// Dense sampling check that `rect` lies within `poly`: samples the rect
/// boundary and interior on a `step` lattice and requires each sample to be
/// within `slack` of the closed polygon (via locate_point with that tolerance).
bool
sampled_rect_inside(const OrientedRect& rect, const FootprintPolygon& poly, double step, double slack);

/// True if the interiors of two rectangles overlap by more than `slack`
/// (separating-axis test on the four edge normals).
bool
rects_overlap(const OrientedRect& a, const OrientedRect& b, double slack);

/// Two 10x10 squares sharing a vertical seam, drawn into 8-bit masks of a
/// 24x14 tile with a one-pixel border stripe along the seam. Ground truth
/// squares are returned in map coordinates.
struct TouchingSquares
{
    MaskPair masks;
    std::vector<FootprintPolygon> truth;
};

TouchingSquares
touching_squares();

std::filesystem::path
temp_dir(const std::string& name);

}
