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

#include "solarfit/geometry.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace solarfit {

/// PV module geometry and rating. Defaults are a standard 1 x 1.98 m, 0.4 kWp
/// commercial module.
struct PanelSpec
{
    double long_side = 1.98;  // m
    double short_side = 1.0;  // m
    double p_nominal = 0.4;   // kWp

    /// Throws InvalidArgumentError unless long_side >= short_side > 0 and p_nominal > 0.
    void validate() const;

    double area() const { return long_side * short_side; }
};

struct PanelLayout
{
    std::string building_id;
    std::vector<OrientedRect> panels;
    std::size_t count = 0;
};

/// Greedy panel placement on a roof.
///
/// Panels are laid on a gap-free grid inside the footprint's minimum bounding
/// rectangle, long side along the rectangle's long axis, rows along that axis
/// first. Grid cells whose panel is not fully inside the footprint (closed
/// containment, holes excluded) are dropped whole.
///
/// The grid starts at the bounding-rectangle corner lying in the same
/// quadrant, in the rectangle frame, as the footprint's area centroid. When
/// the centroid is centred along an axis the lower corner in the rectangle
/// frame is used. This keeps the result invariant under rigid motions of the
/// footprint.
///
/// A footprint smaller than a panel yields an empty layout. Throws
/// InvalidGeometryError for degenerate footprints.
PanelLayout
fit_panels(const FootprintPolygon& poly, const PanelSpec& spec);

/// Same placement as fit_panels() without materializing the panel list.
std::size_t
count_fitted_panels(const FootprintPolygon& poly, const PanelSpec& spec);

/// floor(area / panel area): an upper bound on any layout's panel count.
std::size_t
max_theoretical_count(const FootprintPolygon& poly, const PanelSpec& spec);

}
