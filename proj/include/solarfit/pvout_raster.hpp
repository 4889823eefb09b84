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

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace solarfit {

/// Regular raster in ESRI ASCII grid layout. Row 0 is the northernmost row;
/// `origin_x`/`origin_y` is the lower-left corner of the extent.
struct AsciiGrid
{
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_size = 1.0;
    double nodata = -9999.0;
    std::vector<double> values;

    double at(std::size_t col, std::size_t row) const { return values[row * ncols + col]; }
    double& at(std::size_t col, std::size_t row) { return values[row * ncols + col]; }
    bool is_nodata(double v) const { return v == nodata; }

    Box extent() const;
    Point2 cell_center(std::size_t col, std::size_t row) const;

    /// Cell containing p. Cells are half-open: a point on a shared edge
    /// belongs to the cell to its east / north. nullopt outside the extent.
    std::optional<std::pair<std::size_t, std::size_t>> cell_of(Point2 p) const;
};

/// Parses an ESRI ASCII grid. Header keywords are case-insensitive;
/// `xllcenter`/`yllcenter` are accepted as well. `check`, when given, is run
/// on every non-nodata value and a rejection is reported as a ParseError.
AsciiGrid
parse_ascii_grid(std::istream& in, const std::function<bool(double)>& check = {});

AsciiGrid
read_ascii_grid(const std::filesystem::path& path, const std::function<bool(double)>& check = {});

std::string
format_ascii_grid(const AsciiGrid& grid, int decimals = 4);

void
write_ascii_grid(const AsciiGrid& grid, const std::filesystem::path& path, int decimals = 4);

enum class NodataPolicy
{
    Fail,
    Nearest
};

NodataPolicy
parse_nodata_policy(const std::string& s);

/// Yearly specific PV output (MWh/kWp) on a regular grid. Every valid value
/// lies in (0, 10).
class PvOutGrid
{
  public:
    explicit PvOutGrid(AsciiGrid raster);

    const AsciiGrid& raster() const { return m_raster; }
    Box extent() const { return m_raster.extent(); }

    /// Value of the cell containing p; nullopt outside or on nodata.
    std::optional<double> sample(Point2 p) const;

    /// Value of the valid cell whose center is closest to p (grid units).
    /// Ties go to the first cell in row-major order. nullopt if the grid
    /// holds no valid value at all.
    std::optional<double> nearest_valid(Point2 p) const;

  private:
    AsciiGrid m_raster;
};

bool
plausible_pvout(double v);

/// Loads a PV_out grid; malformed files and implausible values raise
/// ParseError with the offending line.
PvOutGrid
load_grid(const std::filesystem::path& path);

/// PV_out at the footprint centroid. If the grid is georeferenced in degrees
/// while footprints are in local meters, pass the projection that produced
/// the footprints. Throws MissingPvOutError under NodataPolicy::Fail.
double
sample_for_building(const PvOutGrid& grid, const FootprintPolygon& poly, NodataPolicy policy,
                    const LocalProjection* projection = nullptr);

/// Mean of valid cells whose centers fall inside the district (all parts).
/// Throws EmptyDistrictRasterError if there are none.
double
district_mean_pvout(const PvOutGrid& grid, std::span<const FootprintPolygon> district_parts,
                    const LocalProjection* projection = nullptr);

double
district_mean_pvout(const PvOutGrid& grid, const FootprintPolygon& district, const LocalProjection* projection = nullptr);

}
