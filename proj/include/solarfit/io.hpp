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

#include "solarfit/analytics.hpp"
#include "solarfit/geometry.hpp"
#include "solarfit/panel_fit.hpp"
#include "solarfit/pvout_raster.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace solarfit {

enum class CrsMode
{
    ProjectedMeters,
    Wgs84Degrees
};

/// "projected" or "wgs84".
CrsMode
parse_crs_mode(const std::string& s);

/// One skipped or suspicious input feature.
struct IngestWarning
{
    std::size_t feature_index = 0;
    std::string feature_id;
    std::string message;
};

struct FootprintSet
{
    std::vector<FootprintPolygon> footprints;
    std::vector<IngestWarning> warnings;
    std::size_t feature_count = 0;
    std::size_t accepted_features = 0;
    std::size_t skipped_features = 0;
    /// Set in WGS84 mode: the projection the footprints were mapped through.
    std::optional<LocalProjection> projection;
};

/// Reads a GeoJSON FeatureCollection of Polygon / MultiPolygon features.
///
/// Ids come from the feature "id" member, then properties.id, then the
/// feature index; MultiPolygon parts get "<id>-<part>". Invalid geometries
/// are skipped with a warning. In WGS84 mode coordinates are projected to
/// local meters about `reference`, or about the centre of the dataset's
/// bounding box when no reference is given. Throws ParseError if the
/// document is not a FeatureCollection.
FootprintSet
parse_footprints(const std::string& geojson, CrsMode crs, std::optional<LonLat> reference = std::nullopt);

FootprintSet
read_footprints(const std::filesystem::path& path, CrsMode crs, std::optional<LonLat> reference = std::nullopt);

struct DistrictSet
{
    std::vector<District> districts;
    std::vector<IngestWarning> warnings;
    std::size_t feature_count = 0;
    std::optional<LocalProjection> projection;
};

/// District names come from properties "name", "NAME" or "district", then
/// the feature id. MultiPolygon parts stay together in one district.
DistrictSet
read_districts(const std::filesystem::path& path, CrsMode crs, std::optional<LonLat> reference = std::nullopt);

/// Column label for a utilization factor: 0.25 -> "u25".
std::string
utilization_label(double u);

/// Assessment table, rows sorted by building id. Columns: building_id,
/// n_panels, pv_out, footprint_area_m2, sp_u<pct>... (MWh/year, 4 decimals),
/// centroid_x, centroid_y. Centroids are written in degrees when a
/// projection is given.
std::string
format_assessments_csv(std::span<const RooftopAssessment> assessments, std::span<const double> utilization,
                       const LocalProjection* projection = nullptr);

void
write_assessments(std::span<const RooftopAssessment> assessments, std::span<const double> utilization,
                  const std::filesystem::path& path, const LocalProjection* projection = nullptr);

struct AssessmentTable
{
    std::vector<double> utilization;
    std::vector<RooftopAssessment> rows; // centroid in file coordinates
};

AssessmentTable
read_assessments(const std::filesystem::path& path);

std::string
format_footprints_geojson(std::span<const FootprintPolygon> footprints, const LocalProjection* projection = nullptr);

void
write_footprints_geojson(std::span<const FootprintPolygon> footprints, const std::filesystem::path& path,
                         const LocalProjection* projection = nullptr);

/// One feature per panel with building_id and panel index properties.
void
write_panels_geojson(std::span<const PanelLayout> layouts, const std::filesystem::path& path,
                     const LocalProjection* projection = nullptr);

/// JSON lines, one object per warning.
void
write_warnings_jsonl(std::span<const IngestWarning> warnings, const std::filesystem::path& path);

/// Rows sorted by TSP at the largest utilization (descending), then name;
/// "unassigned" goes last.
std::vector<DistrictReport>
sort_reports(std::vector<DistrictReport> reports);

/// Per-district table: district, asp_u*_mwh, tsp_u*_gwh, hc_twh, pct_tsp_over_hc.
std::string
format_district_table_csv(std::span<const DistrictReport> reports);

/// Companion table: district, building_count, se_u*_mwh, gcr, overflow_count.
std::string
format_district_stats_csv(std::span<const DistrictReport> reports);

std::string
format_districts_geojson(std::span<const DistrictReport> reports, std::span<const District> districts,
                         const LocalProjection* projection = nullptr);

std::string
format_histogram_csv(const Histogram& h);

void
write_text(const std::filesystem::path& path, const std::string& text);

std::string
read_text(const std::filesystem::path& path);

/// Settings of an assessment run; can be loaded from a JSON file whose keys
/// match the field names (panel settings under "panel").
struct RunConfig
{
    std::filesystem::path footprints_path;
    std::optional<std::filesystem::path> districts_path;
    std::filesystem::path pvout_path;
    PanelSpec panel;
    std::vector<double> utilization = kDefaultUtilization;
    NodataPolicy nodata_policy = NodataPolicy::Nearest;
    double heatmap_stride = 500.0;
    CrsMode crs = CrsMode::ProjectedMeters;
    std::filesystem::path out_dir = ".";

    /// Throws InvalidArgumentError on inconsistent settings.
    void validate() const;
};

RunConfig
load_run_config(const std::filesystem::path& path);

}
