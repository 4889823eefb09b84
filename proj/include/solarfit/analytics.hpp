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
#include "solarfit/panel_fit.hpp"
#include "solarfit/pvout_raster.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

// All energies are MWh/year unless a name says otherwise.
namespace solarfit {

inline const std::vector<double> kDefaultUtilization = { 0.1, 0.25, 0.5, 0.75, 1.0 };
inline constexpr double kHouseholdConsumption = 5.41; // MWh/year
inline const std::vector<double> kDefaultHistogramEdges = { 1, 10, 50, 100, 350 };

/// Throws InvalidArgumentError unless every factor lies in (0, 1] and the
/// list is strictly increasing.
void
validate_utilization(std::span<const double> factors);

struct RooftopAssessment
{
    std::string building_id;
    std::size_t panel_count = 0;
    double pv_out = 0.0;         // MWh/kWp
    double footprint_area = 0.0; // m^2
    Point2 centroid;
    std::vector<std::pair<double, double>> sp_by_u; // (utilization, MWh/year), increasing u

    /// Throws InvalidArgumentError if u was not assessed.
    double sp_at(double u) const;
};

/// n_panels * u * p_nominal * pv_out. Utilization scales the panel count
/// continuously (no rounding).
double
solar_potential(double n_panels, const PanelSpec& spec, double pv_out, double u);

/// sp / household_consumption, rounded half-even to one decimal.
double
households_served(double sp, double household_consumption = kHouseholdConsumption);

/// Sample standard deviation over sqrt(n). Throws InsufficientSamplesError for n < 2.
double
standard_error(std::span<const double> values);

struct AssessOptions
{
    PanelSpec spec;
    std::vector<double> utilization = kDefaultUtilization;
    NodataPolicy nodata_policy = NodataPolicy::Nearest;
    /// Set when footprints were projected from degrees and the grid is in degrees.
    const LocalProjection* grid_projection = nullptr;
};

RooftopAssessment
assess_rooftop(const FootprintPolygon& poly, const PvOutGrid& grid, const AssessOptions& opts);

/// Assesses every footprint over `threads` workers; the result is sorted by
/// building id and independent of the thread count.
std::vector<RooftopAssessment>
assess_all(std::span<const FootprintPolygon> footprints, const PvOutGrid& grid, const AssessOptions& opts,
           std::size_t threads);

struct District
{
    std::string name;
    std::vector<FootprintPolygon> parts;
    double area_a_t = 0.0; // m^2
};

District
make_district(std::string name, std::vector<FootprintPolygon> parts);

/// Sum of footprint areas over the district area.
double
ground_coverage_ratio(std::span<const RooftopAssessment> buildings, const District& district);

/// Energy of panels laid at continuous density over the whole (flat)
/// district, at the district mean PV_out. MWh/year.
double
hypothetical_capacity(const District& district, const PanelSpec& spec, const PvOutGrid& grid,
                      const LocalProjection* grid_projection = nullptr);

/// For each assessment, index of the district containing its centroid
/// (boundary counts as inside). Candidates are tried in lexicographic name
/// order so shared-boundary ties go to the first name.
std::vector<std::optional<std::size_t>>
assign_districts(std::span<const RooftopAssessment> assessments, std::span<const District> districts);

struct DistrictReport
{
    std::string name;
    std::size_t building_count = 0;
    std::vector<double> utilization;
    std::vector<double> tsp;                // MWh/year
    std::vector<double> asp;                // MWh/year per building
    std::vector<std::optional<double>> se;  // MWh/year, empty below two buildings
    std::optional<double> gcr;              // absent for the unassigned row
    std::optional<double> hc;               // MWh/year
    std::optional<double> tsp_over_hc;      // TSP(u = 1) / HC
    std::size_t overflow_count = 0;         // buildings with SP >= 350 at the histogram U
};

struct ReportOptions
{
    PanelSpec spec;
    std::vector<double> utilization = kDefaultUtilization;
    double histogram_u = 0.5;
    const LocalProjection* grid_projection = nullptr;
};

/// Aggregates the given buildings (already restricted to the district and
/// sorted by id) into a report.
DistrictReport
district_report(std::span<const RooftopAssessment> assessments, const District& district, const PvOutGrid& grid,
                const ReportOptions& opts);

/// Report for buildings outside every district: no GCR, HC or ratio.
DistrictReport
unassigned_report(std::span<const RooftopAssessment> assessments, const ReportOptions& opts);

struct Histogram
{
    std::vector<double> edges;
    /// counts[0] underflow (< edges.front()), counts[i] is [edges[i-1], edges[i]),
    /// counts.back() overflow (>= edges.back()).
    std::vector<std::size_t> counts;
    std::vector<double> percents;
};

Histogram
sp_histogram(std::span<const RooftopAssessment> assessments, double u,
             std::span<const double> edges = kDefaultHistogramEdges);

struct HeatmapOptions
{
    double u = 0.5;
    double window_area = 4e6; // m^2
    double stride = 500.0;    // m, also the output cell size
    std::optional<Box> extent;
    std::size_t threads = 1;
};

/// Mean SP of the buildings whose centroid falls in a square window of area
/// window_area centred on each output cell (half-open window). Cells with
/// no building are nodata (-9999). The default extent is the centroid
/// bounding box grown by one window side, snapped to the stride.
AsciiGrid
sliding_window_heatmap(std::span<const RooftopAssessment> assessments, const HeatmapOptions& opts);

}
