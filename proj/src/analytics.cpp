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

#include "solarfit/analytics.hpp"
#include "solarfit/error.hpp"
#include "solarfit/format.hpp"
#include "solarfit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace solarfit {

// Buildings at or above this SP (MWh/year) land in the overflow bin.
constexpr double kOverflowSp = 350.0;

void
validate_utilization(std::span<const double> factors)
{
    if (factors.empty()) {
        throw InvalidArgumentError("at least one utilization factor is required");
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (!(factors[i] > 0.0 && factors[i] <= 1.0)) {
            throw InvalidArgumentError("utilization factors must lie in (0, 1]");
        }
        if (i > 0 && !(factors[i] > factors[i - 1])) {
            throw InvalidArgumentError("utilization factors must be strictly increasing");
        }
    }
}

double
RooftopAssessment::sp_at(double u) const
{
    for (const auto& [f, sp] : sp_by_u) {
        if (std::abs(f - u) <= 1e-12) {
            return sp;
        }
    }
    throw InvalidArgumentError("utilization factor " + format_shortest(u) + " was not assessed for " + building_id);
}

double
solar_potential(double n_panels, const PanelSpec& spec, double pv_out, double u)
{
    if (!(n_panels >= 0)) {
        throw InvalidArgumentError("panel count must be non-negative");
    }
    if (!(u > 0.0 && u <= 1.0)) {
        throw InvalidArgumentError("utilization factor must lie in (0, 1]");
    }
    if (!(pv_out > 0.0)) {
        throw InvalidArgumentError("PV_out must be positive");
    }
    return n_panels * u * spec.p_nominal * pv_out;
}

double
households_served(double sp, double household_consumption)
{
    if (!(household_consumption > 0)) {
        throw InvalidArgumentError("household consumption must be positive");
    }
    return round_half_even(sp / household_consumption, 1);
}

double
standard_error(std::span<const double> values)
{
    const std::size_t n = values.size();
    if (n < 2) {
        throw InsufficientSamplesError("standard error needs at least 2 samples, got " + std::to_string(n));
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
    return sigma / std::sqrt(static_cast<double>(n));
}

RooftopAssessment
assess_rooftop(const FootprintPolygon& poly, const PvOutGrid& grid, const AssessOptions& opts)
{
    RooftopAssessment a;
    a.building_id = poly.id;
    a.panel_count = count_fitted_panels(poly, opts.spec);
    a.pv_out = sample_for_building(grid, poly, opts.nodata_policy, opts.grid_projection);
    a.footprint_area = polygon_area(poly);
    a.centroid = polygon_centroid(poly);
    a.sp_by_u.reserve(opts.utilization.size());
    for (double u : opts.utilization) {
        a.sp_by_u.emplace_back(u, solar_potential(static_cast<double>(a.panel_count), opts.spec, a.pv_out, u));
    }
    return a;
}

std::vector<RooftopAssessment>
assess_all(std::span<const FootprintPolygon> footprints, const PvOutGrid& grid, const AssessOptions& opts,
           std::size_t threads)
{
    opts.spec.validate();
    validate_utilization(opts.utilization);
    std::vector<RooftopAssessment> out(footprints.size());
    parallel_for(footprints.size(), threads, [&](std::size_t i) { out[i] = assess_rooftop(footprints[i], grid, opts); });
    std::stable_sort(out.begin(), out.end(),
                     [](const RooftopAssessment& a, const RooftopAssessment& b) { return a.building_id < b.building_id; });
    return out;
}

District
make_district(std::string name, std::vector<FootprintPolygon> parts)
{
    District d;
    d.name = std::move(name);
    d.parts = std::move(parts);
    for (const auto& p : d.parts) {
        d.area_a_t += polygon_area(p);
    }
    return d;
}

double
ground_coverage_ratio(std::span<const RooftopAssessment> buildings, const District& district)
{
    if (!(district.area_a_t > 0)) {
        throw InvalidArgumentError("district " + district.name + " has no area");
    }
    double built = 0.0;
    for (const auto& b : buildings) {
        built += b.footprint_area;
    }
    return built / district.area_a_t;
}

double
hypothetical_capacity(const District& district, const PanelSpec& spec, const PvOutGrid& grid,
                      const LocalProjection* grid_projection)
{
    spec.validate();
    if (!(district.area_a_t > 0)) {
        return 0.0;
    }
    const double mean_pv = district_mean_pvout(grid, district.parts, grid_projection);
    return district.area_a_t / spec.area() * spec.p_nominal * mean_pv;
}

std::vector<std::optional<std::size_t>>
assign_districts(std::span<const RooftopAssessment> assessments, std::span<const District> districts)
{
    std::vector<std::size_t> order(districts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return districts[a].name < districts[b].name; });

    std::vector<std::vector<Box>> boxes(districts.size());
    for (std::size_t d = 0; d < districts.size(); ++d) {
        for (const auto& part : districts[d].parts) {
            boxes[d].push_back(bounding_box(part.exterior));
        }
    }

    std::vector<std::optional<std::size_t>> out(assessments.size());
    for (std::size_t i = 0; i < assessments.size(); ++i) {
        const Point2 c = assessments[i].centroid;
        const Box pt{ c.x, c.y, c.x, c.y };
        for (std::size_t d : order) {
            bool hit = false;
            for (std::size_t p = 0; p < districts[d].parts.size() && !hit; ++p) {
                hit = boxes[d][p].overlaps(pt) && locate_point(c, districts[d].parts[p]) != Location::Outside;
            }
            if (hit) {
                out[i] = d;
                break;
            }
        }
    }
    return out;
}

namespace {

DistrictReport
base_report(std::string name, std::span<const RooftopAssessment> assessments, const ReportOptions& opts)
{
    validate_utilization(opts.utilization);
    DistrictReport r;
    r.name = std::move(name);
    r.building_count = assessments.size();
    r.utilization = opts.utilization;
    const std::size_t nu = opts.utilization.size();
    r.tsp.assign(nu, 0.0);
    r.asp.assign(nu, 0.0);
    r.se.assign(nu, std::nullopt);

    std::vector<double> values(assessments.size());
    for (std::size_t k = 0; k < nu; ++k) {
        const double u = opts.utilization[k];
        double total = 0.0;
        for (std::size_t i = 0; i < assessments.size(); ++i) {
            values[i] = assessments[i].sp_at(u);
            total += values[i];
        }
        r.tsp[k] = total;
        if (!assessments.empty()) {
            r.asp[k] = total / static_cast<double>(assessments.size());
        }
        if (assessments.size() >= 2) {
            r.se[k] = standard_error(values);
        }
    }
    for (const auto& a : assessments) {
        if (a.sp_at(opts.histogram_u) >= kOverflowSp) {
            ++r.overflow_count;
        }
    }
    return r;
}

}

DistrictReport
district_report(std::span<const RooftopAssessment> assessments, const District& district, const PvOutGrid& grid,
                const ReportOptions& opts)
{
    DistrictReport r = base_report(district.name, assessments, opts);
    r.gcr = ground_coverage_ratio(assessments, district);
    r.hc = hypothetical_capacity(district, opts.spec, grid, opts.grid_projection);
    const auto full = std::find_if(opts.utilization.begin(), opts.utilization.end(),
                                   [](double u) { return std::abs(u - 1.0) <= 1e-12; });
    if (full != opts.utilization.end()) {
        const double tsp_full = r.tsp[static_cast<std::size_t>(full - opts.utilization.begin())];
        r.tsp_over_hc = *r.hc > 0 ? tsp_full / *r.hc : 0.0;
    }
    return r;
}

DistrictReport
unassigned_report(std::span<const RooftopAssessment> assessments, const ReportOptions& opts)
{
    return base_report("unassigned", assessments, opts);
}

Histogram
sp_histogram(std::span<const RooftopAssessment> assessments, double u, std::span<const double> edges)
{
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) {
            throw InvalidArgumentError("histogram edges must be strictly increasing");
        }
    }
    Histogram h;
    h.edges.assign(edges.begin(), edges.end());
    h.counts.assign(edges.size() + 1, 0);
    for (const auto& a : assessments) {
        const double sp = a.sp_at(u);
        const auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), sp) - edges.begin());
        ++h.counts[bin];
    }
    h.percents.resize(h.counts.size(), 0.0);
    if (!assessments.empty()) {
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            h.percents[i] = 100.0 * static_cast<double>(h.counts[i]) / static_cast<double>(assessments.size());
        }
    }
    return h;
}

AsciiGrid
sliding_window_heatmap(std::span<const RooftopAssessment> assessments, const HeatmapOptions& opts)
{
    if (!(opts.window_area > 0) || !(opts.stride > 0)) {
        throw InvalidArgumentError("heatmap window area and stride must be positive");
    }
    const double side = std::sqrt(opts.window_area);
    const double half = 0.5 * side;
    const double stride = opts.stride;

    Box ext;
    if (opts.extent) {
        ext = *opts.extent;
    } else if (assessments.empty()) {
        ext = { 0, 0, stride, stride };
    } else {
        constexpr double inf = std::numeric_limits<double>::infinity();
        ext = { inf, inf, -inf, -inf };
        for (const auto& a : assessments) {
            ext.expand(a.centroid);
        }
        ext = { ext.min_x - side, ext.min_y - side, ext.max_x + side, ext.max_y + side };
    }

    AsciiGrid grid;
    grid.cell_size = stride;
    grid.nodata = -9999.0;
    grid.origin_x = std::floor(ext.min_x / stride) * stride;
    grid.origin_y = std::floor(ext.min_y / stride) * stride;
    grid.ncols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((ext.max_x - grid.origin_x) / stride)));
    grid.nrows = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((ext.max_y - grid.origin_y) / stride)));
    grid.values.assign(grid.ncols * grid.nrows, grid.nodata);

    // Bucket centroids by stride-sized bins (bin row counted from the south).
    const auto ncols = static_cast<long long>(grid.ncols);
    const auto nrows = static_cast<long long>(grid.nrows);
    std::vector<std::vector<std::pair<Point2, double>>> bins(grid.ncols * grid.nrows);
    for (const auto& a : assessments) {
        const long long bx = static_cast<long long>(std::floor((a.centroid.x - grid.origin_x) / stride));
        const long long by = static_cast<long long>(std::floor((a.centroid.y - grid.origin_y) / stride));
        if (bx < 0 || by < 0 || bx >= ncols || by >= nrows) {
            continue;
        }
        bins[static_cast<std::size_t>(by * ncols + bx)].emplace_back(a.centroid, a.sp_at(opts.u));
    }

    parallel_for(grid.nrows, opts.threads, [&](std::size_t row) {
        for (std::size_t col = 0; col < grid.ncols; ++col) {
            const Point2 c = grid.cell_center(col, row);
            const double x0 = c.x - half;
            const double x1 = c.x + half;
            const double y0 = c.y - half;
            const double y1 = c.y + half;
            const long long bx0 = std::max(0LL, static_cast<long long>(std::floor((x0 - grid.origin_x) / stride)));
            const long long bx1 = std::min(ncols - 1, static_cast<long long>(std::floor((x1 - grid.origin_x) / stride)));
            const long long by0 = std::max(0LL, static_cast<long long>(std::floor((y0 - grid.origin_y) / stride)));
            const long long by1 = std::min(nrows - 1, static_cast<long long>(std::floor((y1 - grid.origin_y) / stride)));
            double sum = 0.0;
            std::size_t n = 0;
            for (long long by = by0; by <= by1; ++by) {
                for (long long bx = bx0; bx <= bx1; ++bx) {
                    for (const auto& [p, sp] : bins[static_cast<std::size_t>(by * ncols + bx)]) {
                        if (p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1) {
                            sum += sp;
                            ++n;
                        }
                    }
                }
            }
            if (n > 0) {
                grid.at(col, row) = sum / static_cast<double>(n);
            }
        }
    });
    return grid;
}

}
