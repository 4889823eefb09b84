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

// solarfit command-line tool: instances -> assess -> aggregate / heatmap.
// Exit codes: 0 success, 1 fatal input error, 2 finished with skipped
// features (listed in the warnings sidecar).

#include "solarfit/analytics.hpp"
#include "solarfit/error.hpp"
#include "solarfit/format.hpp"
#include "solarfit/instances.hpp"
#include "solarfit/io.hpp"
#include "solarfit/parallel.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace solarfit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct InstancesArgs
{
    std::string building_mask;
    std::string border_mask;
    std::string world_file;
    int t_building = 128;
    int t_border = 128;
    double epsilon = 0.5;
    double rect_iou = 0.85;
    std::size_t min_seed_area = 4;
    std::string out = "footprints.geojson";
    std::size_t threads = 0;
};

struct AssessArgs
{
    std::string config;
    std::string footprints;
    std::string pvout;
    std::string crs = "projected";
    double panel_long = 1.98;
    double panel_short = 1.0;
    double p_nominal = 0.4;
    std::vector<double> u = kDefaultUtilization;
    std::string nodata_policy = "nearest";
    std::string out_dir = ".";
    bool no_panels = false;
    std::size_t threads = 0;
};

struct AggregateArgs
{
    std::string assessments;
    std::string districts;
    std::string pvout;
    std::string crs = "projected";
    double panel_long = 1.98;
    double panel_short = 1.0;
    double p_nominal = 0.4;
    double histogram_u = 0.5;
    std::string out_dir = ".";
};

struct HeatmapArgs
{
    std::string assessments;
    double u = 0.5;
    double window_km2 = 4.0;
    double stride_m = 500.0;
    std::string crs = "projected";
    std::string out = "heatmap.asc";
    std::size_t threads = 0;
};

std::size_t
threads_from(std::size_t flag)
{
    return resolve_thread_count(flag ? std::optional<std::size_t>(flag) : std::nullopt);
}

Box
footprint_extent(std::span<const FootprintPolygon> fps)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    Box b{ inf, inf, -inf, -inf };
    for (const auto& f : fps) {
        for (const auto& p : f.exterior) {
            b.expand(p);
        }
    }
    return b;
}

int
run_instances(const InstancesArgs& a)
{
    if (a.t_building < 0 || a.t_building > 255 || a.t_border < 0 || a.t_border > 255) {
        throw InvalidArgumentError("thresholds must lie in [0, 255]");
    }
    const GrayImage building = read_pgm(a.building_mask);
    const GrayImage border = read_pgm(a.border_mask);
    if (building.width != border.width || building.height != border.height) {
        throw InvalidArgumentError("mask dimensions differ: building " + std::to_string(building.width) + "x" +
                                   std::to_string(building.height) + ", border " + std::to_string(border.width) +
                                   "x" + std::to_string(border.height));
    }
    MaskPair masks;
    masks.width = building.width;
    masks.height = building.height;
    masks.building = building.pixels;
    masks.border = border.pixels;
    if (!a.world_file.empty()) {
        masks.geo = read_world_file(a.world_file);
    }

    WatershedParams wp;
    wp.t_building = static_cast<std::uint8_t>(a.t_building);
    wp.t_border = static_cast<std::uint8_t>(a.t_border);
    wp.min_seed_area = a.min_seed_area;
    const auto labels = watershed_instances(masks, wp);
    auto traced = trace_all(labels, masks.geo, threads_from(a.threads));

    const RegularizeParams rp{ a.epsilon, a.rect_iou };
    std::vector<FootprintPolygon> out(traced.size());
    parallel_for(traced.size(), threads_from(a.threads), [&](std::size_t i) {
        try {
            out[i] = regularize(traced[i], rp);
        } catch (const DegenerateResultError&) {
            out[i] = traced[i];
        }
    });
    write_footprints_geojson(out, a.out);
    std::cout << out.size() << " instances written to " << a.out << "\n";
    return kExitOk;
}

RunConfig
assess_config(const AssessArgs& a, const CLI::App& cmd)
{
    RunConfig cfg;
    if (!a.config.empty()) {
        cfg = load_run_config(a.config);
    }
    auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--footprints")) {
        cfg.footprints_path = a.footprints;
    }
    if (given("--pvout")) {
        cfg.pvout_path = a.pvout;
    }
    if (given("--crs") || a.config.empty()) {
        cfg.crs = parse_crs_mode(a.crs);
    }
    if (given("--panel-long") || a.config.empty()) {
        cfg.panel.long_side = a.panel_long;
    }
    if (given("--panel-short") || a.config.empty()) {
        cfg.panel.short_side = a.panel_short;
    }
    if (given("--p-nominal") || a.config.empty()) {
        cfg.panel.p_nominal = a.p_nominal;
    }
    if (given("--u") || a.config.empty()) {
        cfg.utilization = a.u;
    }
    if (given("--nodata-policy") || a.config.empty()) {
        cfg.nodata_policy = parse_nodata_policy(a.nodata_policy);
    }
    if (given("--out-dir") || a.config.empty()) {
        cfg.out_dir = a.out_dir;
    }
    if (cfg.footprints_path.empty() || cfg.pvout_path.empty()) {
        throw InvalidArgumentError("--footprints and --pvout are required (directly or through --config)");
    }
    cfg.validate();
    return cfg;
}

int
run_assess(const AssessArgs& a, const CLI::App& cmd)
{
    const RunConfig cfg = assess_config(a, cmd);
    const std::size_t threads = threads_from(a.threads);
    fs::create_directories(cfg.out_dir);

    const FootprintSet set = read_footprints(cfg.footprints_path, cfg.crs);
    const PvOutGrid grid = load_grid(cfg.pvout_path);
    const LocalProjection* proj = set.projection ? &*set.projection : nullptr;

    if (!set.footprints.empty()) {
        Box fb = footprint_extent(set.footprints);
        if (proj) {
            const LonLat lo = proj->to_degrees({ fb.min_x, fb.min_y });
            const LonLat hi = proj->to_degrees({ fb.max_x, fb.max_y });
            fb = { lo.lon, lo.lat, hi.lon, hi.lat };
        }
        if (!fb.overlaps(grid.extent())) {
            const Box g = grid.extent();
            throw InvalidArgumentError("footprints [" + format_shortest(fb.min_x) + ", " + format_shortest(fb.min_y) +
                                       ", " + format_shortest(fb.max_x) + ", " + format_shortest(fb.max_y) +
                                       "] do not overlap the PV_out grid [" + format_shortest(g.min_x) + ", " +
                                       format_shortest(g.min_y) + ", " + format_shortest(g.max_x) + ", " +
                                       format_shortest(g.max_y) + "]; check --crs and the grid frame");
        }
    }

    AssessOptions opts;
    opts.spec = cfg.panel;
    opts.utilization = cfg.utilization;
    opts.nodata_policy = cfg.nodata_policy;
    opts.grid_projection = proj;
    const auto results = assess_all(set.footprints, grid, opts, threads);

    const fs::path out_dir = cfg.out_dir;
    write_assessments(results, cfg.utilization, out_dir / "assessments.csv", proj);
    if (!a.no_panels) {
        std::vector<PanelLayout> layouts(set.footprints.size());
        parallel_for(set.footprints.size(), threads,
                     [&](std::size_t i) { layouts[i] = fit_panels(set.footprints[i], cfg.panel); });
        write_panels_geojson(layouts, out_dir / "panels.geojson", proj);
    }
    write_warnings_jsonl(set.warnings, out_dir / "warnings.jsonl");

    std::size_t panels = 0;
    std::vector<double> tsp(cfg.utilization.size(), 0.0);
    for (const auto& r : results) {
        panels += r.panel_count;
        for (std::size_t k = 0; k < tsp.size(); ++k) {
            tsp[k] += r.sp_by_u[k].second;
        }
    }
    std::cout << results.size() << " buildings, " << panels << " panels; TSP (MWh/year):";
    for (std::size_t k = 0; k < tsp.size(); ++k) {
        std::cout << " " << utilization_label(cfg.utilization[k]) << "=" << format_fixed(tsp[k], 4);
    }
    std::cout << "\n";
    if (!set.warnings.empty()) {
        std::cerr << set.skipped_features << " of " << set.feature_count << " features skipped; see "
                  << (out_dir / "warnings.jsonl").string() << "\n";
        return kExitPartial;
    }
    return kExitOk;
}

int
run_aggregate(const AggregateArgs& a)
{
    const CrsMode crs = parse_crs_mode(a.crs);
    PanelSpec spec{ a.panel_long, a.panel_short, a.p_nominal };
    spec.validate();
    fs::create_directories(a.out_dir);
    const fs::path out_dir = a.out_dir;

    AssessmentTable table = read_assessments(a.assessments);
    const DistrictSet dset = read_districts(a.districts, crs);
    if (dset.districts.empty()) {
        throw InvalidArgumentError("district file " + a.districts + " contains no usable district");
    }
    const PvOutGrid grid = load_grid(a.pvout);
    const LocalProjection* proj = dset.projection ? &*dset.projection : nullptr;
    if (proj) {
        for (auto& r : table.rows) {
            r.centroid = proj->to_meters({ r.centroid.x, r.centroid.y });
        }
    }

    ReportOptions opts;
    opts.spec = spec;
    opts.utilization = table.utilization;
    opts.histogram_u = a.histogram_u;
    opts.grid_projection = proj;

    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const auto& x, const auto& y) { return x.building_id < y.building_id; });
    const auto assignment = assign_districts(table.rows, dset.districts);
    std::vector<std::vector<RooftopAssessment>> members(dset.districts.size());
    std::vector<RooftopAssessment> unassigned;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (assignment[i]) {
            members[*assignment[i]].push_back(table.rows[i]);
        } else {
            unassigned.push_back(table.rows[i]);
        }
    }

    std::vector<DistrictReport> reports;
    for (std::size_t d = 0; d < dset.districts.size(); ++d) {
        reports.push_back(district_report(members[d], dset.districts[d], grid, opts));
    }
    if (!unassigned.empty()) {
        reports.push_back(unassigned_report(unassigned, opts));
    }
    reports = sort_reports(std::move(reports));

    write_text(out_dir / "district_report.csv", format_district_table_csv(reports));
    write_text(out_dir / "district_stats.csv", format_district_stats_csv(reports));
    write_text(out_dir / "districts.geojson", format_districts_geojson(reports, dset.districts, proj));
    write_text(out_dir / "histogram.csv", format_histogram_csv(sp_histogram(table.rows, a.histogram_u)));
    write_warnings_jsonl(dset.warnings, out_dir / "aggregate_warnings.jsonl");

    std::cout << dset.districts.size() << " districts, " << table.rows.size() << " buildings, "
              << unassigned.size() << " unassigned\n";
    return dset.warnings.empty() ? kExitOk : kExitPartial;
}

int
run_heatmap(const HeatmapArgs& a)
{
    if (!(a.window_km2 > 0) || !(a.stride_m > 0)) {
        throw InvalidArgumentError("--window-km2 and --stride-m must be positive");
    }
    AssessmentTable table = read_assessments(a.assessments);
    if (parse_crs_mode(a.crs) == CrsMode::Wgs84Degrees && !table.rows.empty()) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        Box b{ inf, inf, -inf, -inf };
        for (const auto& r : table.rows) {
            b.expand(r.centroid);
        }
        const LocalProjection proj({ 0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y) });
        for (auto& r : table.rows) {
            r.centroid = proj.to_meters({ r.centroid.x, r.centroid.y });
        }
        std::cout << "heatmap grid in local meters about lon " << format_shortest(proj.reference().lon) << ", lat "
                  << format_shortest(proj.reference().lat) << "\n";
    }
    HeatmapOptions opts;
    opts.u = a.u;
    opts.window_area = a.window_km2 * 1e6;
    opts.stride = a.stride_m;
    opts.threads = threads_from(a.threads);
    const AsciiGrid grid = sliding_window_heatmap(table.rows, opts);
    write_ascii_grid(grid, a.out);
    std::cout << grid.ncols << "x" << grid.nrows << " heatmap written to " << a.out << "\n";
    return kExitOk;
}

void
add_panel_options(CLI::App* cmd, double& long_side, double& short_side, double& p_nominal)
{
    cmd->add_option("--panel-long", long_side, "Panel long side (m)")->capture_default_str();
    cmd->add_option("--panel-short", short_side, "Panel short side (m)")->capture_default_str();
    cmd->add_option("--p-nominal", p_nominal, "Panel nameplate power (kWp)")->capture_default_str();
}

}

int
main(int argc, char** argv)
{
    CLI::App app{ "Rooftop photovoltaic potential from building footprints and a PV_out grid.\n"
                  "Energies are MWh/year unless a column name says otherwise.\n"
                  "Exit codes: 0 success, 1 fatal input error, 2 some features skipped (see warnings sidecar)." };
    app.require_subcommand(1);

    InstancesArgs ia;
    auto* inst = app.add_subcommand("instances", "Split building/border probability masks into footprint polygons");
    inst->add_option("--building-mask", ia.building_mask, "Building probability mask, 8-bit PGM (0-255)")
      ->required()
      ->check(CLI::ExistingFile);
    inst->add_option("--border-mask", ia.border_mask, "Border probability mask, 8-bit PGM (0-255)")
      ->required()
      ->check(CLI::ExistingFile);
    inst->add_option("--world-file", ia.world_file, "Six-line world file (m); pixel units when omitted")
      ->check(CLI::ExistingFile);
    inst->add_option("--t-building", ia.t_building, "Building threshold (mask value 0-255)")->capture_default_str();
    inst->add_option("--t-border", ia.t_border, "Border threshold (mask value 0-255)")->capture_default_str();
    inst->add_option("--epsilon", ia.epsilon, "Simplification tolerance (m)")->capture_default_str();
    inst->add_option("--rect-iou", ia.rect_iou, "Snap to bounding rectangle at or above this IoU (0-1)")
      ->capture_default_str();
    inst->add_option("--min-seed-area", ia.min_seed_area, "Smallest seed region (pixels)")->capture_default_str();
    inst->add_option("--out", ia.out, "Output footprints GeoJSON")->capture_default_str();
    inst->add_option("--threads", ia.threads, "Worker threads (default: $SOLARFIT_THREADS, else all cores)");

    AssessArgs sa;
    auto* assess = app.add_subcommand("assess", "Fit panels and compute yearly solar potential per rooftop");
    assess->add_option("--config", sa.config, "JSON run configuration; explicit flags override it")
      ->check(CLI::ExistingFile);
    assess->add_option("--footprints", sa.footprints, "Footprint GeoJSON FeatureCollection");
    assess->add_option("--pvout", sa.pvout, "PV_out ESRI ASCII grid (MWh/kWp per year)");
    assess->add_option("--crs", sa.crs, "Footprint coordinates: projected (m, same frame as the grid) or wgs84 "
                                         "(degrees, grid also in degrees)")
      ->capture_default_str();
    add_panel_options(assess, sa.panel_long, sa.panel_short, sa.p_nominal);
    assess->add_option("--u", sa.u, "Utilization factors, comma separated fractions in (0, 1]")
      ->delimiter(',')
      ->capture_default_str();
    assess->add_option("--nodata-policy", sa.nodata_policy, "Centroid on nodata: nearest (closest valid cell) or fail")
      ->capture_default_str();
    assess->add_option("--out-dir", sa.out_dir, "Directory for assessments.csv, panels.geojson, warnings.jsonl")
      ->capture_default_str();
    assess->add_flag("--no-panels", sa.no_panels, "Skip the panels GeoJSON");
    assess->add_option("--threads", sa.threads, "Worker threads (default: $SOLARFIT_THREADS, else all cores)");

    AggregateArgs ga;
    auto* agg = app.add_subcommand("aggregate", "District totals, averages, coverage and capacity");
    agg->add_option("--assessments", ga.assessments, "assessments.csv from the assess command")
      ->required()
      ->check(CLI::ExistingFile);
    agg->add_option("--districts", ga.districts, "District GeoJSON (name in properties.name)")
      ->required()
      ->check(CLI::ExistingFile);
    agg->add_option("--pvout", ga.pvout, "PV_out ESRI ASCII grid (MWh/kWp per year)")
      ->required()
      ->check(CLI::ExistingFile);
    agg->add_option("--crs", ga.crs, "District and centroid coordinates: projected (m) or wgs84 (degrees)")
      ->capture_default_str();
    add_panel_options(agg, ga.panel_long, ga.panel_short, ga.p_nominal);
    agg->add_option("--histogram-u", ga.histogram_u, "Utilization factor for the SP histogram and overflow count")
      ->capture_default_str();
    agg->add_option("--out-dir", ga.out_dir,
                    "Directory for district_report.csv (ASP MWh/year, TSP GWh/year, HC TWh/year, %), "
                    "district_stats.csv, districts.geojson, histogram.csv")
      ->capture_default_str();

    HeatmapArgs ha;
    auto* heat = app.add_subcommand("heatmap", "Sliding-window mean solar potential as an ASCII grid");
    heat->add_option("--assessments", ha.assessments, "assessments.csv from the assess command")
      ->required()
      ->check(CLI::ExistingFile);
    heat->add_option("--u", ha.u, "Utilization factor (fraction, must be a column of the CSV)")->capture_default_str();
    heat->add_option("--window-km2", ha.window_km2, "Square window area (km^2)")->capture_default_str();
    heat->add_option("--stride-m", ha.stride_m, "Window stride and output cell size (m)")->capture_default_str();
    heat->add_option("--crs", ha.crs, "Centroid coordinates: projected (m) or wgs84 (degrees)")->capture_default_str();
    heat->add_option("--out", ha.out, "Output ESRI ASCII grid (mean MWh/year per building)")->capture_default_str();
    heat->add_option("--threads", ha.threads, "Worker threads (default: $SOLARFIT_THREADS, else all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (inst->parsed()) {
            return run_instances(ia);
        }
        if (assess->parsed()) {
            return run_assess(sa, *assess);
        }
        if (agg->parsed()) {
            return run_aggregate(ga);
        }
        if (heat->parsed()) {
            return run_heatmap(ha);
        }
    } catch (const MissingPvOutError& e) {
        std::cerr << "error: " << e.what() << " (building " << e.building_id() << ")\n";
        return kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
