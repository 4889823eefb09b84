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

#include "solarfit/io.hpp"

#include "solarfit/error.hpp"
#include "solarfit/format.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace solarfit {

using json = nlohmann::json;

namespace {

constexpr int kEnergyDecimals = 4;
constexpr int kMeterDecimals = 6;
constexpr int kDegreeDecimals = 8;

// One polygon in file coordinates, before projection and validation.
struct RawPart
{
    std::string id;
    std::vector<Ring> rings;
};

struct RawFeature
{
    std::size_t index = 0;
    std::string id;
    std::vector<RawPart> parts;
    std::string error; // non-empty: feature is unusable
};

std::string
json_scalar_to_id(const json& v)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<long long>());
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<unsigned long long>());
    }
    if (v.is_number_float()) {
        return format_shortest(v.get<double>());
    }
    return {};
}

Ring
parse_ring(const json& arr)
{
    if (!arr.is_array()) {
        throw InvalidGeometryError("ring is not an array");
    }
    Ring ring;
    ring.reserve(arr.size());
    for (const auto& pos : arr) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
            throw InvalidGeometryError("position is not a coordinate pair");
        }
        ring.push_back({ pos[0].get<double>(), pos[1].get<double>() });
    }
    return ring;
}

std::vector<Ring>
parse_polygon_coords(const json& coords)
{
    if (!coords.is_array() || coords.empty()) {
        throw InvalidGeometryError("polygon has no rings");
    }
    std::vector<Ring> rings;
    for (const auto& r : coords) {
        rings.push_back(parse_ring(r));
    }
    return rings;
}

json
parse_document(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
        !doc["features"].is_array()) {
        throw ParseError("not a GeoJSON FeatureCollection");
    }
    return doc;
}

std::vector<RawFeature>
collect_features(const json& doc)
{
    std::vector<RawFeature> out;
    const auto& features = doc["features"];
    out.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& f = features[i];
        RawFeature raw;
        raw.index = i;
        if (f.is_object()) {
            if (f.contains("id")) {
                raw.id = json_scalar_to_id(f["id"]);
            }
            if (raw.id.empty() && f.contains("properties") && f["properties"].is_object() &&
                f["properties"].contains("id")) {
                raw.id = json_scalar_to_id(f["properties"]["id"]);
            }
        }
        if (raw.id.empty()) {
            raw.id = std::to_string(i);
        }
        try {
            if (!f.is_object() || f.value("type", "") != "Feature") {
                throw InvalidGeometryError("not a Feature object");
            }
            if (!f.contains("geometry") || !f["geometry"].is_object()) {
                throw InvalidGeometryError("missing geometry");
            }
            const auto& g = f["geometry"];
            const std::string type = g.value("type", "");
            if (!g.contains("coordinates")) {
                throw InvalidGeometryError("geometry has no coordinates");
            }
            if (type == "Polygon") {
                raw.parts.push_back({ raw.id, parse_polygon_coords(g["coordinates"]) });
            } else if (type == "MultiPolygon") {
                const auto& polys = g["coordinates"];
                if (!polys.is_array() || polys.empty()) {
                    throw InvalidGeometryError("MultiPolygon has no parts");
                }
                for (std::size_t k = 0; k < polys.size(); ++k) {
                    raw.parts.push_back({ raw.id + "-" + std::to_string(k), parse_polygon_coords(polys[k]) });
                }
            } else {
                throw InvalidGeometryError("unsupported geometry type '" + type + "'");
            }
        } catch (const InvalidGeometryError& e) {
            raw.parts.clear();
            raw.error = e.what();
        } catch (const json::exception& e) {
            raw.parts.clear();
            raw.error = e.what();
        }
        out.push_back(std::move(raw));
    }
    return out;
}

// Centre of the bounding box of every coordinate in the usable features.
std::optional<LonLat>
dataset_center(const std::vector<RawFeature>& features)
{
    Box b{ std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity() };
    bool any = false;
    for (const auto& f : features) {
        for (const auto& part : f.parts) {
            for (const auto& ring : part.rings) {
                for (const auto& p : ring) {
                    if (std::isfinite(p.x) && std::isfinite(p.y)) {
                        b.expand(p);
                        any = true;
                    }
                }
            }
        }
    }
    if (!any) {
        return std::nullopt;
    }
    return LonLat{ 0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y) };
}

Ring
project_ring(const Ring& ring, const LocalProjection& proj)
{
    Ring out;
    out.reserve(ring.size());
    for (const auto& p : ring) {
        if (p.y <= -90.0 || p.y >= 90.0 || p.x < -180.0 || p.x > 180.0) {
            throw InvalidGeometryError("coordinate outside the WGS84 range");
        }
        out.push_back(proj.to_meters({ p.x, p.y }));
    }
    return out;
}

FootprintPolygon
build_part(const RawPart& part, const LocalProjection* proj)
{
    std::vector<Ring> rings;
    rings.reserve(part.rings.size());
    for (const auto& r : part.rings) {
        rings.push_back(proj ? project_ring(r, *proj) : r);
    }
    Ring exterior = std::move(rings.front());
    rings.erase(rings.begin());
    return make_footprint(part.id, std::move(exterior), std::move(rings));
}

std::optional<LocalProjection>
projection_for(CrsMode crs, const std::vector<RawFeature>& features, std::optional<LonLat> reference)
{
    if (crs != CrsMode::Wgs84Degrees) {
        return std::nullopt;
    }
    if (!reference) {
        reference = dataset_center(features);
    }
    if (!reference) {
        reference = LonLat{ 0.0, 0.0 };
    }
    return LocalProjection(*reference);
}

std::string
csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

// RFC 4180 record splitter over a whole document.
std::vector<std::vector<std::string>>
parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty() && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\r') {
            continue;
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
            rows.push_back(std::move(row));
            row.clear();
            ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) {
        throw ParseError("unterminated quoted field", line);
    }
    if (field_started || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

void
append_coord(std::string& out, Point2 p, const LocalProjection* proj)
{
    if (proj) {
        const LonLat ll = proj->to_degrees(p);
        out += '[' + format_fixed(ll.lon, kDegreeDecimals) + ',' + format_fixed(ll.lat, kDegreeDecimals) + ']';
    } else {
        out += '[' + format_fixed(p.x, kMeterDecimals) + ',' + format_fixed(p.y, kMeterDecimals) + ']';
    }
}

// GeoJSON linear ring: closed, exterior CCW, holes CW.
void
append_ring(std::string& out, std::span<const Point2> ring, const LocalProjection* proj)
{
    out += '[';
    for (std::size_t i = 0; i <= ring.size(); ++i) {
        if (i) {
            out += ',';
        }
        append_coord(out, ring[i % ring.size()], proj);
    }
    out += ']';
}

void
append_polygon_coords(std::string& out, const FootprintPolygon& poly, const LocalProjection* proj)
{
    out += '[';
    append_ring(out, poly.exterior, proj);
    for (const auto& h : poly.holes) {
        out += ',';
        append_ring(out, h, proj);
    }
    out += ']';
}

std::string
quoted(const std::string& s)
{
    return json(s).dump();
}

std::string
optional_number(const std::optional<double>& v, int decimals)
{
    return v ? format_fixed(*v, decimals) : std::string();
}

std::string
json_number_or_null(const std::optional<double>& v, int decimals)
{
    return v ? format_fixed(*v, decimals) : std::string("null");
}

double
require_number(const std::string& field, std::size_t line, const char* column)
{
    const auto v = parse_double(field);
    if (!v) {
        throw ParseError(std::string("column ") + column + ": not a number '" + field + "'", line);
    }
    return *v;
}

}

CrsMode
parse_crs_mode(const std::string& s)
{
    if (s == "projected" || s == "projected-meters") {
        return CrsMode::ProjectedMeters;
    }
    if (s == "wgs84" || s == "wgs84-degrees") {
        return CrsMode::Wgs84Degrees;
    }
    throw InvalidArgumentError("unknown CRS mode '" + s + "' (expected projected or wgs84)");
}

FootprintSet
parse_footprints(const std::string& geojson, CrsMode crs, std::optional<LonLat> reference)
{
    const json doc = parse_document(geojson);
    const auto raw = collect_features(doc);

    FootprintSet out;
    out.feature_count = raw.size();
    out.projection = projection_for(crs, raw, reference);
    const LocalProjection* proj = out.projection ? &*out.projection : nullptr;

    std::set<std::string> seen;
    for (const auto& f : raw) {
        if (!f.error.empty()) {
            out.warnings.push_back({ f.index, f.id, f.error });
            ++out.skipped_features;
            continue;
        }
        std::size_t accepted = 0;
        for (const auto& part : f.parts) {
            if (seen.count(part.id)) {
                out.warnings.push_back({ f.index, part.id, "duplicate building id" });
                continue;
            }
            try {
                out.footprints.push_back(build_part(part, proj));
                seen.insert(part.id);
                ++accepted;
            } catch (const InvalidGeometryError& e) {
                out.warnings.push_back({ f.index, part.id, e.what() });
            }
        }
        if (accepted) {
            ++out.accepted_features;
        } else {
            ++out.skipped_features;
        }
    }
    return out;
}

FootprintSet
read_footprints(const std::filesystem::path& path, CrsMode crs, std::optional<LonLat> reference)
{
    return parse_footprints(read_text(path), crs, reference);
}

DistrictSet
read_districts(const std::filesystem::path& path, CrsMode crs, std::optional<LonLat> reference)
{
    const json doc = parse_document(read_text(path));
    const auto raw = collect_features(doc);

    DistrictSet out;
    out.feature_count = raw.size();
    out.projection = projection_for(crs, raw, reference);
    const LocalProjection* proj = out.projection ? &*out.projection : nullptr;

    const auto& features = doc["features"];
    std::set<std::string> seen;
    for (const auto& f : raw) {
        if (!f.error.empty()) {
            out.warnings.push_back({ f.index, f.id, f.error });
            continue;
        }
        std::string name;
        const auto& feat = features[f.index];
        if (feat.contains("properties") && feat["properties"].is_object()) {
            for (const char* key : { "name", "NAME", "district" }) {
                if (feat["properties"].contains(key)) {
                    name = json_scalar_to_id(feat["properties"][key]);
                    if (!name.empty()) {
                        break;
                    }
                }
            }
        }
        if (name.empty()) {
            name = f.id;
        }
        if (seen.count(name)) {
            out.warnings.push_back({ f.index, name, "duplicate district name" });
            continue;
        }
        std::vector<FootprintPolygon> parts;
        for (const auto& part : f.parts) {
            try {
                parts.push_back(build_part(part, proj));
            } catch (const InvalidGeometryError& e) {
                out.warnings.push_back({ f.index, part.id, e.what() });
            }
        }
        if (parts.empty()) {
            continue;
        }
        seen.insert(name);
        out.districts.push_back(make_district(name, std::move(parts)));
    }
    std::sort(out.districts.begin(), out.districts.end(),
              [](const District& a, const District& b) { return a.name < b.name; });
    return out;
}

std::string
utilization_label(double u)
{
    return "u" + format_shortest(std::round(u * 100.0 * 1e6) / 1e6);
}

std::string
format_assessments_csv(std::span<const RooftopAssessment> assessments, std::span<const double> utilization,
                       const LocalProjection* projection)
{
    std::string out = "building_id,n_panels,pv_out,footprint_area_m2";
    for (double u : utilization) {
        out += ",sp_" + utilization_label(u);
    }
    out += ",centroid_x,centroid_y\n";

    std::vector<const RooftopAssessment*> rows;
    rows.reserve(assessments.size());
    for (const auto& a : assessments) {
        rows.push_back(&a);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto* a, const auto* b) { return a->building_id < b->building_id; });

    for (const auto* a : rows) {
        out += csv_field(a->building_id);
        out += ',' + std::to_string(a->panel_count);
        out += ',' + format_fixed(a->pv_out, kEnergyDecimals);
        out += ',' + format_fixed(a->footprint_area, kEnergyDecimals);
        for (double u : utilization) {
            out += ',' + format_fixed(a->sp_at(u), kEnergyDecimals);
        }
        if (projection) {
            const LonLat ll = projection->to_degrees(a->centroid);
            out += ',' + format_fixed(ll.lon, kDegreeDecimals) + ',' + format_fixed(ll.lat, kDegreeDecimals);
        } else {
            out += ',' + format_fixed(a->centroid.x, kMeterDecimals) + ',' +
                   format_fixed(a->centroid.y, kMeterDecimals);
        }
        out += '\n';
    }
    return out;
}

void
write_assessments(std::span<const RooftopAssessment> assessments, std::span<const double> utilization,
                  const std::filesystem::path& path, const LocalProjection* projection)
{
    write_text(path, format_assessments_csv(assessments, utilization, projection));
}

AssessmentTable
read_assessments(const std::filesystem::path& path)
{
    const auto rows = parse_csv(read_text(path));
    if (rows.empty()) {
        throw ParseError("missing header row", 1);
    }
    const auto& header = rows.front();
    static const char* kLead[] = { "building_id", "n_panels", "pv_out", "footprint_area_m2" };
    if (header.size() < 6) {
        throw ParseError("assessment header has too few columns", 1);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (header[i] != kLead[i]) {
            throw ParseError(std::string("expected column '") + kLead[i] + "'", 1);
        }
    }
    if (header[header.size() - 2] != "centroid_x" || header.back() != "centroid_y") {
        throw ParseError("expected trailing centroid_x,centroid_y columns", 1);
    }
    AssessmentTable table;
    for (std::size_t i = 4; i + 2 < header.size(); ++i) {
        const std::string& h = header[i];
        if (h.rfind("sp_u", 0) != 0) {
            throw ParseError("unexpected column '" + h + "'", 1);
        }
        const auto pct = parse_double(std::string_view(h).substr(4));
        if (!pct) {
            throw ParseError("bad utilization column '" + h + "'", 1);
        }
        table.utilization.push_back(*pct / 100.0);
    }
    try {
        validate_utilization(table.utilization);
    } catch (const InvalidArgumentError& e) {
        throw ParseError(e.what(), 1);
    }

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t line = r + 1;
        if (row.size() == 1 && row[0].empty()) {
            continue;
        }
        if (row.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(row.size()),
                             line);
        }
        RooftopAssessment a;
        a.building_id = row[0];
        const double n = require_number(row[1], line, "n_panels");
        if (n < 0 || n != std::floor(n)) {
            throw ParseError("n_panels must be a non-negative integer", line);
        }
        a.panel_count = static_cast<std::size_t>(n);
        a.pv_out = require_number(row[2], line, "pv_out");
        a.footprint_area = require_number(row[3], line, "footprint_area_m2");
        for (std::size_t k = 0; k < table.utilization.size(); ++k) {
            a.sp_by_u.emplace_back(table.utilization[k], require_number(row[4 + k], line, "sp"));
        }
        a.centroid = { require_number(row[row.size() - 2], line, "centroid_x"),
                       require_number(row.back(), line, "centroid_y") };
        table.rows.push_back(std::move(a));
    }
    return table;
}

std::string
format_footprints_geojson(std::span<const FootprintPolygon> footprints, const LocalProjection* projection)
{
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    for (std::size_t i = 0; i < footprints.size(); ++i) {
        const auto& f = footprints[i];
        out += i ? ",\n" : "\n";
        out += "{\"type\":\"Feature\",\"id\":" + quoted(f.id) + ",\"properties\":{\"id\":" + quoted(f.id) +
               "},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":";
        append_polygon_coords(out, f, projection);
        out += "}}";
    }
    out += "\n]}\n";
    return out;
}

void
write_footprints_geojson(std::span<const FootprintPolygon> footprints, const std::filesystem::path& path,
                         const LocalProjection* projection)
{
    write_text(path, format_footprints_geojson(footprints, projection));
}

void
write_panels_geojson(std::span<const PanelLayout> layouts, const std::filesystem::path& path,
                     const LocalProjection* projection)
{
    std::vector<const PanelLayout*> sorted;
    for (const auto& l : layouts) {
        sorted.push_back(&l);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->building_id < b->building_id; });

    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot write " + path.string());
    }
    os << "{\"type\":\"FeatureCollection\",\"features\":[";
    bool first = true;
    std::string buf;
    for (const auto* l : sorted) {
        for (std::size_t i = 0; i < l->panels.size(); ++i) {
            const auto corners = l->panels[i].corners();
            buf.clear();
            buf += first ? "\n" : ",\n";
            first = false;
            buf += "{\"type\":\"Feature\",\"properties\":{\"building_id\":" + quoted(l->building_id) +
                   ",\"panel\":" + std::to_string(i) + "},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":[";
            append_ring(buf, corners, projection);
            buf += "]}}";
            os << buf;
        }
    }
    os << "\n]}\n";
    if (!os) {
        throw IoError("failed writing " + path.string());
    }
}

void
write_warnings_jsonl(std::span<const IngestWarning> warnings, const std::filesystem::path& path)
{
    std::string out;
    for (const auto& w : warnings) {
        json j;
        j["feature_index"] = w.feature_index;
        j["feature_id"] = w.feature_id;
        j["message"] = w.message;
        out += j.dump() + "\n";
    }
    write_text(path, out);
}

std::vector<DistrictReport>
sort_reports(std::vector<DistrictReport> reports)
{
    auto key = [](const DistrictReport& r) { return r.tsp.empty() ? 0.0 : r.tsp.back(); };
    std::stable_sort(reports.begin(), reports.end(), [&](const DistrictReport& a, const DistrictReport& b) {
        const bool ua = !a.gcr.has_value();
        const bool ub = !b.gcr.has_value();
        if (ua != ub) {
            return ub;
        }
        if (key(a) != key(b)) {
            return key(a) > key(b);
        }
        return a.name < b.name;
    });
    return reports;
}

std::string
format_district_table_csv(std::span<const DistrictReport> reports)
{
    std::vector<double> us = reports.empty() ? kDefaultUtilization : reports.front().utilization;
    std::string out = "district";
    for (double u : us) {
        out += ",asp_" + utilization_label(u) + "_mwh";
    }
    for (double u : us) {
        out += ",tsp_" + utilization_label(u) + "_gwh";
    }
    out += ",hc_twh,pct_tsp_over_hc\n";
    for (const auto& r : reports) {
        out += csv_field(r.name);
        for (double v : r.asp) {
            out += ',' + format_fixed(v, kEnergyDecimals);
        }
        for (double v : r.tsp) {
            out += ',' + format_fixed(v / 1e3, kEnergyDecimals);
        }
        out += ',' + optional_number(r.hc ? std::optional<double>(*r.hc / 1e6) : std::nullopt, kEnergyDecimals);
        out += ',' + optional_number(r.tsp_over_hc ? std::optional<double>(*r.tsp_over_hc * 100.0) : std::nullopt,
                                     kEnergyDecimals);
        out += '\n';
    }
    return out;
}

std::string
format_district_stats_csv(std::span<const DistrictReport> reports)
{
    std::vector<double> us = reports.empty() ? kDefaultUtilization : reports.front().utilization;
    std::string out = "district,building_count";
    for (double u : us) {
        out += ",se_" + utilization_label(u) + "_mwh";
    }
    out += ",gcr,overflow_count\n";
    for (const auto& r : reports) {
        out += csv_field(r.name) + ',' + std::to_string(r.building_count);
        for (const auto& se : r.se) {
            out += ',' + optional_number(se, kEnergyDecimals);
        }
        out += ',' + optional_number(r.gcr, 6);
        out += ',' + std::to_string(r.overflow_count);
        out += '\n';
    }
    return out;
}

std::string
format_districts_geojson(std::span<const DistrictReport> reports, std::span<const District> districts,
                         const LocalProjection* projection)
{
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        out += i ? ",\n" : "\n";
        out += "{\"type\":\"Feature\",\"properties\":{\"district\":" + quoted(r.name);
        out += ",\"building_count\":" + std::to_string(r.building_count);
        for (std::size_t k = 0; k < r.utilization.size(); ++k) {
            const std::string label = utilization_label(r.utilization[k]);
            out += ",\"asp_" + label + "_mwh\":" + format_fixed(r.asp[k], kEnergyDecimals);
            out += ",\"tsp_" + label + "_gwh\":" + format_fixed(r.tsp[k] / 1e3, kEnergyDecimals);
            out += ",\"se_" + label + "_mwh\":" + json_number_or_null(r.se[k], kEnergyDecimals);
        }
        out += ",\"gcr\":" + json_number_or_null(r.gcr, 6);
        out += ",\"hc_twh\":" +
               json_number_or_null(r.hc ? std::optional<double>(*r.hc / 1e6) : std::nullopt, kEnergyDecimals);
        out += ",\"pct_tsp_over_hc\":" +
               json_number_or_null(r.tsp_over_hc ? std::optional<double>(*r.tsp_over_hc * 100.0) : std::nullopt,
                                   kEnergyDecimals);
        out += ",\"overflow_count\":" + std::to_string(r.overflow_count);
        out += "},\"geometry\":";

        const auto it = std::find_if(districts.begin(), districts.end(),
                                     [&](const District& d) { return d.name == r.name; });
        if (it == districts.end() || !r.gcr) {
            out += "null";
        } else {
            out += "{\"type\":\"MultiPolygon\",\"coordinates\":[";
            for (std::size_t p = 0; p < it->parts.size(); ++p) {
                if (p) {
                    out += ',';
                }
                append_polygon_coords(out, it->parts[p], projection);
            }
            out += "]}";
        }
        out += '}';
    }
    out += "\n]}\n";
    return out;
}

std::string
format_histogram_csv(const Histogram& h)
{
    std::string out = "bin,lower_mwh,upper_mwh,count,percent\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const std::string lo = i == 0 ? std::string() : format_shortest(h.edges[i - 1]);
        const std::string hi = i < h.edges.size() ? format_shortest(h.edges[i]) : std::string();
        std::string name = i == 0 ? "below" : (i == h.counts.size() - 1 ? "overflow" : lo + "-" + hi);
        out += name + ',' + lo + ',' + hi + ',' + std::to_string(h.counts[i]) + ',' +
               format_fixed(h.percents[i], 2) + '\n';
    }
    return out;
}

void
write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot write " + path.string());
    }
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) {
        throw IoError("failed writing " + path.string());
    }
}

std::string
read_text(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void
RunConfig::validate() const
{
    panel.validate();
    validate_utilization(utilization);
    if (!(heatmap_stride > 0.0) || !std::isfinite(heatmap_stride)) {
        throw InvalidArgumentError("heatmap stride must be positive");
    }
}

RunConfig
load_run_config(const std::filesystem::path& path)
{
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParseError("config must be a JSON object");
    }
    RunConfig cfg;
    try {
        if (j.contains("footprints_path")) {
            cfg.footprints_path = j["footprints_path"].get<std::string>();
        }
        if (j.contains("districts_path") && !j["districts_path"].is_null()) {
            cfg.districts_path = j["districts_path"].get<std::string>();
        }
        if (j.contains("pvout_path")) {
            cfg.pvout_path = j["pvout_path"].get<std::string>();
        }
        if (j.contains("panel")) {
            const auto& p = j["panel"];
            cfg.panel.long_side = p.value("long_side", cfg.panel.long_side);
            cfg.panel.short_side = p.value("short_side", cfg.panel.short_side);
            cfg.panel.p_nominal = p.value("p_nominal", cfg.panel.p_nominal);
        }
        if (j.contains("utilization")) {
            cfg.utilization = j["utilization"].get<std::vector<double>>();
        }
        if (j.contains("nodata_policy")) {
            cfg.nodata_policy = parse_nodata_policy(j["nodata_policy"].get<std::string>());
        }
        if (j.contains("heatmap_stride")) {
            cfg.heatmap_stride = j["heatmap_stride"].get<double>();
        }
        if (j.contains("crs")) {
            cfg.crs = parse_crs_mode(j["crs"].get<std::string>());
        }
        if (j.contains("out_dir")) {
            cfg.out_dir = j["out_dir"].get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}
