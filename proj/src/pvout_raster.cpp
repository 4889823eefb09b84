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

#include "solarfit/pvout_raster.hpp"
#include "solarfit/error.hpp"
#include "solarfit/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace solarfit {

namespace {

std::vector<std::string_view>
split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::string
lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::size_t
parse_count(std::string_view tok, std::size_t line, const char* what)
{
    auto v = parse_double(tok);
    if (!v || *v < 1 || *v != std::floor(*v) || *v > 1e9) {
        throw ParseError(std::string(what) + " must be a positive integer", line);
    }
    return static_cast<std::size_t>(*v);
}

}

Box
AsciiGrid::extent() const
{
    return { origin_x, origin_y, origin_x + static_cast<double>(ncols) * cell_size,
             origin_y + static_cast<double>(nrows) * cell_size };
}

Point2
AsciiGrid::cell_center(std::size_t col, std::size_t row) const
{
    return { origin_x + (static_cast<double>(col) + 0.5) * cell_size,
             origin_y + (static_cast<double>(nrows - row) - 0.5) * cell_size };
}

std::optional<std::pair<std::size_t, std::size_t>>
AsciiGrid::cell_of(Point2 p) const
{
    const double fc = std::floor((p.x - origin_x) / cell_size);
    const double fr = std::floor((p.y - origin_y) / cell_size);
    if (!(fc >= 0 && fr >= 0 && fc < static_cast<double>(ncols) && fr < static_cast<double>(nrows))) {
        return std::nullopt;
    }
    const auto col = static_cast<std::size_t>(fc);
    const auto row_from_south = static_cast<std::size_t>(fr);
    return std::pair{ col, nrows - 1 - row_from_south };
}

AsciiGrid
parse_ascii_grid(std::istream& in, const std::function<bool(double)>& check)
{
    AsciiGrid grid;
    std::map<std::string, std::pair<std::string, std::size_t>> header;
    std::string line;
    std::size_t line_no = 0;
    bool have_pending = false;

    while (std::getline(in, line)) {
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) {
            continue;
        }
        if (!std::isalpha(static_cast<unsigned char>(toks[0][0]))) {
            have_pending = true;
            break;
        }
        if (toks.size() != 2) {
            throw ParseError("header line must hold a keyword and one value", line_no);
        }
        auto key = lower(toks[0]);
        if (header.count(key)) {
            throw ParseError("duplicate header keyword " + std::string(toks[0]), line_no);
        }
        header[key] = { std::string(toks[1]), line_no };
    }

    auto require = [&](const char* key) -> const std::pair<std::string, std::size_t>& {
        auto it = header.find(key);
        if (it == header.end()) {
            throw ParseError(std::string("missing header keyword ") + key, line_no);
        }
        return it->second;
    };
    auto number = [&](const std::pair<std::string, std::size_t>& v, const char* what) {
        auto d = parse_double(v.first);
        if (!d || !std::isfinite(*d)) {
            throw ParseError(std::string(what) + " is not a number", v.second);
        }
        return *d;
    };

    for (const auto& [key, v] : header) {
        static const char* known[] = { "ncols",     "nrows",     "xllcorner", "yllcorner",
                                       "xllcenter", "yllcenter", "cellsize",  "nodata_value" };
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw ParseError("unknown header keyword " + key, v.second);
        }
    }

    grid.ncols = parse_count(require("ncols").first, require("ncols").second, "ncols");
    grid.nrows = parse_count(require("nrows").first, require("nrows").second, "nrows");
    grid.cell_size = number(require("cellsize"), "cellsize");
    if (!(grid.cell_size > 0)) {
        throw ParseError("cellsize must be positive", require("cellsize").second);
    }
    if (header.count("xllcorner")) {
        grid.origin_x = number(header["xllcorner"], "xllcorner");
    } else {
        grid.origin_x = number(require("xllcenter"), "xllcenter") - 0.5 * grid.cell_size;
    }
    if (header.count("yllcorner")) {
        grid.origin_y = number(header["yllcorner"], "yllcorner");
    } else {
        grid.origin_y = number(require("yllcenter"), "yllcenter") - 0.5 * grid.cell_size;
    }
    if (header.count("nodata_value")) {
        grid.nodata = number(header["nodata_value"], "NODATA_value");
    }

    grid.values.reserve(grid.ncols * grid.nrows);
    std::size_t rows = 0;
    while (have_pending || std::getline(in, line)) {
        if (!have_pending) {
            ++line_no;
        }
        have_pending = false;
        auto toks = split_ws(line);
        if (toks.empty()) {
            continue;
        }
        if (rows == grid.nrows) {
            throw ParseError("more than nrows=" + std::to_string(grid.nrows) + " data rows", line_no);
        }
        if (toks.size() != grid.ncols) {
            throw ParseError("expected " + std::to_string(grid.ncols) + " values, found " + std::to_string(toks.size()),
                             line_no);
        }
        for (auto tok : toks) {
            auto v = parse_double(tok);
            if (!v || !std::isfinite(*v)) {
                throw ParseError("non-numeric cell value '" + std::string(tok) + "'", line_no);
            }
            if (*v != grid.nodata && check && !check(*v)) {
                throw ParseError("implausible cell value " + std::string(tok), line_no);
            }
            grid.values.push_back(*v);
        }
        ++rows;
    }
    if (rows != grid.nrows) {
        throw ParseError("expected " + std::to_string(grid.nrows) + " data rows, found " + std::to_string(rows),
                         line_no);
    }
    return grid;
}

AsciiGrid
read_ascii_grid(const std::filesystem::path& path, const std::function<bool(double)>& check)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open grid " + path.string());
    }
    return parse_ascii_grid(in, check);
}

std::string
format_ascii_grid(const AsciiGrid& grid, int decimals)
{
    std::ostringstream out;
    auto key = [&](const char* k) {
        out << k;
        for (std::size_t i = std::char_traits<char>::length(k); i < 13; ++i) {
            out << ' ';
        }
    };
    key("ncols");
    out << grid.ncols << '\n';
    key("nrows");
    out << grid.nrows << '\n';
    key("xllcorner");
    out << format_shortest(grid.origin_x) << '\n';
    key("yllcorner");
    out << format_shortest(grid.origin_y) << '\n';
    key("cellsize");
    out << format_shortest(grid.cell_size) << '\n';
    key("NODATA_value");
    const std::string nodata = format_shortest(grid.nodata);
    out << nodata << '\n';

    for (std::size_t r = 0; r < grid.nrows; ++r) {
        for (std::size_t c = 0; c < grid.ncols; ++c) {
            if (c) {
                out << ' ';
            }
            const double v = grid.at(c, r);
            out << (grid.is_nodata(v) ? nodata : format_fixed(v, decimals));
        }
        out << '\n';
    }
    return out.str();
}

void
write_ascii_grid(const AsciiGrid& grid, const std::filesystem::path& path, int decimals)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write grid " + path.string());
    }
    out << format_ascii_grid(grid, decimals);
    if (!out) {
        throw IoError("failed writing grid " + path.string());
    }
}

NodataPolicy
parse_nodata_policy(const std::string& s)
{
    const auto l = lower(s);
    if (l == "fail") {
        return NodataPolicy::Fail;
    }
    if (l == "nearest") {
        return NodataPolicy::Nearest;
    }
    throw InvalidArgumentError("unknown nodata policy '" + s + "' (expected fail or nearest)");
}

bool
plausible_pvout(double v)
{
    return v > 0.0 && v < 10.0;
}

PvOutGrid::PvOutGrid(AsciiGrid raster)
  : m_raster(std::move(raster))
{
    if (m_raster.values.size() != m_raster.ncols * m_raster.nrows || m_raster.ncols == 0 || m_raster.nrows == 0) {
        throw InvalidArgumentError("grid value count does not match ncols*nrows");
    }
    if (!(m_raster.cell_size > 0)) {
        throw InvalidArgumentError("grid cell size must be positive");
    }
    for (double v : m_raster.values) {
        if (!m_raster.is_nodata(v) && !plausible_pvout(v)) {
            throw InvalidArgumentError("PV_out value " + format_shortest(v) + " outside (0, 10) MWh/kWp");
        }
    }
}

std::optional<double>
PvOutGrid::sample(Point2 p) const
{
    auto cell = m_raster.cell_of(p);
    if (!cell) {
        return std::nullopt;
    }
    const double v = m_raster.at(cell->first, cell->second);
    if (m_raster.is_nodata(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<double>
PvOutGrid::nearest_valid(Point2 p) const
{
    const auto& g = m_raster;
    // Continuous coordinates in cell units; cell (c, r) has its center at (c, r).
    const double fc = (p.x - g.origin_x) / g.cell_size - 0.5;
    const double fr = (g.origin_y + static_cast<double>(g.nrows) * g.cell_size - p.y) / g.cell_size - 0.5;
    const auto ncols = static_cast<long long>(g.ncols);
    const auto nrows = static_cast<long long>(g.nrows);
    const long long c0 = std::clamp(static_cast<long long>(std::llround(fc)), 0LL, ncols - 1);
    const long long r0 = std::clamp(static_cast<long long>(std::llround(fr)), 0LL, nrows - 1);
    const double offset = std::max(std::abs(static_cast<double>(c0) - fc), std::abs(static_cast<double>(r0) - fr));

    double best = std::numeric_limits<double>::infinity();
    long long best_idx = -1;
    const long long max_ring = std::max(ncols, nrows);
    for (long long k = 0; k <= max_ring; ++k) {
        if (best_idx >= 0 && static_cast<double>(k) - offset > std::sqrt(best)) {
            break;
        }
        for (long long r = r0 - k; r <= r0 + k; ++r) {
            if (r < 0 || r >= nrows) {
                continue;
            }
            const bool edge_row = (r == r0 - k || r == r0 + k);
            const long long step = (edge_row || k == 0) ? 1 : 2 * k;
            for (long long c = c0 - k; c <= c0 + k; c += step) {
                if (c < 0 || c >= ncols) {
                    continue;
                }
                const double v = g.values[static_cast<std::size_t>(r * ncols + c)];
                if (g.is_nodata(v)) {
                    continue;
                }
                const double dc = static_cast<double>(c) - fc;
                const double dr = static_cast<double>(r) - fr;
                const double d2 = dc * dc + dr * dr;
                const long long idx = r * ncols + c;
                if (d2 < best || (d2 == best && idx < best_idx)) {
                    best = d2;
                    best_idx = idx;
                }
            }
        }
    }
    if (best_idx < 0) {
        return std::nullopt;
    }
    return g.values[static_cast<std::size_t>(best_idx)];
}

PvOutGrid
load_grid(const std::filesystem::path& path)
{
    return PvOutGrid(read_ascii_grid(path, plausible_pvout));
}

double
sample_for_building(const PvOutGrid& grid, const FootprintPolygon& poly, NodataPolicy policy,
                    const LocalProjection* projection)
{
    Point2 p = polygon_centroid(poly);
    if (projection) {
        const LonLat ll = projection->to_degrees(p);
        p = { ll.lon, ll.lat };
    }
    if (auto v = grid.sample(p)) {
        return *v;
    }
    if (policy == NodataPolicy::Nearest) {
        if (auto v = grid.nearest_valid(p)) {
            return *v;
        }
    }
    throw MissingPvOutError(poly.id);
}

double
district_mean_pvout(const PvOutGrid& grid, std::span<const FootprintPolygon> district_parts,
                    const LocalProjection* projection)
{
    const auto& g = grid.raster();
    constexpr double inf = std::numeric_limits<double>::infinity();
    Box box{ inf, inf, -inf, -inf };
    for (const auto& part : district_parts) {
        for (const auto& p : part.exterior) {
            box.expand(p);
        }
    }
    if (projection) {
        const LonLat lo = projection->to_degrees({ box.min_x, box.min_y });
        const LonLat hi = projection->to_degrees({ box.max_x, box.max_y });
        box = { lo.lon, lo.lat, hi.lon, hi.lat };
    }

    double sum = 0.0;
    std::size_t n = 0;
    const double top = g.origin_y + static_cast<double>(g.nrows) * g.cell_size;
    const double c_lo = std::floor((box.min_x - g.origin_x) / g.cell_size);
    const double c_hi = std::floor((box.max_x - g.origin_x) / g.cell_size);
    const double r_lo = std::floor((top - box.max_y) / g.cell_size);
    const double r_hi = std::floor((top - box.min_y) / g.cell_size);
    const bool disjoint =
      c_hi < 0 || r_hi < 0 || c_lo >= static_cast<double>(g.ncols) || r_lo >= static_cast<double>(g.nrows);
    if (!disjoint) {
        const auto clampi = [](double v, std::size_t hi) {
            return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(hi) - 1.0));
        };
        for (std::size_t r = clampi(r_lo, g.nrows); r <= clampi(r_hi, g.nrows); ++r) {
            for (std::size_t c = clampi(c_lo, g.ncols); c <= clampi(c_hi, g.ncols); ++c) {
                const double v = g.at(c, r);
                if (g.is_nodata(v)) {
                    continue;
                }
                Point2 center = g.cell_center(c, r);
                if (projection) {
                    center = projection->to_meters({ center.x, center.y });
                }
                for (const auto& part : district_parts) {
                    if (locate_point(center, part) != Location::Outside) {
                        sum += v;
                        ++n;
                        break;
                    }
                }
            }
        }
    }
    if (n == 0) {
        throw EmptyDistrictRasterError("district covers no valid PV_out cell center");
    }
    return sum / static_cast<double>(n);
}

double
district_mean_pvout(const PvOutGrid& grid, const FootprintPolygon& district, const LocalProjection* projection)
{
    return district_mean_pvout(grid, std::span<const FootprintPolygon>(&district, 1), projection);
}

}
