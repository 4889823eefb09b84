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

#include "solarfit/instances.hpp"
#include "solarfit/error.hpp"
#include "solarfit/format.hpp"
#include "solarfit/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

namespace solarfit {

namespace {

struct PixelBox
{
    std::size_t c0 = 0;
    std::size_t r0 = 0;
    std::size_t c1 = 0; // exclusive
    std::size_t r1 = 0; // exclusive
    bool empty = true;

    void add(std::size_t c, std::size_t r)
    {
        if (empty) {
            *this = { c, r, c + 1, r + 1, false };
            return;
        }
        c0 = std::min(c0, c);
        r0 = std::min(r0, r);
        c1 = std::max(c1, c + 1);
        r1 = std::max(r1, r + 1);
    }
};

// Directions in (col, row) space: E, S, W, N. left(d) = (d + 1) % 4 when
// (col, row) is read as a right-handed (x, y) frame.
constexpr std::array<int, 4> kDc = { 1, 0, -1, 0 };
constexpr std::array<int, 4> kDr = { 0, 1, 0, -1 };

FootprintPolygon
trace_in_box(const InstanceLabelMap& labels, std::uint32_t k, const PixelBox& box, const GeoTransform& geo,
             std::string id)
{
    const std::size_t bw = box.c1 - box.c0;
    const std::size_t bh = box.r1 - box.r0;
    auto in = [&](long long c, long long r) {
        if (c < 0 || r < 0 || c >= static_cast<long long>(bw) || r >= static_cast<long long>(bh)) {
            return false;
        }
        return labels.at(box.c0 + static_cast<std::size_t>(c), box.r0 + static_cast<std::size_t>(r)) == k;
    };

    // Outgoing boundary edges per lattice vertex, as a direction bit mask.
    const std::size_t vw = bw + 1;
    std::vector<std::uint8_t> out((bw + 1) * (bh + 1), 0);
    auto vid = [vw](long long c, long long r) { return static_cast<std::size_t>(r) * vw + static_cast<std::size_t>(c); };
    for (long long r = 0; r < static_cast<long long>(bh); ++r) {
        for (long long c = 0; c < static_cast<long long>(bw); ++c) {
            if (!in(c, r)) {
                continue;
            }
            if (!in(c, r - 1)) {
                out[vid(c, r)] |= 1u << 0;
            }
            if (!in(c + 1, r)) {
                out[vid(c + 1, r)] |= 1u << 1;
            }
            if (!in(c, r + 1)) {
                out[vid(c + 1, r + 1)] |= 1u << 2;
            }
            if (!in(c - 1, r)) {
                out[vid(c, r + 1)] |= 1u << 3;
            }
        }
    }

    std::vector<std::uint8_t> used(out.size(), 0);
    std::vector<Ring> rings;
    for (std::size_t start = 0; start < out.size(); ++start) {
        for (int sd = 0; sd < 4; ++sd) {
            if (!(out[start] & (1u << sd)) || (used[start] & (1u << sd))) {
                continue;
            }
            std::vector<std::pair<std::size_t, int>> steps;
            std::size_t v = start;
            int d = sd;
            while (true) {
                used[v] |= static_cast<std::uint8_t>(1u << d);
                steps.emplace_back(v, d);
                const long long c = static_cast<long long>(v % vw) + kDc[static_cast<std::size_t>(d)];
                const long long r = static_cast<long long>(v / vw) + kDr[static_cast<std::size_t>(d)];
                const std::size_t nv = vid(c, r);
                // At a diagonal pinch prefer the left turn, which closes the
                // ring around the current pixel group.
                int nd = -1;
                for (int turn : { 1, 0, 3 }) {
                    const int cand = (d + turn) % 4;
                    if (out[nv] & (1u << cand)) {
                        nd = cand;
                        break;
                    }
                }
                if (nd < 0 || (used[nv] & (1u << nd))) {
                    break;
                }
                v = nv;
                d = nd;
            }

            Ring ring;
            const std::size_t n = steps.size();
            for (std::size_t i = 0; i < n; ++i) {
                const int prev_dir = steps[(i + n - 1) % n].second;
                if (prev_dir != steps[i].second) {
                    const std::size_t vv = steps[i].first;
                    ring.push_back({ static_cast<double>(vv % vw), static_cast<double>(vv / vw) });
                }
            }
            rings.push_back(std::move(ring));
        }
    }

    // Exterior: largest positively oriented ring (pixel space).
    std::size_t ext = rings.size();
    double ext_area = 0.0;
    for (std::size_t i = 0; i < rings.size(); ++i) {
        const double a = ring_signed_area(rings[i]);
        if (a > ext_area) {
            ext_area = a;
            ext = i;
        }
    }
    if (ext == rings.size()) {
        throw NotFoundError("instance " + std::to_string(k) + " has no contour");
    }

    auto to_world = [&](const Ring& ring) {
        Ring w;
        w.reserve(ring.size());
        for (const auto& p : ring) {
            w.push_back(geo.apply(p.x + static_cast<double>(box.c0), p.y + static_cast<double>(box.r0)));
        }
        return w;
    };

    std::vector<Ring> holes;
    for (std::size_t i = 0; i < rings.size(); ++i) {
        if (ring_signed_area(rings[i]) >= 0) {
            continue;
        }
        // Center of the background pixel on the right of the first edge.
        const Point2 a = rings[i][0];
        const Point2 b = rings[i][1];
        const Point2 dir{ (b.x - a.x) / std::hypot(b.x - a.x, b.y - a.y), (b.y - a.y) / std::hypot(b.x - a.x, b.y - a.y) };
        const Point2 probe = a + 0.5 * dir + 0.5 * Point2{ dir.y, -dir.x };
        if (locate_point(probe, rings[ext], 0.0) == Location::Inside) {
            holes.push_back(to_world(rings[i]));
        }
    }
    return make_footprint(std::move(id), to_world(rings[ext]), std::move(holes));
}

double
segment_distance(Point2 p, Point2 a, Point2 b)
{
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point2 d = p - (a + t * ab);
    return std::hypot(d.x, d.y);
}

void
douglas_peucker(const Ring& pts, std::size_t lo, std::size_t hi, double eps, std::vector<char>& keep)
{
    // Closed chain lo..hi; indices taken modulo pts.size().
    const std::size_t n = pts.size();
    std::vector<std::pair<std::size_t, std::size_t>> stack{ { lo, hi } };
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        double best = -1.0;
        std::size_t best_i = a;
        for (std::size_t i = a + 1; i < b; ++i) {
            const double d = segment_distance(pts[i % n], pts[a % n], pts[b % n]);
            if (d > best) {
                best = d;
                best_i = i;
            }
        }
        if (best > eps) {
            keep[best_i % n] = 1;
            stack.emplace_back(best_i, b);
            stack.emplace_back(a, best_i);
        }
    }
}

}

GeoTransform
GeoTransform::from_world_file(double a, double d, double b, double e, double c, double f)
{
    GeoTransform g;
    g.pixel_w = a;
    g.col_rot = d;
    g.row_rot = b;
    g.pixel_h = e;
    g.origin_x = c - 0.5 * a - 0.5 * b;
    g.origin_y = f - 0.5 * d - 0.5 * e;
    return g;
}

void
MaskPair::validate() const
{
    if (building.size() != width * height || border.size() != width * height) {
        throw InvalidArgumentError("mask channels must both hold width*height pixels");
    }
    if (geo.determinant() == 0 || !std::isfinite(geo.determinant())) {
        throw InvalidArgumentError("georeference transform is not invertible");
    }
}

std::size_t
InstanceLabelMap::pixel_count(std::uint32_t k) const
{
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), k));
}

InstanceLabelMap
watershed_instances(const MaskPair& masks, const WatershedParams& params)
{
    masks.validate();
    const std::size_t w = masks.width;
    const std::size_t h = masks.height;
    const std::size_t n = w * h;

    InstanceLabelMap out;
    out.width = w;
    out.height = h;
    out.labels.assign(n, 0);

    auto domain = [&](std::size_t i) { return masks.building[i] >= params.t_building; };
    auto seed = [&](std::size_t i) { return domain(i) && masks.border[i] < params.t_border; };

    auto neighbors = [&](std::size_t i, bool eight, auto&& fn) {
        const long long c = static_cast<long long>(i % w);
        const long long r = static_cast<long long>(i / w);
        static constexpr int d4[4][2] = { { 0, -1 }, { -1, 0 }, { 1, 0 }, { 0, 1 } };
        static constexpr int d8[8][2] = { { -1, -1 }, { 0, -1 }, { 1, -1 }, { -1, 0 },
                                          { 1, 0 },   { -1, 1 }, { 0, 1 },  { 1, 1 } };
        const int count = eight ? 8 : 4;
        for (int k = 0; k < count; ++k) {
            const long long nc = c + (eight ? d8[k][0] : d4[k][0]);
            const long long nr = r + (eight ? d8[k][1] : d4[k][1]);
            if (nc >= 0 && nr >= 0 && nc < static_cast<long long>(w) && nr < static_cast<long long>(h)) {
                fn(static_cast<std::size_t>(nr) * w + static_cast<std::size_t>(nc));
            }
        }
    };

    // Seed components, 4-connected, numbered in scan order.
    std::uint32_t next_label = 1;
    std::vector<char> visited(n, 0);
    std::vector<std::size_t> component;
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i] || !seed(i)) {
            continue;
        }
        component.clear();
        queue.assign(1, i);
        visited[i] = 1;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const std::size_t p = queue[q];
            component.push_back(p);
            neighbors(p, false, [&](std::size_t nb) {
                if (!visited[nb] && seed(nb)) {
                    visited[nb] = 1;
                    queue.push_back(nb);
                }
            });
        }
        if (component.size() >= params.min_seed_area) {
            for (auto p : component) {
                out.labels[p] = next_label;
            }
            ++next_label;
        }
    }

    // Flood: highest probability first, then scan order.
    struct Item
    {
        std::uint8_t prob;
        std::size_t index;
    };
    auto lower_priority = [](const Item& a, const Item& b) {
        return a.prob != b.prob ? a.prob < b.prob : a.index > b.index;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(lower_priority)> pq(lower_priority);
    std::vector<std::uint32_t> pending(n, 0);
    auto push_neighbors = [&](std::size_t p) {
        neighbors(p, true, [&](std::size_t nb) {
            if (domain(nb) && out.labels[nb] == 0 && pending[nb] == 0) {
                pending[nb] = out.labels[p];
                pq.push({ masks.building[nb], nb });
            }
        });
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] != 0) {
            push_neighbors(i);
        }
    }
    while (!pq.empty()) {
        const Item it = pq.top();
        pq.pop();
        out.labels[it.index] = pending[it.index];
        push_neighbors(it.index);
    }

    // Unreached domain pixels: one instance per 8-connected component.
    for (std::size_t i = 0; i < n; ++i) {
        if (!domain(i) || out.labels[i] != 0) {
            continue;
        }
        const std::uint32_t label = next_label++;
        out.labels[i] = label;
        queue.assign(1, i);
        for (std::size_t q = 0; q < queue.size(); ++q) {
            neighbors(queue[q], true, [&](std::size_t nb) {
                if (domain(nb) && out.labels[nb] == 0) {
                    out.labels[nb] = label;
                    queue.push_back(nb);
                }
            });
        }
    }
    out.count = next_label - 1;
    return out;
}

FootprintPolygon
trace_polygon(const InstanceLabelMap& labels, std::uint32_t k, const GeoTransform& geo)
{
    PixelBox box;
    for (std::size_t r = 0; r < labels.height; ++r) {
        for (std::size_t c = 0; c < labels.width; ++c) {
            if (labels.at(c, r) == k) {
                box.add(c, r);
            }
        }
    }
    if (k == 0 || box.empty) {
        throw NotFoundError("instance " + std::to_string(k) + " not present in label map");
    }
    return trace_in_box(labels, k, box, geo, std::to_string(k - 1));
}

std::vector<FootprintPolygon>
trace_all(const InstanceLabelMap& labels, const GeoTransform& geo, std::size_t threads)
{
    std::vector<PixelBox> boxes(labels.count + 1);
    for (std::size_t r = 0; r < labels.height; ++r) {
        for (std::size_t c = 0; c < labels.width; ++c) {
            const auto k = labels.at(c, r);
            if (k != 0) {
                boxes.at(k).add(c, r);
            }
        }
    }
    std::vector<FootprintPolygon> out(labels.count);
    parallel_for(labels.count, threads, [&](std::size_t i) {
        const auto k = static_cast<std::uint32_t>(i + 1);
        out[i] = trace_in_box(labels, k, boxes[k], geo, std::to_string(i));
    });
    return out;
}

Ring
simplify_ring(const Ring& ring, double epsilon)
{
    const std::size_t n = ring.size();
    if (n < 3) {
        return ring;
    }
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const Point2 d = ring[i] - ring[0];
        const double dd = std::hypot(d.x, d.y);
        if (dd > far_d) {
            far_d = dd;
            far = i;
        }
    }
    std::vector<char> keep(n, 0);
    keep[0] = 1;
    keep[far] = 1;
    douglas_peucker(ring, 0, far, epsilon, keep);
    douglas_peucker(ring, far, n, epsilon, keep);

    Ring out;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) {
            out.push_back(ring[i]);
        }
    }
    return out;
}

FootprintPolygon
regularize(const FootprintPolygon& poly, const RegularizeParams& params)
{
    if (!(params.epsilon >= 0) || !(params.rect_iou_threshold >= 0 && params.rect_iou_threshold <= 1)) {
        throw InvalidArgumentError("regularize: epsilon must be >= 0 and threshold within [0, 1]");
    }
    Ring ext = simplify_ring(poly.exterior, params.epsilon);
    if (ext.size() < 3) {
        throw DegenerateResultError("simplifying " + poly.id + " leaves fewer than 3 vertices");
    }
    std::vector<Ring> holes;
    for (const auto& h : poly.holes) {
        Ring s = simplify_ring(h, params.epsilon);
        if (s.size() >= 3 && ring_signed_area(s) != 0) {
            holes.push_back(std::move(s));
        }
    }

    FootprintPolygon simplified;
    try {
        simplified = make_footprint(poly.id, std::move(ext), std::move(holes));
    } catch (const InvalidGeometryError&) {
        // Simplification produced an invalid ring; keep the input geometry.
        simplified = poly;
    }

    const OrientedRect mbr = min_bounding_rect(simplified);
    const double ratio = polygon_area(simplified) / mbr.area();
    if (ratio < params.rect_iou_threshold) {
        return simplified;
    }
    if (simplified.exterior.size() == 4 && simplified.holes.empty() && ratio >= 1.0 - 1e-9) {
        return simplified;
    }
    const auto c = mbr.corners();
    return make_footprint(poly.id, Ring(c.begin(), c.end()));
}

GrayImage
read_pgm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    auto token = [&]() {
        std::string t;
        char ch;
        while (in.get(ch)) {
            if (ch == '#') {
                std::string skip;
                std::getline(in, skip);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                if (!t.empty()) {
                    break;
                }
                continue;
            }
            t.push_back(ch);
        }
        return t;
    };
    if (token() != "P5") {
        throw ParseError(path.string() + ": not a binary PGM (P5) file");
    }
    GrayImage img;
    auto w = parse_double(token());
    auto h = parse_double(token());
    auto maxval = parse_double(token());
    if (!w || !h || !maxval || *w < 1 || *h < 1) {
        throw ParseError(path.string() + ": bad PGM header");
    }
    if (*maxval != 255) {
        throw ParseError(path.string() + ": only 8-bit PGM (maxval 255) is supported");
    }
    img.width = static_cast<std::size_t>(*w);
    img.height = static_cast<std::size_t>(*h);
    img.pixels.resize(img.width * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw ParseError(path.string() + ": truncated PGM pixel data");
    }
    return img;
}

void
write_pgm(const GrayImage& image, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

GeoTransform
read_world_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    double v[6];
    std::string line;
    std::size_t line_no = 0;
    std::size_t got = 0;
    while (got < 6 && std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) {
            continue;
        }
        auto d = parse_double(tok);
        if (!d) {
            throw ParseError("world file value is not a number", line_no);
        }
        v[got++] = *d;
    }
    if (got != 6) {
        throw ParseError(path.string() + ": world file needs 6 values");
    }
    return GeoTransform::from_world_file(v[0], v[1], v[2], v[3], v[4], v[5]);
}

}
