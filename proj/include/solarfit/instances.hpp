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

#include <cstdint>
#include <filesystem>
#include <vector>

namespace solarfit {

/// Affine map from pixel-corner coordinates (col, row) to projected meters:
///   x = origin_x + col * pixel_w + row * row_rot
///   y = origin_y + col * col_rot + row * pixel_h
/// Pixel (c, r) spans [c, c+1] x [r, r+1] in pixel-corner coordinates.
struct GeoTransform
{
    double origin_x = 0.0;
    double pixel_w = 1.0;
    double row_rot = 0.0;
    double origin_y = 0.0;
    double col_rot = 0.0;
    double pixel_h = -1.0;

    Point2 apply(double col, double row) const
    {
        return { origin_x + col * pixel_w + row * row_rot, origin_y + col * col_rot + row * pixel_h };
    }

    double determinant() const { return pixel_w * pixel_h - row_rot * col_rot; }

    /// From the six world-file coefficients, which locate the center of the
    /// upper-left pixel.
    static GeoTransform from_world_file(double a, double d, double b, double e, double c, double f);
};

/// Building and border probability channels of one tile.
struct MaskPair
{
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> building;
    std::vector<std::uint8_t> border;
    GeoTransform geo;

    /// Throws InvalidArgumentError on size mismatch or singular transform.
    void validate() const;
};

/// 0 = background, 1..count = instances.
struct InstanceLabelMap
{
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;
    std::uint32_t count = 0;

    std::uint32_t at(std::size_t col, std::size_t row) const { return labels[row * width + col]; }
    std::size_t pixel_count(std::uint32_t k) const;
};

struct WatershedParams
{
    std::uint8_t t_building = 128;
    std::uint8_t t_border = 128;
    std::size_t min_seed_area = 4;
};

/// Marker-based watershed over the building mask.
///
/// Seeds are 4-connected components of {building >= t_building and
/// border < t_border} with at least min_seed_area pixels, numbered in scan
/// order. They flood 8-connected over {building >= t_building}, highest
/// building probability first with (row, col) breaking ties. Domain pixels
/// that no seed reaches form additional instances, one per 8-connected
/// component. Every domain pixel ends with exactly one label.
InstanceLabelMap
watershed_instances(const MaskPair& masks, const WatershedParams& params = {});

/// Outer contour (plus interior rings) of instance k, traced along pixel
/// edges and mapped through `geo`. Collinear vertices are removed. Pixels
/// attached to the instance only through a diagonal corner are not part of
/// the main contour. Throws NotFoundError if k has no pixels.
FootprintPolygon
trace_polygon(const InstanceLabelMap& labels, std::uint32_t k, const GeoTransform& geo);

/// Traces every instance; footprint ids are "0", "1", ... in label order.
std::vector<FootprintPolygon>
trace_all(const InstanceLabelMap& labels, const GeoTransform& geo, std::size_t threads = 1);

/// Douglas-Peucker on a closed ring, split at vertex 0 and the vertex
/// farthest from it.
Ring
simplify_ring(const Ring& ring, double epsilon);

struct RegularizeParams
{
    double epsilon = 0.5;             // m
    double rect_iou_threshold = 0.85; // fraction
};

/// Simplifies the footprint, then snaps it to its minimum bounding rectangle
/// when the two overlap with IoU >= rect_iou_threshold. Idempotent.
/// Throws DegenerateResultError when simplification leaves < 3 vertices.
FootprintPolygon
regularize(const FootprintPolygon& poly, const RegularizeParams& params = {});

struct GrayImage
{
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Binary PGM (P5), maxval 255.
GrayImage
read_pgm(const std::filesystem::path& path);

void
write_pgm(const GrayImage& image, const std::filesystem::path& path);

/// Six-line world file: A, D, B, E, C, F.
GeoTransform
read_world_file(const std::filesystem::path& path);

}
