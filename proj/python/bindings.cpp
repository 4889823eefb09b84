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
#include "solarfit/geometry.hpp"
#include "solarfit/instances.hpp"
#include "solarfit/io.hpp"
#include "solarfit/panel_fit.hpp"
#include "solarfit/pvout_raster.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace solarfit;

namespace {

using Coords = std::vector<std::pair<double, double>>;

Ring
to_ring(const Coords& coords)
{
    Ring r;
    r.reserve(coords.size());
    for (const auto& [x, y] : coords) {
        r.push_back({ x, y });
    }
    return r;
}

Coords
from_ring(std::span<const Point2> ring)
{
    Coords c;
    c.reserve(ring.size());
    for (const auto& p : ring) {
        c.emplace_back(p.x, p.y);
    }
    return c;
}

MaskPair
masks_from(const py::bytes& building, const py::bytes& border, std::size_t width, std::size_t height)
{
    MaskPair m;
    m.width = width;
    m.height = height;
    const std::string b = building;
    const std::string r = border;
    m.building.assign(b.begin(), b.end());
    m.border.assign(r.begin(), r.end());
    return m;
}

}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Rooftop photovoltaic potential: panel fitting, PV_out sampling and district analytics.";

    auto base = py::register_exception<Error>(m, "SolarfitError", PyExc_ValueError);
    py::register_exception<InvalidGeometryError>(m, "InvalidGeometryError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<MissingPvOutError>(m, "MissingPvOutError", base.ptr());
    py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", base.ptr());
    py::register_exception<InsufficientSamplesError>(m, "InsufficientSamplesError", base.ptr());

    py::class_<FootprintPolygon>(m, "Footprint")
      .def(py::init([](std::string id, const Coords& exterior, const std::vector<Coords>& holes) {
               std::vector<Ring> hs;
               for (const auto& h : holes) {
                   hs.push_back(to_ring(h));
               }
               return make_footprint(std::move(id), to_ring(exterior), std::move(hs));
           }),
           py::arg("id"), py::arg("exterior"), py::arg("holes") = std::vector<Coords>{})
      .def_readonly("id", &FootprintPolygon::id)
      .def_property_readonly("exterior", [](const FootprintPolygon& f) { return from_ring(f.exterior); })
      .def_property_readonly("holes",
                             [](const FootprintPolygon& f) {
                                 std::vector<Coords> out;
                                 for (const auto& h : f.holes) {
                                     out.push_back(from_ring(h));
                                 }
                                 return out;
                             })
      .def_property_readonly("area", [](const FootprintPolygon& f) { return polygon_area(f); }, "m^2")
      .def_property_readonly("centroid", [](const FootprintPolygon& f) {
          const Point2 c = polygon_centroid(f);
          return std::pair{ c.x, c.y };
      });

    py::class_<OrientedRect>(m, "OrientedRect")
      .def_property_readonly("center", [](const OrientedRect& r) { return std::pair{ r.center.x, r.center.y }; })
      .def_readonly("axis_angle", &OrientedRect::axis_angle, "radians in [0, pi)")
      .def_readonly("length", &OrientedRect::length)
      .def_readonly("width", &OrientedRect::width)
      .def_property_readonly("area", &OrientedRect::area)
      .def("corners", [](const OrientedRect& r) {
          const auto c = r.corners();
          return from_ring(c);
      });

    py::class_<PanelSpec>(m, "PanelSpec")
      .def(py::init([](double long_side, double short_side, double p_nominal) {
               PanelSpec s{ long_side, short_side, p_nominal };
               s.validate();
               return s;
           }),
           py::arg("long_side") = 1.98, py::arg("short_side") = 1.0, py::arg("p_nominal") = 0.4)
      .def_readonly("long_side", &PanelSpec::long_side)
      .def_readonly("short_side", &PanelSpec::short_side)
      .def_readonly("p_nominal", &PanelSpec::p_nominal);

    m.def("min_bounding_rect", py::overload_cast<const FootprintPolygon&>(&min_bounding_rect), py::arg("footprint"));
    m.def("fit_panels", [](const FootprintPolygon& f, const PanelSpec& s) { return fit_panels(f, s).panels; },
          py::arg("footprint"), py::arg("spec") = PanelSpec{}, "Panel rectangles placed on the roof.");
    m.def("count_fitted_panels", &count_fitted_panels, py::arg("footprint"), py::arg("spec") = PanelSpec{});
    m.def("solar_potential", &solar_potential, py::arg("n_panels"), py::arg("spec"), py::arg("pv_out"),
          py::arg("u") = 1.0, "MWh/year");
    m.def("households_served", &households_served, py::arg("sp"),
          py::arg("household_consumption") = kHouseholdConsumption);
    m.def("standard_error", [](const std::vector<double>& v) { return standard_error(v); }, py::arg("values"));

    py::class_<PvOutGrid>(m, "PvOutGrid")
      .def_static("load", &load_grid, py::arg("path"))
      .def("sample", [](const PvOutGrid& g, double x, double y) { return g.sample({ x, y }); })
      .def("nearest_valid", [](const PvOutGrid& g, double x, double y) { return g.nearest_valid({ x, y }); });

    py::class_<RooftopAssessment>(m, "Assessment")
      .def_readonly("building_id", &RooftopAssessment::building_id)
      .def_readonly("panel_count", &RooftopAssessment::panel_count)
      .def_readonly("pv_out", &RooftopAssessment::pv_out)
      .def_readonly("footprint_area", &RooftopAssessment::footprint_area)
      .def_readonly("sp_by_u", &RooftopAssessment::sp_by_u)
      .def("sp_at", &RooftopAssessment::sp_at, py::arg("u"));

    m.def(
      "assess",
      [](const std::vector<FootprintPolygon>& fps, const PvOutGrid& grid, const PanelSpec& spec,
         const std::vector<double>& utilization, const std::string& nodata_policy, std::size_t threads) {
          AssessOptions opts;
          opts.spec = spec;
          opts.utilization = utilization;
          opts.nodata_policy = parse_nodata_policy(nodata_policy);
          py::gil_scoped_release release;
          return assess_all(fps, grid, opts, threads);
      },
      py::arg("footprints"), py::arg("grid"), py::arg("spec") = PanelSpec{},
      py::arg("utilization") = kDefaultUtilization, py::arg("nodata_policy") = "nearest", py::arg("threads") = 1);

    m.def(
      "read_footprints",
      [](const std::filesystem::path& path, const std::string& crs) {
          auto set = read_footprints(path, parse_crs_mode(crs));
          std::vector<std::pair<std::size_t, std::string>> warnings;
          for (const auto& w : set.warnings) {
              warnings.emplace_back(w.feature_index, w.message);
          }
          return py::make_tuple(set.footprints, warnings);
      },
      py::arg("path"), py::arg("crs") = "projected", "Returns (footprints, [(feature_index, message)]).");

    m.def(
      "segment",
      [](const py::bytes& building, const py::bytes& border, std::size_t width, std::size_t height,
         int t_building, int t_border, double epsilon, double rect_iou) {
          const MaskPair masks = masks_from(building, border, width, height);
          WatershedParams wp;
          wp.t_building = static_cast<std::uint8_t>(t_building);
          wp.t_border = static_cast<std::uint8_t>(t_border);
          const auto labels = watershed_instances(masks, wp);
          auto traced = trace_all(labels, masks.geo);
          for (auto& f : traced) {
              f = regularize(f, { epsilon, rect_iou });
          }
          return traced;
      },
      py::arg("building"), py::arg("border"), py::arg("width"), py::arg("height"), py::arg("t_building") = 128,
      py::arg("t_border") = 128, py::arg("epsilon") = 0.5, py::arg("rect_iou") = 0.85,
      "Footprints in pixel units (x right, y up from the top edge) from 8-bit row-major masks.");
}
