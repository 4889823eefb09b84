# Copyright (c) 2026 The solarfit authors.
# All rights reserved.
#
# This software is licensed under the Apache License, Version 2.0 (the "License").
# You may not use this file except in compliance with the License. You may
# obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Rooftop photovoltaic potential engine."""

from ._core import (
    Assessment,
    Footprint,
    InsufficientSamplesError,
    InvalidArgumentError,
    InvalidGeometryError,
    MissingPvOutError,
    OrientedRect,
    PanelSpec,
    ParseError,
    PvOutGrid,
    SolarfitError,
    assess,
    count_fitted_panels,
    fit_panels,
    households_served,
    min_bounding_rect,
    read_footprints,
    segment,
    solar_potential,
    standard_error,
)

__version__ = "0.1.0"
