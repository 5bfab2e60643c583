// SPDX-License-Identifier: Apache-2.0
//
// mmrt - mobility-aware mmWave ray-tracing channel simulator
// Copyright (C) 2026 The mmrt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Numeric constants shared by the geometry, tracer and mobility code.

namespace mmrt::constants {

/// Speed of light in vacuum [m/s], exact.
inline constexpr double speed_of_light = 299792458.0;

/// Vacuum permittivity [F/m].
inline constexpr double vacuum_permittivity = 8.8541878128e-12;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Ray origins are offset by this distance [m] to avoid re-hitting the surface they leave.
inline constexpr double self_intersection_epsilon = 1e-6;

/// Two vertex chains closer than this [m] vertex-by-vertex are the same path.
inline constexpr double duplicate_path_tolerance = 1e-6;

/// Reflection points may lie this far [m] outside a reflector edge and still count.
inline constexpr double polygon_edge_tolerance = 1e-9;

/// Faces with smaller area [m^2] are degenerate.
inline constexpr double min_face_area = 1e-12;

/// Snapshot times closer than this [s] coincide.
inline constexpr double time_tolerance = 1e-9;

/// Hard cap on the specular reflection order.
inline constexpr int max_reflection_order_cap = 3;

/// Default minimum arc distance [m] between an actor and its leader on the same route.
inline constexpr double default_gap_min = 2.5;

} // namespace mmrt::constants
