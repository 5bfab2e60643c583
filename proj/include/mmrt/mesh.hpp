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

#include "mmrt/constants.hpp"
#include "mmrt/error.hpp"
#include "mmrt/material.hpp"
#include "mmrt/vec.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace mmrt {

struct Face {
    std::array<Vec3, 3> vertices;
    MaterialId material_id = 0;

    /// Unnormalized normal; right-hand rule over the vertex order.
    Vec3 area_normal() const { return cross(vertices[1] - vertices[0], vertices[2] - vertices[0]); }
    Vec3 normal() const { return normalized(area_normal()); }
    double area() const { return 0.5 * norm(area_normal()); }

    friend bool operator==(const Face &, const Face &) = default;
};

struct Mesh {
    std::vector<Face> faces;

    std::size_t face_count() const noexcept { return faces.size(); }
    void append(const Mesh &other) { faces.insert(faces.end(), other.faces.begin(), other.faces.end()); }

    friend bool operator==(const Mesh &, const Mesh &) = default;
};

/// Checks face non-degeneracy and that every material id resolves in a table of `material_count`.
inline void validate(const Mesh &mesh, std::size_t material_count) {
    if (mesh.faces.empty()) throw GeometryError("mesh has no faces");
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const Face &f = mesh.faces[i];
        for (const Vec3 &v : f.vertices)
            if (!is_finite(v)) throw GeometryError("face " + std::to_string(i) + " has a non-finite vertex");
        if (!(f.area() > constants::min_face_area))
            throw GeometryError("face " + std::to_string(i) + " is degenerate");
        if (f.material_id >= material_count)
            throw GeometryError("face " + std::to_string(i) + " references unknown material id " +
                                std::to_string(f.material_id));
    }
}

/// Position plus rotation about +z; heading 0 faces +x.
struct Pose {
    Vec3 position;
    double heading = 0.0;

    friend bool operator==(const Pose &, const Pose &) = default;
};

/// Wraps an angle into [0, 2pi).
inline double wrap_heading(double radians) {
    double h = std::fmod(radians, constants::two_pi);
    if (h < 0.0) h += constants::two_pi;
    if (h >= constants::two_pi) h = 0.0;
    return h;
}

inline Vec3 apply(const Pose &pose, Vec3 v) {
    const double c = std::cos(pose.heading);
    const double s = std::sin(pose.heading);
    return {c * v.x - s * v.y + pose.position.x, s * v.x + c * v.y + pose.position.y, v.z + pose.position.z};
}

inline Mesh transform(const Mesh &mesh, const Pose &pose) {
    Mesh out;
    out.faces.reserve(mesh.faces.size());
    for (const Face &f : mesh.faces)
        out.faces.push_back({{apply(pose, f.vertices[0]), apply(pose, f.vertices[1]), apply(pose, f.vertices[2])},
                             f.material_id});
    return out;
}

namespace detail {

inline void push_quad(Mesh &m, Vec3 a, Vec3 b, Vec3 c, Vec3 d, MaterialId mat) {
    // a-b-c-d counter-clockwise seen from the side the normal points to
    m.faces.push_back({{a, b, c}, mat});
    m.faces.push_back({{a, c, d}, mat});
}

inline double signed_area(std::span<const Vec2> poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * s;
}

} // namespace detail

/// Axis-aligned box with outward normals: 12 triangles.
inline Mesh make_box(Vec3 lo, Vec3 hi, MaterialId mat) {
    if (!(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z)) throw GeometryError("box extent must be positive");
    const Vec3 p000{lo.x, lo.y, lo.z}, p100{hi.x, lo.y, lo.z}, p110{hi.x, hi.y, lo.z}, p010{lo.x, hi.y, lo.z};
    const Vec3 p001{lo.x, lo.y, hi.z}, p101{hi.x, lo.y, hi.z}, p111{hi.x, hi.y, hi.z}, p011{lo.x, hi.y, hi.z};
    Mesh m;
    m.faces.reserve(12);
    detail::push_quad(m, p000, p010, p110, p100, mat); // -z
    detail::push_quad(m, p001, p101, p111, p011, mat); // +z
    detail::push_quad(m, p000, p100, p101, p001, mat); // -y
    detail::push_quad(m, p010, p011, p111, p110, mat); // +y
    detail::push_quad(m, p000, p001, p011, p010, mat); // -x
    detail::push_quad(m, p100, p110, p111, p101, mat); // +x
    return m;
}

/// Vertical walls (two triangles per edge) plus a fan-triangulated roof; no floor.
/// The footprint must be a strictly convex, counter-clockwise polygon.
inline Mesh extrude_footprint(std::span<const Vec2> polygon, double height, MaterialId mat) {
    if (!(height > 0.0) || !std::isfinite(height))
        throw DomainError("extrusion height must be > 0, got " + std::to_string(height));
    const std::size_t n = polygon.size();
    if (n < 3) throw GeometryError("footprint needs at least 3 vertices, got " + std::to_string(n));
    for (const Vec2 &p : polygon)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("footprint has a non-finite vertex");

    const double area = detail::signed_area(polygon);
    if (!(area > constants::min_face_area)) throw GeometryError("footprint is clockwise or degenerate");

    // Strict convexity: every turn left, total turning exactly one revolution (rejects star polygons).
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = polygon[(i + 1) % n] - polygon[i];
        const Vec2 e1 = polygon[(i + 2) % n] - polygon[(i + 1) % n];
        if (norm(e0) <= 1e-9) throw GeometryError("footprint has repeated vertex " + std::to_string((i + 1) % n));
        const double c = cross(e0, e1);
        if (!(c > 1e-12 * norm(e0) * norm(e1)))
            throw GeometryError("footprint is not strictly convex at vertex " + std::to_string((i + 1) % n));
        turning += std::atan2(c, dot(e0, e1));
    }
    if (std::abs(turning - constants::two_pi) > 1e-6) throw GeometryError("footprint is self-intersecting");

    Mesh m;
    m.faces.reserve(2 * n + (n - 2));
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[(i + 1) % n];
        detail::push_quad(m, {a.x, a.y, 0.0}, {b.x, b.y, 0.0}, {b.x, b.y, height}, {a.x, a.y, height}, mat);
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
        m.faces.push_back({{Vec3{polygon[0].x, polygon[0].y, height}, Vec3{polygon[i].x, polygon[i].y, height},
                            Vec3{polygon[i + 1].x, polygon[i + 1].y, height}},
                           mat});
    return m;
}

} // namespace mmrt
