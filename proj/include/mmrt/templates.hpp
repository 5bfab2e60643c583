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

#include "mmrt/error.hpp"
#include "mmrt/material.hpp"
#include "mmrt/mesh.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmrt {

enum class ActorKind { car, bus, truck, pedestrian };
enum class Variant { detailed, cube };

inline constexpr std::array<ActorKind, 4> all_actor_kinds{ActorKind::car, ActorKind::bus, ActorKind::truck,
                                                          ActorKind::pedestrian};

inline std::string_view to_string(ActorKind k) {
    switch (k) {
    case ActorKind::car: return "car";
    case ActorKind::bus: return "bus";
    case ActorKind::truck: return "truck";
    case ActorKind::pedestrian: return "pedestrian";
    }
    return "?";
}

inline std::optional<ActorKind> parse_actor_kind(std::string_view s) {
    for (ActorKind k : all_actor_kinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

inline bool is_vehicle(ActorKind k) { return k != ActorKind::pedestrian; }

inline std::string_view to_string(Variant v) { return v == Variant::detailed ? "detailed" : "cube"; }

inline std::optional<Variant> parse_variant(std::string_view s) {
    if (s == "detailed") return Variant::detailed;
    if (s == "cube") return Variant::cube;
    return std::nullopt;
}

/// Bounding dimensions [m] of an actor: length along +x, width along y, height along z.
struct Dimensions {
    double length = 0.0;
    double width = 0.0;
    double height = 0.0;

    friend bool operator==(const Dimensions &, const Dimensions &) = default;
};

struct TemplateDimensions {
    Dimensions car{4.5, 1.8, 1.5};
    Dimensions bus{12.0, 2.5, 3.2};
    Dimensions truck{8.0, 2.5, 3.5};
    Dimensions pedestrian{0.5, 0.5, 1.7};

    const Dimensions &of(ActorKind k) const {
        switch (k) {
        case ActorKind::car: return car;
        case ActorKind::bus: return bus;
        case ActorKind::truck: return truck;
        default: return pedestrian;
        }
    }
};

/// Placeable actor geometry in a local frame: origin at ground-center, +x forward.
struct ObjectTemplate {
    std::string name;
    ActorKind kind = ActorKind::car;
    Variant variant = Variant::cube;
    Mesh mesh;
    Dimensions dimensions;
};

inline constexpr std::size_t cube_template_face_count = 12;
/// Chassis box (12) plus a four-sided cabin prism (8 side + 4 cap triangles).
inline constexpr std::size_t detailed_vehicle_face_count = 24;
/// Torso box plus head box.
inline constexpr std::size_t detailed_pedestrian_face_count = 24;

namespace detail {

/// Side profile of a cabin in the x-z plane, counter-clockwise, as fractions of (length, height).
/// Vertex order: rear-bottom, front-bottom, front-top, rear-top. Edge i runs from vertex i to i+1.
struct CabinProfile {
    double chassis_height;                   // fraction of height
    std::array<std::array<double, 2>, 4> xz; // fractions
    double width;                            // fraction of width
    std::array<MaterialId, 4> edge_material; // bottom, windshield, roof, rear
};

inline CabinProfile cabin_profile(ActorKind k) {
    using namespace materials;
    switch (k) {
    case ActorKind::car:
        return {0.5, {{{-0.33, 0.5}, {0.22, 0.5}, {0.05, 1.0}, {-0.25, 1.0}}}, 0.9, {metal, glass, metal, glass}};
    case ActorKind::bus:
        return {0.3, {{{-0.5, 0.3}, {0.5, 0.3}, {0.46, 1.0}, {-0.5, 1.0}}}, 1.0, {metal, glass, metal, metal}};
    default: // truck: cab over the front axle, flatbed behind
        return {0.35, {{{0.2, 0.35}, {0.5, 0.35}, {0.44, 1.0}, {0.2, 1.0}}}, 1.0, {metal, glass, metal, metal}};
    }
}

/// Extrudes a convex x-z profile across y in [-half_width, half_width].
inline Mesh make_profile_prism(const std::array<Vec2, 4> &profile, double half_width,
                               const std::array<MaterialId, 4> &edge_material, MaterialId cap_material) {
    Mesh m;
    m.faces.reserve(12);
    auto at = [&](int i, double y) { return Vec3{profile[i].x, y, profile[i].y}; };
    for (int i = 0; i < 4; ++i) {
        const int j = (i + 1) % 4;
        // outward for a profile that is counter-clockwise in (x, z)
        push_quad(m, at(i, half_width), at(j, half_width), at(j, -half_width), at(i, -half_width),
                  edge_material[i]);
    }
    push_quad(m, at(0, -half_width), at(1, -half_width), at(2, -half_width), at(3, -half_width), cap_material);
    push_quad(m, at(0, half_width), at(3, half_width), at(2, half_width), at(1, half_width), cap_material);
    return m;
}

inline Mesh detailed_vehicle(ActorKind k, const Dimensions &d) {
    const CabinProfile p = cabin_profile(k);
    Mesh m = make_box({-0.5 * d.length, -0.5 * d.width, 0.0},
                      {0.5 * d.length, 0.5 * d.width, p.chassis_height * d.height}, materials::metal);
    std::array<Vec2, 4> profile;
    for (int i = 0; i < 4; ++i) profile[i] = {p.xz[i][0] * d.length, p.xz[i][1] * d.height};
    m.append(make_profile_prism(profile, 0.5 * p.width * d.width, p.edge_material, materials::metal));
    return m;
}

inline Mesh detailed_pedestrian(const Dimensions &d) {
    const double torso_top = 0.85 * d.height;
    Mesh m = make_box({-0.3 * d.length, -0.5 * d.width, 0.0}, {0.3 * d.length, 0.5 * d.width, torso_top},
                      materials::body);
    m.append(make_box({-0.22 * d.length, -0.22 * d.width, torso_top}, {0.22 * d.length, 0.22 * d.width, d.height},
                      materials::body));
    return m;
}

} // namespace detail

/// Procedural car, bus, truck and pedestrian models, each in a detailed and a cube variant.
///
/// Cube variants are the axis-aligned bounding box in one material (metal for vehicles,
/// body for pedestrians). Detailed vehicles are a chassis box under a cabin prism whose
/// slanted front face is glass (the car's rear window too); detailed pedestrians are a
/// torso box with a smaller head box.
inline std::vector<ObjectTemplate> builtin_templates(const TemplateDimensions &dims = {}) {
    std::vector<ObjectTemplate> out;
    for (ActorKind k : all_actor_kinds) {
        const Dimensions &d = dims.of(k);
        const MaterialId cube_mat = is_vehicle(k) ? materials::metal : materials::body;
        Mesh detailed = is_vehicle(k) ? detail::detailed_vehicle(k, d) : detail::detailed_pedestrian(d);
        out.push_back({std::string(to_string(k)) + "_detailed", k, Variant::detailed, std::move(detailed), d});
        out.push_back({std::string(to_string(k)) + "_cube", k, Variant::cube,
                       make_box({-0.5 * d.length, -0.5 * d.width, 0.0}, {0.5 * d.length, 0.5 * d.width, d.height},
                                cube_mat),
                       d});
    }
    return out;
}

/// Rigidly places a template: v -> Rz(heading) v + position.
inline Mesh instantiate(const ObjectTemplate &tmpl, const Pose &pose) { return transform(tmpl.mesh, pose); }

/// Immutable set of templates keyed by (kind, variant).
class TemplateLibrary {
public:
    TemplateLibrary() : TemplateLibrary(builtin_templates()) {}
    explicit TemplateLibrary(std::vector<ObjectTemplate> templates) {
        for (auto &t : templates) {
            const auto key = std::pair{t.kind, t.variant};
            entries_[key] = std::make_shared<const ObjectTemplate>(std::move(t));
        }
    }

    std::shared_ptr<const ObjectTemplate> find(ActorKind k, Variant v) const {
        auto it = entries_.find({k, v});
        if (it == entries_.end())
            throw LookupError("no template for kind '" + std::string(to_string(k)) + "' variant '" +
                              std::string(to_string(v)) + "'");
        return it->second;
    }

    static const TemplateLibrary &builtin() {
        static const TemplateLibrary lib;
        return lib;
    }

private:
    std::map<std::pair<ActorKind, Variant>, std::shared_ptr<const ObjectTemplate>> entries_;
};

} // namespace mmrt
