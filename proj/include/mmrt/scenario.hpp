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
#include "mmrt/json_io.hpp"
#include "mmrt/material.hpp"
#include "mmrt/mesh.hpp"
#include "mmrt/road.hpp"

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace mmrt {

/// Axis-aligned region of the ground plane.
struct Bounds2 {
    Vec2 min;
    Vec2 max;

    bool contains(Vec2 p, double tol = 1e-9) const {
        return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol;
    }
    Vec2 clamp(Vec2 p) const { return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y)}; }

    friend bool operator==(const Bounds2 &, const Bounds2 &) = default;
};

/// A building as written in a scenario file: convex CCW footprint extruded to `height`.
struct BuildingSpec {
    std::vector<Vec2> footprint;
    double height = 0.0;
    std::string material = "concrete";

    friend bool operator==(const BuildingSpec &, const BuildingSpec &) = default;
};

/// Static world: buildings on a flat ground plane at z = 0, the road network and the material table.
struct Scenario {
    Bounds2 bounds;
    MaterialTable materials;
    std::vector<BuildingSpec> building_specs;
    std::vector<Mesh> buildings; ///< building_specs[i] extruded
    Mesh ground;                 ///< two triangles covering bounds
    MaterialId ground_material = materials::ground;
    RoadNetwork roads;

    std::size_t face_count() const {
        std::size_t n = ground.face_count();
        for (const Mesh &b : buildings) n += b.face_count();
        return n;
    }
};

inline Mesh make_ground(const Bounds2 &b, MaterialId mat) {
    Mesh m;
    detail::push_quad(m, {b.min.x, b.min.y, 0.0}, {b.max.x, b.min.y, 0.0}, {b.max.x, b.max.y, 0.0},
                      {b.min.x, b.max.y, 0.0}, mat);
    return m;
}

/// Builds and checks a scenario. All building problems are collected into one ConfigError,
/// one line per problem, each naming the building by index.
inline Scenario build_scenario(Bounds2 bounds, MaterialTable materials, std::vector<BuildingSpec> buildings,
                               RoadNetwork roads, std::string_view ground_material = "ground") {
    if (!(bounds.max.x > bounds.min.x && bounds.max.y > bounds.min.y))
        throw ConfigError("bounds: max must exceed min on both axes");
    std::vector<std::string> problems;
    Scenario sc;
    sc.bounds = bounds;
    auto gm = materials.find(ground_material);
    if (!gm) throw ConfigError("ground material '" + std::string(ground_material) + "' is not in the material table");
    sc.ground_material = *gm;
    sc.ground = make_ground(bounds, *gm);

    for (std::size_t i = 0; i < buildings.size(); ++i) {
        const BuildingSpec &spec = buildings[i];
        const std::string where = "building " + std::to_string(i);
        auto mat = materials.find(spec.material);
        if (!mat) {
            problems.push_back(where + ": unknown material '" + spec.material + "'");
            continue;
        }
        bool inside = true;
        for (Vec2 p : spec.footprint) inside = inside && bounds.contains(p);
        if (!inside) {
            problems.push_back(where + ": footprint " + std::to_string(i) + " extends outside the scenario bounds");
            continue;
        }
        try {
            sc.buildings.push_back(extrude_footprint(spec.footprint, spec.height, *mat));
        } catch (const Error &e) {
            problems.push_back(where + ": footprint " + std::to_string(i) + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string msg;
        for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "\n" : "") + problems[i];
        throw ConfigError(msg);
    }
    sc.materials = std::move(materials);
    sc.building_specs = std::move(buildings);
    sc.roads = std::move(roads);
    for (const Road &r : sc.roads.roads())
        for (Vec2 p : r.polyline)
            if (!bounds.contains(p)) throw ConfigError("road '" + r.id + "' leaves the scenario bounds");
    return sc;
}

// ---------------------------------------------------------------------------------------------
// Scenario file (JSON):
//
//   {
//     "bounds":    {"min": [x, y], "max": [x, y]},
//     "materials": [{"name": "...", "rel_permittivity": 5.3, "conductivity": 0.48, "perfect_conductor": false}],
//     "ground_material": "ground",
//     "buildings": [{"footprint": [[x, y], ...], "height": 20, "material": "concrete"}],
//     "roads":     [{"id": "...", "polyline": [[x, y], ...], "speed_limit": 13.9}]
//   }
//
// "materials" entries override or extend the default table (metal, glass, concrete, ground, body).
// Only "bounds" is required.

inline Scenario scenario_from_json(const json_io::json &doc, const std::string &source = "scenario") {
    using namespace json_io;
    check_keys(doc, source, {"bounds", "materials", "ground_material", "buildings", "roads"});

    const json &jb = required(doc, source, "bounds");
    check_keys(jb, source + ".bounds", {"min", "max"});
    Bounds2 bounds{vec2(required(jb, source + ".bounds", "min"), source + ".bounds.min"),
                   vec2(required(jb, source + ".bounds", "max"), source + ".bounds.max")};

    MaterialTable table = default_material_table();
    if (auto it = doc.find("materials"); it != doc.end()) {
        const json &arr = array(*it, source + ".materials");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = source + ".materials[" + std::to_string(i) + "]";
            check_keys(arr[i], p, {"name", "rel_permittivity", "conductivity", "perfect_conductor"});
            Material m;
            m.name = string(arr[i], p, "name");
            m.perfect_conductor = boolean_or(arr[i], p, "perfect_conductor", false);
            m.rel_permittivity = number_or(arr[i], p, "rel_permittivity", 1.0);
            m.conductivity = number_or(arr[i], p, "conductivity", 0.0);
            try {
                table.upsert(std::move(m));
            } catch (const DomainError &e) {
                throw ConfigError(p + ": " + e.what());
            }
        }
    }

    std::vector<BuildingSpec> buildings;
    if (auto it = doc.find("buildings"); it != doc.end()) {
        const json &arr = array(*it, source + ".buildings");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = source + ".buildings[" + std::to_string(i) + "]";
            check_keys(arr[i], p, {"footprint", "height", "material"});
            BuildingSpec b;
            const json &fp = array(required(arr[i], p, "footprint"), p + ".footprint");
            for (std::size_t k = 0; k < fp.size(); ++k)
                b.footprint.push_back(vec2(fp[k], p + ".footprint[" + std::to_string(k) + "]"));
            b.height = number(arr[i], p, "height");
            if (arr[i].contains("material")) b.material = string(arr[i], p, "material");
            buildings.push_back(std::move(b));
        }
    }

    std::vector<Road> roads;
    if (auto it = doc.find("roads"); it != doc.end()) {
        const json &arr = array(*it, source + ".roads");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = source + ".roads[" + std::to_string(i) + "]";
            check_keys(arr[i], p, {"id", "polyline", "speed_limit"});
            Road r;
            r.id = string(arr[i], p, "id");
            const json &pl = array(required(arr[i], p, "polyline"), p + ".polyline");
            for (std::size_t k = 0; k < pl.size(); ++k)
                r.polyline.push_back(vec2(pl[k], p + ".polyline[" + std::to_string(k) + "]"));
            r.speed_limit = number_or(arr[i], p, "speed_limit", r.speed_limit);
            roads.push_back(std::move(r));
        }
    }

    std::string ground = "ground";
    if (doc.contains("ground_material")) ground = string(doc, source, "ground_material");
    return build_scenario(bounds, std::move(table), std::move(buildings), RoadNetwork(std::move(roads)), ground);
}

inline Scenario parse_scenario(std::string_view text, const std::string &source = "scenario") {
    return scenario_from_json(json_io::parse_text(text, source), source);
}

inline Scenario load_scenario(const std::string &path) { return parse_scenario(json_io::read_file(path), path); }

inline json_io::json scenario_to_json(const Scenario &sc) {
    using json_io::json;
    json doc;
    doc["bounds"] = {{"min", json_io::to_json(sc.bounds.min)}, {"max", json_io::to_json(sc.bounds.max)}};
    json mats = json::array();
    for (const Material &m : sc.materials.all())
        mats.push_back({{"name", m.name},
                        {"rel_permittivity", m.rel_permittivity},
                        {"conductivity", m.conductivity},
                        {"perfect_conductor", m.perfect_conductor}});
    doc["materials"] = std::move(mats);
    doc["ground_material"] = sc.materials.at(sc.ground_material).name;
    json bs = json::array();
    for (const BuildingSpec &b : sc.building_specs) {
        json fp = json::array();
        for (Vec2 p : b.footprint) fp.push_back(json_io::to_json(p));
        bs.push_back({{"footprint", std::move(fp)}, {"height", b.height}, {"material", b.material}});
    }
    doc["buildings"] = std::move(bs);
    json rs = json::array();
    for (const Road &r : sc.roads.roads()) {
        json pl = json::array();
        for (Vec2 p : r.polyline) pl.push_back(json_io::to_json(p));
        rs.push_back({{"id", r.id}, {"polyline", std::move(pl)}, {"speed_limit", r.speed_limit}});
    }
    doc["roads"] = std::move(rs);
    return doc;
}

} // namespace mmrt
