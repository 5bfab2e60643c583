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
#include "mmrt/log.hpp"
#include "mmrt/mobility.hpp"
#include "mmrt/scenario.hpp"
#include "mmrt/templates.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace mmrt {

/// Isotropic antenna with a string id.
struct Antenna {
    std::string id;
    Vec3 position;

    friend bool operator==(const Antenna &, const Antenna &) = default;
};

struct FixedRx {
    std::vector<Antenna> receivers;

    friend bool operator==(const FixedRx &, const FixedRx &) = default;
};

/// One receiver per matching actor, `height_offset` above the actor position; id = actor id.
struct MobileRx {
    std::vector<ActorKind> kinds{ActorKind::car};
    double height_offset = 1.5;

    friend bool operator==(const MobileRx &, const MobileRx &) = default;
};

using RxSpec = std::variant<FixedRx, MobileRx>;

enum class OutOfBoundsPolicy { skip, clamp };

struct PlacedObject {
    std::shared_ptr<const ObjectTemplate> object;
    Pose pose;
    std::string actor_id;
};

/// World at one snapshot: the static scenario plus placed actors and the antennas.
struct Scene {
    std::shared_ptr<const Scenario> scenario;
    std::vector<PlacedObject> objects;
    std::vector<Antenna> tx;
    std::vector<Antenna> rx;
    std::vector<double> rx_heading; ///< actor heading per receiver (0 for fixed ones); metadata only
    double time = 0.0;

    const Antenna &find_tx(const std::string &id) const { return find(tx, id, "transmitter"); }
    const Antenna &find_rx(const std::string &id) const { return find(rx, id, "receiver"); }

private:
    static const Antenna &find(const std::vector<Antenna> &v, const std::string &id, const char *what) {
        auto it = std::find_if(v.begin(), v.end(), [&](const Antenna &a) { return a.id == id; });
        if (it == v.end()) throw LookupError(std::string("unknown ") + what + " id '" + id + "'");
        return *it;
    }
};

struct ComposeOptions {
    OutOfBoundsPolicy out_of_bounds = OutOfBoundsPolicy::skip;
    const TemplateLibrary *templates = nullptr; ///< builtin templates when null
};

namespace detail {
inline void check_antenna(const Antenna &a, const char *what) {
    if (!is_finite(a.position)) throw ConfigError(std::string(what) + " '" + a.id + "' has a non-finite position");
    if (!(a.position.z > 0.0)) throw ConfigError(std::string(what) + " '" + a.id + "' must be above ground (z > 0)");
}
} // namespace detail

/// Places one template instance per actor and resolves the receivers for this snapshot.
inline Scene compose_scene(std::shared_ptr<const Scenario> scenario, const Snapshot &snapshot, Variant variant,
                           const std::vector<Antenna> &tx, const RxSpec &rx_spec, const ComposeOptions &options = {}) {
    if (!scenario) throw ConfigError("compose_scene: no scenario");
    const TemplateLibrary &lib = options.templates ? *options.templates : TemplateLibrary::builtin();
    Scene scene;
    scene.time = snapshot.time;
    for (const Antenna &a : tx) detail::check_antenna(a, "transmitter");
    scene.tx = tx;

    const MobileRx *mobile = std::get_if<MobileRx>(&rx_spec);
    if (mobile && !(mobile->height_offset > 0.0)) throw ConfigError("mobile receiver height_offset must be > 0");

    for (const ActorState &actor : snapshot.actors) {
        Vec3 pos = actor.position;
        const Vec2 xy{pos.x, pos.y};
        if (!scenario->bounds.contains(xy)) {
            if (options.out_of_bounds == OutOfBoundsPolicy::skip) {
                log::warn("t=" + std::to_string(snapshot.time) + ": actor '" + actor.actor_id +
                          "' outside scenario bounds, skipped");
                continue;
            }
            const Vec2 c = scenario->bounds.clamp(xy);
            log::warn("t=" + std::to_string(snapshot.time) + ": actor '" + actor.actor_id +
                      "' outside scenario bounds, clamped");
            pos.x = c.x;
            pos.y = c.y;
        }
        scene.objects.push_back({lib.find(actor.kind, variant), Pose{pos, wrap_heading(actor.heading)}, actor.actor_id});
        if (mobile && std::find(mobile->kinds.begin(), mobile->kinds.end(), actor.kind) != mobile->kinds.end()) {
            scene.rx.push_back({actor.actor_id, Vec3{pos.x, pos.y, pos.z + mobile->height_offset}});
            scene.rx_heading.push_back(wrap_heading(actor.heading));
        }
    }
    if (const FixedRx *fixed = std::get_if<FixedRx>(&rx_spec)) {
        for (const Antenna &a : fixed->receivers) detail::check_antenna(a, "receiver");
        scene.rx = fixed->receivers;
        scene.rx_heading.assign(scene.rx.size(), 0.0);
    }
    scene.scenario = std::move(scenario);
    return scene;
}

/// Ground + building + placed-object faces.
inline std::size_t total_face_count(const Scene &scene) {
    std::size_t n = scene.scenario ? scene.scenario->face_count() : 0;
    for (const PlacedObject &o : scene.objects) n += o.object->mesh.face_count();
    return n;
}

/// Every mesh of the scene in world coordinates: ground first, then buildings, then objects.
inline std::vector<Mesh> scene_meshes(const Scene &scene) {
    std::vector<Mesh> meshes;
    meshes.reserve(1 + scene.scenario->buildings.size() + scene.objects.size());
    meshes.push_back(scene.scenario->ground);
    for (const Mesh &b : scene.scenario->buildings) meshes.push_back(b);
    for (const PlacedObject &o : scene.objects) meshes.push_back(instantiate(*o.object, o.pose));
    return meshes;
}

} // namespace mmrt
