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

#include "mmrt/bvh.hpp"
#include "mmrt/constants.hpp"
#include "mmrt/error.hpp"
#include "mmrt/fresnel.hpp"
#include "mmrt/material.hpp"
#include "mmrt/mesh.hpp"
#include "mmrt/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmrt {

struct RTConfig {
    double frequency = 28e9; ///< carrier [Hz]
    int max_reflection_order = 2;
    std::size_t max_paths = 25; ///< strongest paths kept per link

    double wavelength() const { return constants::speed_of_light / frequency; }

    void validate() const {
        if (!(frequency > 0.0) || !std::isfinite(frequency)) throw ConfigError("rt.frequency must be > 0");
        if (max_reflection_order < 0 || max_reflection_order > constants::max_reflection_order_cap)
            throw ConfigError("rt.max_reflection_order must be in [0, " +
                              std::to_string(constants::max_reflection_order_cap) + "]");
        if (max_paths < 1) throw ConfigError("rt.max_paths must be >= 1");
    }

    friend bool operator==(const RTConfig &, const RTConfig &) = default;
};

struct Interaction {
    std::size_t face = 0; ///< index into the prepared scene's face list
    MaterialId material = 0;

    friend bool operator==(const Interaction &, const Interaction &) = default;
};

/// Azimuth from +x towards +y, elevation above the horizontal plane; radians.
struct Angles {
    double azimuth = 0.0;
    double elevation = 0.0;

    friend bool operator==(const Angles &, const Angles &) = default;
};

struct PropagationPath {
    std::vector<Vec3> vertices; ///< tx, reflection points..., rx
    std::vector<Interaction> interactions;
    double length = 0.0; ///< unfolded [m]
    double delay = 0.0;  ///< [s]
    std::complex<double> gain;
    double gain_db = 0.0;
    Angles aod; ///< departure direction at tx
    Angles aoa; ///< direction from rx towards the last interaction (or tx)
    int reflection_count = 0;

    friend bool operator==(const PropagationPath &, const PropagationPath &) = default;
};

struct ChannelResult {
    std::string tx_id;
    std::string rx_id;
    std::vector<PropagationPath> paths; ///< |gain| descending
    double total_power_noncoherent_db = -std::numeric_limits<double>::infinity();
    double total_power_coherent_db = -std::numeric_limits<double>::infinity();
    bool los_blocked = true;

    friend bool operator==(const ChannelResult &, const ChannelResult &) = default;
};

// ---------------------------------------------------------------------------------------------
// Reflectors: coplanar, edge-adjacent, same-material triangles of one mesh merged into convex polygons.

struct Reflector {
    Vec3 normal;   ///< unit
    double offset; ///< plane: dot(normal, x) = offset
    std::vector<Vec3> polygon;           ///< convex, counter-clockwise about normal
    std::vector<Vec3> edge_inward;       ///< unit in-plane inward normal per edge
    std::vector<std::size_t> faces;      ///< global face indices covered
    MaterialId material = 0;

    double signed_distance(Vec3 p) const { return dot(normal, p) - offset; }

    bool contains(Vec3 p, double tol = constants::polygon_edge_tolerance) const {
        for (std::size_t i = 0; i < polygon.size(); ++i)
            if (dot(edge_inward[i], p - polygon[i]) < -tol) return false;
        return true;
    }
};

namespace detail {

inline Vec3 canonical_normal(Vec3 n) {
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(n[a]) > std::abs(n[axis])) axis = a;
    return n[axis] < 0.0 ? -n : n;
}

inline Reflector make_reflector(Vec3 normal, std::vector<Vec3> polygon, std::vector<std::size_t> faces,
                                MaterialId material) {
    Reflector r;
    r.normal = normal;
    r.offset = dot(normal, polygon[0]);
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Vec3 e = polygon[(i + 1) % polygon.size()] - polygon[i];
        r.edge_inward.push_back(normalized(cross(normal, e)));
    }
    r.polygon = std::move(polygon);
    r.faces = std::move(faces);
    r.material = material;
    return r;
}

/// Triangle as a reflector, oriented about `n`.
inline Reflector triangle_reflector(const Face &f, Vec3 n, std::size_t global_index) {
    std::vector<Vec3> poly{f.vertices[0], f.vertices[1], f.vertices[2]};
    if (dot(f.area_normal(), n) < 0.0) std::swap(poly[1], poly[2]);
    return make_reflector(n, std::move(poly), {global_index}, f.material_id);
}

inline double cross2(Vec2 o, Vec2 a, Vec2 b) { return cross(a - o, b - o); }

/// Andrew's monotone chain, collinear points dropped; counter-clockwise.
inline std::vector<std::size_t> convex_hull(const std::vector<Vec2> &pts) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
    });
    if (idx.size() < 3) return idx;
    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    const double tol = 1e-12;
    for (std::size_t i : idx) {
        while (k >= 2 && cross2(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= tol) --k;
        hull[k++] = i;
    }
    for (std::size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
        const std::size_t i = idx[j];
        while (k >= t && cross2(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= tol) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);
    return hull;
}

inline bool same_point(Vec3 a, Vec3 b) { return norm(a - b) <= 1e-9; }

inline int shared_vertices(const Face &a, const Face &b) {
    int n = 0;
    for (const Vec3 &va : a.vertices)
        for (const Vec3 &vb : b.vertices)
            if (same_point(va, vb)) {
                ++n;
                break;
            }
    return n;
}

} // namespace detail

/// Merges each mesh's coplanar adjacent same-material triangles into convex polygons. A group whose
/// union is not convex stays as individual triangles. `first_face` gives each mesh's global offset.
inline std::vector<Reflector> build_reflectors(const std::vector<Mesh> &meshes) {
    std::vector<Reflector> out;
    std::size_t base = 0;
    for (const Mesh &mesh : meshes) {
        const std::size_t n = mesh.faces.size();
        std::vector<Vec3> normals(n);
        std::vector<double> offsets(n);
        for (std::size_t i = 0; i < n; ++i) {
            normals[i] = detail::canonical_normal(mesh.faces[i].normal());
            offsets[i] = dot(normals[i], mesh.faces[i].vertices[0]);
        }
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const Face &a = mesh.faces[i];
                const Face &b = mesh.faces[j];
                if (a.material_id != b.material_id) continue;
                if (dot(normals[i], normals[j]) < 1.0 - 1e-12) continue;
                if (std::abs(offsets[i] - offsets[j]) > 1e-9 * (1.0 + std::abs(offsets[i]))) continue;
                if (detail::shared_vertices(a, b) < 2) continue;
                parent[find(i)] = find(j);
            }

        std::vector<std::vector<std::size_t>> groups(n);
        for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
        for (const auto &g : groups) {
            if (g.empty()) continue;
            const Vec3 nrm = normals[g.front()];
            if (g.size() == 1) {
                out.push_back(detail::triangle_reflector(mesh.faces[g[0]], nrm, base + g[0]));
                continue;
            }
            std::vector<Vec3> verts;
            double area = 0.0;
            for (std::size_t fi : g) {
                area += mesh.faces[fi].area();
                for (const Vec3 &v : mesh.faces[fi].vertices)
                    if (std::none_of(verts.begin(), verts.end(), [&](Vec3 u) { return detail::same_point(u, v); }))
                        verts.push_back(v);
            }
            const Vec3 u = normalized(verts[1] - verts[0]);
            const Vec3 w = cross(nrm, u);
            std::vector<Vec2> flat;
            for (const Vec3 &v : verts) flat.push_back({dot(v - verts[0], u), dot(v - verts[0], w)});
            const auto hull = detail::convex_hull(flat);
            double hull_area = 0.0;
            for (std::size_t i = 0; i < hull.size(); ++i)
                hull_area += cross(flat[hull[i]], flat[hull[(i + 1) % hull.size()]]);
            hull_area *= 0.5;
            if (hull.size() >= 3 && std::abs(hull_area - area) <= 1e-9 * area) {
                std::vector<Vec3> poly;
                for (std::size_t i : hull) poly.push_back(verts[i]);
                std::vector<std::size_t> faces;
                for (std::size_t fi : g) faces.push_back(base + fi);
                out.push_back(detail::make_reflector(nrm, std::move(poly), std::move(faces),
                                                     mesh.faces[g.front()].material_id));
            } else {
                for (std::size_t fi : g) out.push_back(detail::triangle_reflector(mesh.faces[fi], nrm, base + fi));
            }
        }
        base += n;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

/// Scene geometry prepared for tracing: flat face list, BVH, reflectors and the reflector
/// side table used for visibility pruning. Immutable; safe to share across tracing workers.
class PreparedScene {
public:
    enum SideBits : std::uint8_t { has_positive = 1, has_negative = 2 };

    PreparedScene(const std::vector<Mesh> &meshes, MaterialTable materials) : materials_(std::move(materials)) {
        std::vector<Face> faces;
        for (const Mesh &m : meshes) {
            for (const Face &f : m.faces) {
                if (f.material_id >= materials_.size())
                    throw LookupError("face references unknown material id " + std::to_string(f.material_id));
                faces.push_back(f);
            }
        }
        reflectors_ = build_reflectors(meshes);
        index_ = AccelIndex(std::move(faces));
        const std::size_t r = reflectors_.size();
        sides_.assign(r * r, 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                std::uint8_t bits = 0;
                for (const Vec3 &v : reflectors_[j].polygon) {
                    const double d = reflectors_[i].signed_distance(v);
                    if (d > 0.0) bits |= has_positive;
                    if (d < 0.0) bits |= has_negative;
                }
                sides_[i * r + j] = bits;
            }
    }

    explicit PreparedScene(const Scene &scene) : PreparedScene(scene_meshes(scene), scene.scenario->materials) {}

    const AccelIndex &index() const noexcept { return index_; }
    const std::vector<Face> &faces() const noexcept { return index_.faces(); }
    const std::vector<Reflector> &reflectors() const noexcept { return reflectors_; }
    const MaterialTable &materials() const noexcept { return materials_; }

    /// Where reflector j lies relative to reflector i's plane.
    std::uint8_t sides(std::size_t i, std::size_t j) const { return sides_[i * reflectors_.size() + j]; }

private:
    MaterialTable materials_;
    std::vector<Reflector> reflectors_;
    AccelIndex index_;
    std::vector<std::uint8_t> sides_;
};

// ---------------------------------------------------------------------------------------------
// Path gain

/// A specular interaction as seen by the gain computation.
struct ReflectionSite {
    Vec3 normal; ///< unit, either orientation
    const Material *material = nullptr;
};

namespace detail {

using cplx = std::complex<double>;

struct CVec3 {
    cplx x, y, z;
};

inline cplx dot(const CVec3 &e, Vec3 v) { return e.x * v.x + e.y * v.y + e.z * v.z; }

/// Vertical linear polarization for propagation direction k (unit): z projected off k.
inline Vec3 vertical_polarization(Vec3 k) {
    Vec3 v = Vec3{0, 0, 1} - k.z * k;
    if (norm(v) < 1e-9) v = Vec3{1, 0, 0} - k.x * k;
    return normalized(v);
}

inline Vec3 any_perpendicular(Vec3 k) {
    const Vec3 other = std::abs(k.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    return normalized(cross(k, other));
}

inline Angles direction_angles(Vec3 d) {
    return {std::atan2(d.y, d.x), std::atan2(d.z, std::hypot(d.x, d.y))};
}

} // namespace detail

/// Complex amplitude of a validated path: Friis factor over the unfolded length, the phase of the
/// total length, and the Fresnel coefficients applied to a field vector that starts vertically
/// polarized at tx and is projected onto the vertical polarization at rx.
inline std::complex<double> path_gain(std::span<const Vec3> vertices, std::span<const ReflectionSite> sites,
                                      const RTConfig &config) {
    using detail::cplx;
    if (vertices.size() < 2 || sites.size() + 2 != vertices.size())
        throw DomainError("path_gain: vertex and interaction counts disagree");
    double length = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) length += distance(vertices[i], vertices[i + 1]);
    const double lambda = config.wavelength();

    Vec3 k = normalized(vertices[1] - vertices[0]);
    const Vec3 e0 = detail::vertical_polarization(k);
    detail::CVec3 e{e0.x, e0.y, e0.z};
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const Vec3 k_out = normalized(vertices[i + 2] - vertices[i + 1]);
        const Vec3 n = sites[i].normal;
        const double cos_i = std::clamp(std::abs(mmrt::dot(k, n)), 0.0, 1.0);
        Vec3 s = cross(k, n);
        s = norm(s) < 1e-12 ? detail::any_perpendicular(k) : normalized(s);
        const Vec3 p_in = cross(s, k);
        const Vec3 p_out = cross(s, k_out);
        const cplx g_te = fresnel_reflection(*sites[i].material, cos_i, config.frequency, Polarization::te);
        const cplx g_tm = fresnel_reflection(*sites[i].material, cos_i, config.frequency, Polarization::tm);
        const cplx a_s = g_te * detail::dot(e, s);
        const cplx a_p = g_tm * detail::dot(e, p_in);
        e = {a_s * s.x + a_p * p_out.x, a_s * s.y + a_p * p_out.y, a_s * s.z + a_p * p_out.z};
        k = k_out;
    }
    const cplx received = detail::dot(e, detail::vertical_polarization(k));
    const double phase = -constants::two_pi * std::fmod(length / lambda, 1.0);
    return lambda / (4.0 * constants::pi * length) * received * std::polar(1.0, phase);
}

namespace detail {

inline PropagationPath finish_path(std::vector<Vec3> vertices, std::vector<Interaction> interactions,
                                   const PreparedScene &scene, const RTConfig &config) {
    PropagationPath p;
    p.length = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) p.length += distance(vertices[i], vertices[i + 1]);
    p.delay = p.length / constants::speed_of_light;
    std::vector<ReflectionSite> sites;
    sites.reserve(interactions.size());
    for (const Interaction &it : interactions)
        sites.push_back({scene.faces()[it.face].normal(), &scene.materials().at(it.material)});
    p.gain = path_gain(vertices, sites, config);
    p.gain_db = 20.0 * std::log10(std::abs(p.gain));
    p.aod = direction_angles(vertices[1] - vertices[0]);
    p.aoa = direction_angles(vertices[vertices.size() - 2] - vertices.back());
    p.reflection_count = static_cast<int>(interactions.size());
    p.vertices = std::move(vertices);
    p.interactions = std::move(interactions);
    return p;
}

inline bool segment_clear(const AccelIndex &index, Vec3 a, Vec3 b) {
    const double len = distance(a, b);
    if (!(len > constants::self_intersection_epsilon)) return false;
    const double eps = constants::self_intersection_epsilon / len;
    return !index.occluded(a, b - a, eps, 1.0 - eps);
}

inline bool same_chain(const std::vector<Vec3> &a, const std::vector<Vec3> &b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (distance(a[i], b[i]) > constants::duplicate_path_tolerance) return false;
    return true;
}

/// Face of the reflector that contains p; the first one when p sits on a shared edge.
inline std::size_t containing_face(const Reflector &r, const std::vector<Face> &faces, Vec3 p) {
    for (std::size_t fi : r.faces) {
        const Face &f = faces[fi];
        const Vec3 n = f.area_normal();
        bool inside = true;
        for (int e = 0; e < 3 && inside; ++e) {
            const Vec3 a = f.vertices[e];
            const Vec3 b = f.vertices[(e + 1) % 3];
            const Vec3 m = normalized(cross(n, b - a));
            inside = dot(m, p - a) >= -constants::polygon_edge_tolerance;
        }
        if (inside) return fi;
    }
    return r.faces.front();
}

} // namespace detail

/// Direct path, when the segment tx-rx is unoccluded.
inline std::optional<PropagationPath> los_path(Vec3 tx, Vec3 rx, const PreparedScene &scene, const RTConfig &config) {
    if (!(distance(tx, rx) > 0.0)) throw DomainError("los_path: tx and rx coincide");
    if (!detail::segment_clear(scene.index(), tx, rx)) return std::nullopt;
    return detail::finish_path({tx, rx}, {}, scene, config);
}

struct ImageMethodOptions {
    /// Skip reflector sequences that cannot produce a path. Never changes the result.
    bool visibility_pruning = true;
};

/// Reflector sequences up to a reflection order that can carry a specular path out of one
/// transmitter, with the transmitter image behind each sequence. Depends on tx only, so one
/// tree serves every receiver of that transmitter.
class ImageTree {
public:
    static constexpr std::size_t root = std::numeric_limits<std::size_t>::max();

    struct Node {
        std::size_t reflector = 0;
        std::size_t parent = root; ///< index of the previous reflection's node
        Vec3 image;                ///< tx mirrored through the sequence so far
        int depth = 1;
    };

    ImageTree(Vec3 tx, const PreparedScene &scene, int max_order, const ImageMethodOptions &options = {})
        : tx_(tx), max_order_(max_order) {
        if (max_order < 0 || max_order > constants::max_reflection_order_cap)
            throw DomainError("ImageTree: reflection order out of range");
        const auto &refl = scene.reflectors();
        std::size_t level_begin = 0;
        for (std::size_t r = 0; r < refl.size() && max_order >= 1; ++r) {
            const double d = refl[r].signed_distance(tx);
            if (d == 0.0) continue; // the source lies in the plane: no specular path
            nodes_.push_back({r, root, tx - (2.0 * d) * refl[r].normal, 1});
        }
        for (int depth = 2; depth <= max_order; ++depth) {
            const std::size_t level_end = nodes_.size();
            for (std::size_t ni = level_begin; ni < level_end; ++ni) {
                const std::size_t prev = nodes_[ni].reflector;
                const Vec3 source = source_of(ni);
                const Vec3 image = nodes_[ni].image;
                const Reflector &pr = refl[prev];
                const double side = pr.signed_distance(source);
                const std::uint8_t need = side > 0.0 ? PreparedScene::has_positive : PreparedScene::has_negative;
                for (std::size_t r = 0; r < refl.size(); ++r) {
                    if (r == prev) continue;
                    const Reflector &rf = refl[r];
                    const double d = rf.signed_distance(image);
                    if (d == 0.0) continue;
                    if (options.visibility_pruning) {
                        // The next reflection point is on the source's side of the previous plane
                        // and inside the beam from the image through the previous polygon.
                        if (!(scene.sides(prev, r) & need)) continue;
                        if (outside_beam(image, std::abs(side), pr, rf)) continue;
                    }
                    nodes_.push_back({r, ni, image - (2.0 * d) * rf.normal, depth});
                }
            }
            level_begin = level_end;
        }
    }

    Vec3 tx() const noexcept { return tx_; }
    int max_order() const noexcept { return max_order_; }
    const std::vector<Node> &nodes() const noexcept { return nodes_; }

    /// The point mirrored by node i: the parent's image, or tx at depth 1.
    Vec3 source_of(std::size_t i) const { return nodes_[i].parent == root ? tx_ : nodes_[nodes_[i].parent].image; }

private:
    /// True when every point within the edge tolerance of `next` is outside some side plane of the
    /// pyramid from `apex` through `prev`. The margin covers reflection points that the completion
    /// step accepts up to the edge tolerance off each polygon; `apex_height` is the apex distance to
    /// the plane of `prev`.
    static bool outside_beam(Vec3 apex, double apex_height, const Reflector &prev, const Reflector &next) {
        const double tol = 2.0 * constants::polygon_edge_tolerance;
        const double s = tol / apex_height;
        if (!(s < 0.5)) return false;
        const double m = (1.0 + s) * tol + tol;
        const std::size_t n = prev.polygon.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 a = prev.polygon[i];
            const Vec3 b = prev.polygon[(i + 1) % n];
            Vec3 nrm = cross(a - apex, b - apex);
            const double len = norm(nrm);
            if (!(len > 0.0)) continue;
            nrm = nrm / len;
            // inward: towards the polygon interior
            if (dot(nrm, prev.edge_inward[i]) < 0.0) nrm = -nrm;
            bool all_out = true;
            for (const Vec3 &v : next.polygon) {
                if (dot(nrm, v - apex) + s * distance(v, apex) + m >= 0.0) {
                    all_out = false;
                    break;
                }
            }
            if (all_out) return true;
        }
        return false;
    }

    Vec3 tx_;
    int max_order_ = 0;
    std::vector<Node> nodes_;
};

/// Specular paths with 1..tree.max_order() reflections from the tree's transmitter to rx.
inline std::vector<PropagationPath> image_method_paths(const ImageTree &tree, Vec3 rx, const PreparedScene &scene,
                                                       const RTConfig &config) {
    config.validate();
    std::vector<PropagationPath> out;
    const auto &refl = scene.reflectors();
    const auto &nodes = tree.nodes();
    const Vec3 tx = tree.tx();
    std::vector<std::vector<Vec3>> accepted;
    std::array<Vec3, constants::max_reflection_order_cap + 2> pts{};
    std::array<std::size_t, constants::max_reflection_order_cap> seq{};

    for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
        const int k = nodes[ni].depth;
        // walk back from rx through the sequence, last reflection first
        pts[k + 1] = rx;
        Vec3 p = rx;
        std::size_t cur = ni;
        bool ok = true;
        for (int i = k; i >= 1 && ok; --i) {
            const ImageTree::Node &node = nodes[cur];
            const Reflector &r = refl[node.reflector];
            const double dp = r.signed_distance(p);
            const double di = r.signed_distance(node.image);
            if (!(dp * di < 0.0)) {
                ok = false;
                break;
            }
            const Vec3 q = p + (dp / (dp - di)) * (node.image - p);
            if (!r.contains(q)) {
                ok = false;
                break;
            }
            pts[i] = q;
            seq[i - 1] = node.reflector;
            p = q;
            cur = node.parent;
        }
        if (!ok) continue;
        pts[0] = tx;
        for (int i = 0; i <= k && ok; ++i) ok = detail::segment_clear(scene.index(), pts[i], pts[i + 1]);
        if (!ok) continue;
        std::vector<Vec3> chain(pts.begin(), pts.begin() + k + 2);
        if (std::any_of(accepted.begin(), accepted.end(), [&](const auto &c) { return detail::same_chain(c, chain); }))
            continue;
        std::vector<Interaction> inter;
        for (int i = 1; i <= k; ++i) {
            const Reflector &r = refl[seq[i - 1]];
            inter.push_back({detail::containing_face(r, scene.faces(), pts[i]), r.material});
        }
        accepted.push_back(chain);
        out.push_back(detail::finish_path(std::move(chain), std::move(inter), scene, config));
    }
    return out;
}

/// Specular paths with 1..max_reflection_order reflections, by the image method over the
/// scene's reflector polygons.
inline std::vector<PropagationPath> image_method_paths(Vec3 tx, Vec3 rx, const PreparedScene &scene,
                                                       const RTConfig &config, const ImageMethodOptions &options = {}) {
    config.validate();
    return image_method_paths(ImageTree(tx, scene, config.max_reflection_order, options), rx, scene, config);
}

namespace detail {

inline bool stronger(const PropagationPath &a, const PropagationPath &b) {
    const double ga = std::abs(a.gain), gb = std::abs(b.gain);
    if (ga != gb) return ga > gb;
    if (a.length != b.length) return a.length < b.length;
    for (std::size_t i = 0; i < std::min(a.vertices.size(), b.vertices.size()); ++i)
        for (int c = 0; c < 3; ++c)
            if (a.vertices[i][c] != b.vertices[i][c]) return a.vertices[i][c] < b.vertices[i][c];
    return a.vertices.size() < b.vertices.size();
}

} // namespace detail

/// LOS plus image-method paths for one link, strongest first, truncated to max_paths. `tree` is
/// the transmitter's image tree, built for the configured reflection order.
inline ChannelResult trace_channel(const PreparedScene &scene, const ImageTree &tree, const Antenna &tx,
                                   const Antenna &rx, const RTConfig &config) {
    config.validate();
    if (tree.tx() != tx.position) throw DomainError("trace_channel: image tree built for another transmitter");
    if (tree.max_order() != config.max_reflection_order)
        throw DomainError("trace_channel: image tree built for another reflection order");
    ChannelResult res;
    res.tx_id = tx.id;
    res.rx_id = rx.id;
    auto los = los_path(tx.position, rx.position, scene, config);
    res.los_blocked = !los.has_value();
    if (los) res.paths.push_back(std::move(*los));
    for (auto &p : image_method_paths(tree, rx.position, scene, config)) res.paths.push_back(std::move(p));
    std::sort(res.paths.begin(), res.paths.end(), detail::stronger);
    if (res.paths.size() > config.max_paths) res.paths.resize(config.max_paths);
    if (!res.paths.empty()) {
        double power = 0.0;
        std::complex<double> sum = 0.0;
        for (const auto &p : res.paths) {
            power += std::norm(p.gain);
            sum += p.gain;
        }
        res.total_power_noncoherent_db = 10.0 * std::log10(power);
        res.total_power_coherent_db = 20.0 * std::log10(std::abs(sum));
    }
    return res;
}

inline ChannelResult trace_channel(const PreparedScene &scene, const Antenna &tx, const Antenna &rx,
                                   const RTConfig &config, const ImageMethodOptions &options = {}) {
    config.validate();
    return trace_channel(scene, ImageTree(tx.position, scene, config.max_reflection_order, options), tx, rx, config);
}

inline ChannelResult trace_channel(const Scene &scene, const std::string &tx_id, const std::string &rx_id,
                                   const RTConfig &config) {
    const Antenna &tx = scene.find_tx(tx_id);
    const Antenna &rx = scene.find_rx(rx_id);
    return trace_channel(PreparedScene(scene), tx, rx, config);
}

} // namespace mmrt
