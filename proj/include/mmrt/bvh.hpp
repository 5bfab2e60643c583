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
#include "mmrt/mesh.hpp"
#include "mmrt/vec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace mmrt {

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void expand(Vec3 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    void expand(const Aabb &b) {
        expand(b.lo);
        expand(b.hi);
    }
    bool valid() const { return lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z; }
    Vec3 center() const { return 0.5 * (lo + hi); }
    double surface_area() const {
        if (!valid()) return 0.0;
        const Vec3 d = hi - lo;
        return 2.0 * (d.x * d.y + d.y * d.z + d.z * d.x);
    }

    /// Slab test; NaNs from rays starting on a slab plane never cull (conservative).
    bool overlaps_ray(Vec3 origin, Vec3 inv_dir, double t_min, double t_max) const {
        for (int a = 0; a < 3; ++a) {
            double t0 = (lo[a] - origin[a]) * inv_dir[a];
            double t1 = (hi[a] - origin[a]) * inv_dir[a];
            if (t0 > t1) std::swap(t0, t1);
            if (t0 > t_min) t_min = t0;
            if (t1 < t_max) t_max = t1;
            if (t_min > t_max) return false;
        }
        return true;
    }
};

inline Aabb bounds_of(const Face &f) {
    Aabb b;
    for (const Vec3 &v : f.vertices) b.expand(v);
    return b;
}

/// Moller-Trumbore. Returns the ray parameter of the hit (any sign), edges inclusive.
inline std::optional<double> intersect_triangle(Vec3 origin, Vec3 dir, const Face &f) {
    const Vec3 e1 = f.vertices[1] - f.vertices[0];
    const Vec3 e2 = f.vertices[2] - f.vertices[0];
    const Vec3 p = cross(dir, e2);
    const double det = dot(e1, p);
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 s = origin - f.vertices[0];
    const double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 q = cross(s, e1);
    const double v = dot(dir, q) * inv;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    return dot(e2, q) * inv;
}

struct Hit {
    std::size_t face = 0;
    double t = 0.0; ///< in units of the query direction
    Vec3 point;
};

/// Bounding-volume hierarchy over a triangle soup, built with binned SAH.
class AccelIndex {
public:
    static constexpr std::size_t max_leaf_size = 4;

    AccelIndex() = default;
    explicit AccelIndex(std::vector<Face> faces) : faces_(std::move(faces)) {
        order_.resize(faces_.size());
        std::iota(order_.begin(), order_.end(), std::uint32_t{0});
        if (faces_.empty()) return;
        boxes_.reserve(faces_.size());
        centers_.reserve(faces_.size());
        for (const Face &f : faces_) {
            boxes_.push_back(bounds_of(f));
            centers_.push_back(boxes_.back().center());
        }
        nodes_.reserve(2 * faces_.size());
        nodes_.push_back({});
        build(0, 0, static_cast<std::uint32_t>(faces_.size()));
        boxes_.clear();
        centers_.clear();
    }

    std::size_t face_count() const noexcept { return faces_.size(); }
    const std::vector<Face> &faces() const noexcept { return faces_; }

    /// Nearest hit with t * |dir| > self-intersection epsilon. Ties on t go to the lower face index.
    std::optional<Hit> intersect(Vec3 origin, Vec3 dir) const {
        const double len = norm(dir);
        if (!(len > 0.0)) return std::nullopt;
        const double t_min = constants::self_intersection_epsilon / len;
        double best_t = std::numeric_limits<double>::infinity();
        std::size_t best_face = 0;
        bool found = false;
        traverse(origin, dir, t_min, [&](std::uint32_t face, double t) {
            if (t > t_min && (t < best_t || (t == best_t && face < best_face))) {
                best_t = t;
                best_face = face;
                found = true;
            }
            return false;
        }, [&] { return best_t; });
        if (!found) return std::nullopt;
        return Hit{best_face, best_t, origin + best_t * dir};
    }

    /// True when any face is hit with t_min < t < t_max.
    bool occluded(Vec3 origin, Vec3 dir, double t_min, double t_max) const {
        bool hit = false;
        traverse(origin, dir, t_min, [&](std::uint32_t, double t) {
            if (t > t_min && t < t_max) hit = true;
            return hit;
        }, [&] { return t_max; });
        return hit;
    }

    /// Face indices per leaf, for structural checks.
    std::vector<std::vector<std::size_t>> leaves() const {
        std::vector<std::vector<std::size_t>> out;
        for (const Node &n : nodes_) {
            if (n.count == 0) continue;
            out.emplace_back(order_.begin() + n.first, order_.begin() + n.first + n.count);
        }
        return out;
    }

private:
    struct Node {
        Aabb box;
        std::uint32_t first = 0; ///< leaf: first index into order_; inner: right child
        std::uint32_t count = 0; ///< 0 for inner nodes (left child is the next node)
    };

    template <class OnHit, class Far>
    void traverse(Vec3 origin, Vec3 dir, double t_min, OnHit &&on_hit, Far &&far) const {
        if (nodes_.empty()) return;
        const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
        std::array<std::uint32_t, 64> stack;
        std::size_t top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const Node &n = nodes_[stack[--top]];
            if (!n.box.overlaps_ray(origin, inv, t_min, far())) continue;
            if (n.count > 0) {
                for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
                    const std::uint32_t fi = order_[i];
                    if (auto t = intersect_triangle(origin, dir, faces_[fi]))
                        if (on_hit(fi, *t)) return;
                }
                continue;
            }
            const std::uint32_t self = static_cast<std::uint32_t>(&n - nodes_.data());
            stack[top++] = n.first;
            stack[top++] = self + 1;
        }
    }

    void build(std::uint32_t node, std::uint32_t begin, std::uint32_t end) {
        Aabb box, cbox;
        for (std::uint32_t i = begin; i < end; ++i) {
            box.expand(boxes_[order_[i]]);
            cbox.expand(centers_[order_[i]]);
        }
        nodes_[node].box = box;
        const std::uint32_t count = end - begin;
        if (count <= max_leaf_size) {
            nodes_[node].first = begin;
            nodes_[node].count = count;
            return;
        }

        constexpr int bins = 16;
        int best_axis = -1;
        int best_split = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int axis = 0; axis < 3; ++axis) {
            const double lo = cbox.lo[axis];
            const double extent = cbox.hi[axis] - lo;
            if (!(extent > 0.0)) continue;
            std::array<Aabb, bins> bin_box;
            std::array<std::uint32_t, bins> bin_count{};
            for (std::uint32_t i = begin; i < end; ++i) {
                const int b = std::min(bins - 1, static_cast<int>(bins * (centers_[order_[i]][axis] - lo) / extent));
                bin_box[b].expand(boxes_[order_[i]]);
                ++bin_count[b];
            }
            for (int split = 1; split < bins; ++split) {
                Aabb left, right;
                std::uint32_t nl = 0, nr = 0;
                for (int b = 0; b < split; ++b) {
                    if (bin_count[b]) left.expand(bin_box[b]);
                    nl += bin_count[b];
                }
                for (int b = split; b < bins; ++b) {
                    if (bin_count[b]) right.expand(bin_box[b]);
                    nr += bin_count[b];
                }
                if (nl == 0 || nr == 0) continue;
                const double cost = left.surface_area() * nl + right.surface_area() * nr;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_axis = axis;
                    best_split = split;
                }
            }
        }

        std::uint32_t mid;
        if (best_axis < 0) {
            // coincident centroids: split the range in half
            mid = begin + count / 2;
        } else {
            const double lo = cbox.lo[best_axis];
            const double extent = cbox.hi[best_axis] - lo;
            auto it = std::stable_partition(order_.begin() + begin, order_.begin() + end, [&](std::uint32_t f) {
                const int b =
                    std::min(bins - 1, static_cast<int>(bins * (centers_[f][best_axis] - lo) / extent));
                return b < best_split;
            });
            mid = static_cast<std::uint32_t>(it - order_.begin());
            if (mid == begin || mid == end) mid = begin + count / 2;
        }

        nodes_.push_back({});
        build(node + 1, begin, mid);
        const std::uint32_t right = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({});
        build(right, mid, end);
        nodes_[node].first = right; // left child is always node + 1
        nodes_[node].count = 0;
    }

    std::vector<Face> faces_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::vector<Aabb> boxes_;
    std::vector<Vec3> centers_;
};

} // namespace mmrt
