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
#include "mmrt/mesh.hpp"
#include "mmrt/vec.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace mmrt {

/// Road centerline; actors travel along it in polyline order.
struct Road {
    std::string id;
    std::vector<Vec2> polyline;
    double speed_limit = 13.89; ///< m/s

    friend bool operator==(const Road &, const Road &) = default;
};

class RoadNetwork {
public:
    RoadNetwork() = default;
    explicit RoadNetwork(std::vector<Road> roads) : roads_(std::move(roads)) {
        for (std::size_t i = 0; i < roads_.size(); ++i) {
            const Road &r = roads_[i];
            if (r.id.empty()) throw ConfigError("road " + std::to_string(i) + " has an empty id");
            if (r.polyline.size() < 2) throw ConfigError("road '" + r.id + "' needs at least 2 polyline points");
            if (!(r.speed_limit > 0.0)) throw ConfigError("road '" + r.id + "' speed_limit must be > 0");
            for (std::size_t k = 0; k + 1 < r.polyline.size(); ++k)
                if (norm(r.polyline[k + 1] - r.polyline[k]) <= 1e-9)
                    throw ConfigError("road '" + r.id + "' has a zero-length segment");
            for (std::size_t j = 0; j < i; ++j)
                if (roads_[j].id == r.id) throw ConfigError("duplicate road id '" + r.id + "'");
        }
    }

    const std::vector<Road> &roads() const noexcept { return roads_; }
    bool empty() const noexcept { return roads_.empty(); }

    const Road *find(const std::string &id) const {
        auto it = std::find_if(roads_.begin(), roads_.end(), [&](const Road &r) { return r.id == id; });
        return it == roads_.end() ? nullptr : &*it;
    }

    friend bool operator==(const RoadNetwork &, const RoadNetwork &) = default;

private:
    std::vector<Road> roads_;
};

/// Concatenated polyline of a route with cumulative arc length and per-segment speed limits.
class RoutePath {
public:
    struct Sample {
        Vec2 position;
        double heading;
        double speed_limit;
    };

    RoutePath() = default;

    /// Joins consecutive roads at a shared endpoint. A road may be traversed in either
    /// direction when it is not the first of the route; the first road is traversed forward
    /// unless only its start connects to the next road.
    RoutePath(const RoadNetwork &network, const std::vector<std::string> &road_ids) {
        if (road_ids.empty()) throw ConfigError("route is empty");
        constexpr double join_tol = 1e-6;
        std::vector<std::vector<Vec2>> oriented;
        std::vector<double> limits;
        for (std::size_t i = 0; i < road_ids.size(); ++i) {
            const Road *road = network.find(road_ids[i]);
            if (!road) throw ConfigError("route references unknown road '" + road_ids[i] + "'");
            std::vector<Vec2> pts = road->polyline;
            if (i == 0) {
                if (road_ids.size() > 1) {
                    const Road *next = network.find(road_ids[1]);
                    if (next) {
                        auto touches = [&](Vec2 p) {
                            return norm(p - next->polyline.front()) <= join_tol ||
                                   norm(p - next->polyline.back()) <= join_tol;
                        };
                        if (!touches(pts.back()) && touches(pts.front())) std::reverse(pts.begin(), pts.end());
                    }
                }
            } else {
                const Vec2 exit = oriented.back().back();
                if (norm(pts.front() - exit) > join_tol) {
                    if (norm(pts.back() - exit) > join_tol)
                        throw ConfigError("route is disconnected between roads '" + road_ids[i - 1] + "' and '" +
                                          road_ids[i] + "'");
                    std::reverse(pts.begin(), pts.end());
                }
            }
            oriented.push_back(std::move(pts));
            limits.push_back(road->speed_limit);
        }
        for (std::size_t i = 0; i < oriented.size(); ++i) {
            const auto &pts = oriented[i];
            for (std::size_t k = 0; k < pts.size(); ++k) {
                if (k == 0 && !points_.empty()) continue; // shared joint
                points_.push_back(pts[k]);
                if (points_.size() > 1) segment_limit_.push_back(limits[i]);
            }
        }
        cumulative_.assign(points_.size(), 0.0);
        for (std::size_t k = 1; k < points_.size(); ++k)
            cumulative_[k] = cumulative_[k - 1] + norm(points_[k] - points_[k - 1]);
    }

    double length() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
    double max_speed_limit() const {
        return segment_limit_.empty() ? 0.0 : *std::max_element(segment_limit_.begin(), segment_limit_.end());
    }

    /// State at arc length s, clamped to [0, length]. At a joint the outgoing segment is used.
    Sample at(double s) const {
        s = std::clamp(s, 0.0, length());
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
        std::size_t seg = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
        seg = std::min(seg, points_.size() - 2);
        const Vec2 a = points_[seg];
        const Vec2 b = points_[seg + 1];
        const double seg_len = cumulative_[seg + 1] - cumulative_[seg];
        const double u = (s - cumulative_[seg]) / seg_len;
        const Vec2 d = b - a;
        return {a + u * d, wrap_heading(std::atan2(d.y, d.x)), segment_limit_[seg]};
    }

    const std::vector<Vec2> &points() const noexcept { return points_; }

private:
    std::vector<Vec2> points_;
    std::vector<double> cumulative_;
    std::vector<double> segment_limit_;
};

} // namespace mmrt
