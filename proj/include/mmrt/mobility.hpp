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
#include "mmrt/road.hpp"
#include "mmrt/templates.hpp"
#include "mmrt/vec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mmrt {

/// A stream of identical actors departing from the start of a route.
struct FlowSpec {
    std::string id; ///< actor ids are "<id>.<k>"
    std::vector<std::string> route;
    ActorKind kind = ActorKind::car;
    double target_speed = 13.9;    ///< m/s
    double acceleration = 2.6;     ///< m/s^2
    double insertion_period = 1.0; ///< s between departures
    int count = 1;
    double start_time = 0.0;
    /// Each actor's target speed is scaled by a factor drawn uniformly from [1 - d, 1 + d].
    double speed_deviation = 0.0;

    friend bool operator==(const FlowSpec &, const FlowSpec &) = default;
};

inline double default_target_speed(ActorKind k) {
    switch (k) {
    case ActorKind::car: return 13.9;
    case ActorKind::bus: return 11.1;
    case ActorKind::truck: return 11.1;
    default: return 1.4;
    }
}

inline double default_acceleration(ActorKind k) {
    switch (k) {
    case ActorKind::car: return 2.6;
    case ActorKind::bus: return 1.2;
    case ActorKind::truck: return 1.3;
    default: return 0.5;
    }
}

inline FlowSpec make_flow(std::string id, std::vector<std::string> route, ActorKind kind) {
    FlowSpec f;
    f.id = std::move(id);
    f.route = std::move(route);
    f.kind = kind;
    f.target_speed = default_target_speed(kind);
    f.acceleration = default_acceleration(kind);
    return f;
}

inline void validate(const FlowSpec &f) {
    const std::string where = "flow '" + f.id + "'";
    if (f.id.empty()) throw ConfigError("flow id must not be empty");
    if (f.route.empty()) throw ConfigError(where + ": route is empty");
    if (!(f.target_speed > 0.0)) throw ConfigError(where + ": target_speed must be > 0");
    if (!(f.acceleration > 0.0)) throw ConfigError(where + ": acceleration must be > 0");
    if (!(f.insertion_period > 0.0)) throw ConfigError(where + ": insertion_period must be > 0");
    if (f.count < 1) throw ConfigError(where + ": count must be >= 1");
    if (!std::isfinite(f.start_time)) throw ConfigError(where + ": start_time must be finite");
    if (!(f.speed_deviation >= 0.0 && f.speed_deviation < 1.0))
        throw ConfigError(where + ": speed_deviation must be in [0, 1)");
}

struct ActorState {
    std::string actor_id;
    ActorKind kind = ActorKind::car;
    Vec3 position;
    double heading = 0.0;
    double speed = 0.0;

    friend bool operator==(const ActorState &, const ActorState &) = default;
};

struct Snapshot {
    double time = 0.0;
    std::vector<ActorState> actors;

    friend bool operator==(const Snapshot &, const Snapshot &) = default;
};

struct Trace {
    std::vector<Snapshot> snapshots;

    bool empty() const noexcept { return snapshots.empty(); }
    std::size_t size() const noexcept { return snapshots.size(); }

    friend bool operator==(const Trace &, const Trace &) = default;
};

/// Strictly increasing times, unique ids per snapshot, constant kind per id.
inline void validate(const Trace &trace) {
    std::unordered_map<std::string, ActorKind> kinds;
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        const Snapshot &s = trace.snapshots[i];
        if (i > 0 && !(s.time > trace.snapshots[i - 1].time))
            throw ValidationError("snapshot time " + std::to_string(s.time) + " is not after " +
                                  std::to_string(trace.snapshots[i - 1].time));
        std::unordered_set<std::string> ids;
        for (const ActorState &a : s.actors) {
            if (!ids.insert(a.actor_id).second)
                throw ValidationError("actor '" + a.actor_id + "' appears twice at time " + std::to_string(s.time));
            if (!(a.speed >= 0.0)) throw ValidationError("actor '" + a.actor_id + "' has negative speed");
            auto [it, fresh] = kinds.emplace(a.actor_id, a.kind);
            if (!fresh && it->second != a.kind)
                throw ValidationError("actor '" + a.actor_id + "' changes kind at time " + std::to_string(s.time));
        }
    }
}

struct FlowSimulationOptions {
    double gap_min = constants::default_gap_min;
};

namespace detail {

struct SimActor {
    std::string id;
    ActorKind kind;
    std::size_t route;
    double cap;   // target speed after deviation
    double accel;
    double s = 0.0;
    double v = 0.0;
};

struct PendingInsertion {
    double time;
    std::size_t flow;
    int k;
    double cap;
};

/// Exact constant-acceleration advance over `tau` towards `cap`; returns (distance, end speed).
inline std::pair<double, double> advance(double v, double accel, double cap, double tau) {
    if (v >= cap) return {cap * tau, cap};
    const double t_reach = (cap - v) / accel;
    if (tau <= t_reach) return {v * tau + 0.5 * accel * tau * tau, v + accel * tau};
    return {v * t_reach + 0.5 * accel * t_reach * t_reach + cap * (tau - t_reach), cap};
}

inline std::string route_key(const std::vector<std::string> &route) {
    std::string key;
    for (const auto &r : route) key += r + '\x1f';
    return key;
}

} // namespace detail

/// Time-steps every flow along its route and emits one snapshot per step at t = dt, 2dt, ... <= t_end.
///
/// Actors start at rest at the route start at start_time + k * insertion_period, accelerate at the
/// flow acceleration up to min(target speed, road speed limit) and follow the route centerline.
/// Actors sharing a route keep at least gap_min of arc distance to their leader: a follower that
/// would close in is held at the gap and takes the leader's speed, and a departure waits until the
/// previous actor has cleared gap_min. Actors past the route end are removed.
inline Trace simulate_flows(const RoadNetwork &network, const std::vector<FlowSpec> &flows, double t_end, double dt,
                            std::uint64_t seed, const FlowSimulationOptions &options = {}) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
    if (!(t_end >= dt) || !std::isfinite(t_end)) throw DomainError("t_end must be >= dt");
    if (!(options.gap_min >= 0.0)) throw DomainError("gap_min must be >= 0");

    // Flows on the same road sequence share one lane and one leader order.
    std::vector<RoutePath> routes;
    std::map<std::string, std::size_t> route_index;
    std::vector<std::size_t> flow_route;
    for (const FlowSpec &f : flows) {
        validate(f);
        const std::string key = detail::route_key(f.route);
        auto it = route_index.find(key);
        if (it == route_index.end()) {
            it = route_index.emplace(key, routes.size()).first;
            try {
                routes.emplace_back(network, f.route);
            } catch (const ConfigError &e) {
                throw ConfigError("flow '" + f.id + "': " + e.what());
            }
        }
        flow_route.push_back(it->second);
    }

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<detail::PendingInsertion> pending;
    for (std::size_t fi = 0; fi < flows.size(); ++fi) {
        const FlowSpec &f = flows[fi];
        for (int k = 0; k < f.count; ++k) {
            double cap = f.target_speed;
            if (f.speed_deviation > 0.0) cap *= 1.0 + f.speed_deviation * (2.0 * uniform01() - 1.0);
            pending.push_back({f.start_time + k * f.insertion_period, fi, k, cap});
        }
    }
    std::stable_sort(pending.begin(), pending.end(), [](const auto &a, const auto &b) {
        return a.time < b.time || (a.time == b.time && a.flow < b.flow);
    });

    std::vector<detail::SimActor> actors; // alive, in insertion order
    std::size_t next_pending = 0;
    std::vector<detail::PendingInsertion> waiting; // due but blocked at the route start

    Trace trace;
    const auto steps = static_cast<std::int64_t>(std::floor(t_end / dt + 1e-9));
    double t_prev = 0.0;
    for (std::int64_t step = 1; step <= steps; ++step) {
        const double t_now = static_cast<double>(step) * dt;

        // Existing actors, leaders first (insertion order per route is front-to-back).
        std::vector<double> last_s(routes.size(), std::numeric_limits<double>::infinity());
        std::vector<double> last_v(routes.size(), 0.0);
        std::vector<detail::SimActor> survivors;
        survivors.reserve(actors.size());
        for (detail::SimActor &a : actors) {
            const RoutePath &route = routes[a.route];
            const double cap_here = std::min(a.cap, route.at(a.s).speed_limit);
            auto [ds, v_new] = detail::advance(a.v, a.accel, cap_here, dt);
            double s_new = a.s + ds;
            const double limit = last_s[a.route] - options.gap_min;
            if (s_new > limit) {
                s_new = std::max(limit, a.s);
                v_new = std::min(v_new, last_v[a.route]);
            }
            if (s_new >= route.length()) continue; // reached the route end
            v_new = std::min(v_new, std::min(a.cap, route.at(s_new).speed_limit));
            a.s = s_new;
            a.v = v_new;
            last_s[a.route] = a.s;
            last_v[a.route] = a.v;
            survivors.push_back(a);
        }
        actors = std::move(survivors);

        while (next_pending < pending.size() && pending[next_pending].time <= t_now + constants::time_tolerance)
            waiting.push_back(pending[next_pending++]);
        std::vector<detail::PendingInsertion> still_waiting;
        for (const auto &p : waiting) {
            const std::size_t r = flow_route[p.flow];
            if (last_s[r] < options.gap_min) {
                still_waiting.push_back(p);
                continue;
            }
            const FlowSpec &f = flows[p.flow];
            const RoutePath &route = routes[r];
            detail::SimActor a{f.id + "." + std::to_string(p.k), f.kind, r, p.cap, f.acceleration};
            const double tau = t_now - std::max(p.time, t_prev);
            const double cap_here = std::min(a.cap, route.at(0.0).speed_limit);
            auto [ds, v_new] = detail::advance(0.0, a.accel, cap_here, std::max(tau, 0.0));
            double s_new = ds;
            if (s_new > last_s[r] - options.gap_min) {
                s_new = std::max(0.0, last_s[r] - options.gap_min);
                v_new = std::min(v_new, last_v[r]);
            }
            if (s_new >= route.length()) continue;
            a.s = s_new;
            a.v = std::min(v_new, std::min(a.cap, route.at(s_new).speed_limit));
            last_s[r] = a.s;
            last_v[r] = a.v;
            actors.push_back(std::move(a));
        }
        waiting = std::move(still_waiting);

        Snapshot snap{t_now, {}};
        snap.actors.reserve(actors.size());
        for (const detail::SimActor &a : actors) {
            const auto sample = routes[a.route].at(a.s);
            snap.actors.push_back({a.id, a.kind, Vec3{sample.position.x, sample.position.y, 0.0}, sample.heading, a.v});
        }
        trace.snapshots.push_back(std::move(snap));
        t_prev = t_now;
    }
    return trace;
}

/// Arc position of `p` along the route polyline (nearest point), used by invariant checks.
inline double arc_position(const RoutePath &route, Vec2 p) {
    const auto &pts = route.points();
    double best_d = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Vec2 d = pts[k + 1] - pts[k];
        const double len = norm(d);
        const double u = std::clamp(dot(p - pts[k], d) / (len * len), 0.0, 1.0);
        const double dist = norm(pts[k] + u * d - p);
        if (dist < best_d) {
            best_d = dist;
            best_s = acc + u * len;
        }
        acc += len;
    }
    return best_s;
}

// ---------------------------------------------------------------------------------------------
// Trace CSV: header `time,id,kind,x,y,heading,speed`, one row per actor per timestep.

inline constexpr std::string_view trace_csv_header = "time,id,kind,x,y,heading,speed";

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace detail

inline Trace parse_trace(std::istream &in) {
    Trace trace;
    std::unordered_map<std::string, ActorKind> kinds;
    std::unordered_set<std::string> ids_at_time;
    std::string raw;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.remove_prefix(3);
        if (line.empty()) continue;
        if (first_content) {
            first_content = false;
            if (line == trace_csv_header) continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(detail::trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 7)
            throw ParseError::at_line(line_no, "expected 7 fields, found " + std::to_string(fields.size()));
        const char *names[] = {"time", "id", "kind", "x", "y", "heading", "speed"};
        double num[7] = {};
        for (int i : {0, 3, 4, 5, 6}) {
            auto v = detail::parse_double(fields[i]);
            if (!v || !std::isfinite(*v))
                throw ParseError::at_line(line_no, std::string("invalid ") + names[i] + " '" + std::string(fields[i]) + "'");
            num[i] = *v;
        }
        if (fields[1].empty()) throw ParseError::at_line(line_no, "empty actor id");
        auto kind = parse_actor_kind(fields[2]);
        if (!kind) throw ParseError::at_line(line_no, "unknown actor kind '" + std::string(fields[2]) + "'");
        if (num[6] < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": negative speed");

        const double t = num[0];
        if (trace.snapshots.empty() || t > trace.snapshots.back().time) {
            trace.snapshots.push_back({t, {}});
            ids_at_time.clear();
        } else if (t < trace.snapshots.back().time) {
            throw ValidationError("line " + std::to_string(line_no) + ": time " + detail::format_double(t) +
                                  " goes backward (previous " + detail::format_double(trace.snapshots.back().time) +
                                  ")");
        }
        std::string id(fields[1]);
        if (!ids_at_time.insert(id).second)
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate actor '" + id + "' at time " +
                                  detail::format_double(t));
        auto [it, fresh] = kinds.emplace(id, *kind);
        if (!fresh && it->second != *kind)
            throw ValidationError("line " + std::to_string(line_no) + ": actor '" + id + "' changes kind");
        trace.snapshots.back().actors.push_back({std::move(id), *kind, Vec3{num[3], num[4], 0.0}, num[5], num[6]});
    }
    return trace;
}

inline void write_trace(std::ostream &out, const Trace &trace) {
    out << trace_csv_header << '\n';
    for (const Snapshot &s : trace.snapshots)
        for (const ActorState &a : s.actors)
            out << detail::format_double(s.time) << ',' << a.actor_id << ',' << to_string(a.kind) << ','
                << detail::format_double(a.position.x) << ',' << detail::format_double(a.position.y) << ','
                << detail::format_double(a.heading) << ',' << detail::format_double(a.speed) << '\n';
}

/// Stored snapshot at t, or a linear blend of the bracketing pair. Actors present in only one of
/// the pair appear only when t is strictly nearer that snapshot. Headings are held from the earlier one.
inline Snapshot snapshot_at(const Trace &trace, double t) {
    if (trace.empty()) throw DomainError("trace is empty");
    const double first = trace.snapshots.front().time;
    const double last = trace.snapshots.back().time;
    if (!(t >= first - constants::time_tolerance && t <= last + constants::time_tolerance))
        throw DomainError("time " + std::to_string(t) + " outside trace range [" + std::to_string(first) + ", " +
                          std::to_string(last) + "]");
    for (const Snapshot &s : trace.snapshots)
        if (std::abs(s.time - t) <= constants::time_tolerance) return s;

    auto hi = std::upper_bound(trace.snapshots.begin(), trace.snapshots.end(), t,
                               [](double v, const Snapshot &s) { return v < s.time; });
    const Snapshot &b = *hi;
    const Snapshot &a = *(hi - 1);
    const double w = (t - a.time) / (b.time - a.time);
    const bool nearer_a = (t - a.time) < (b.time - t);
    const bool nearer_b = (b.time - t) < (t - a.time);

    std::unordered_map<std::string, const ActorState *> in_b;
    for (const ActorState &s : b.actors) in_b.emplace(s.actor_id, &s);
    std::unordered_set<std::string> in_a;

    Snapshot out{t, {}};
    for (const ActorState &sa : a.actors) {
        in_a.insert(sa.actor_id);
        auto it = in_b.find(sa.actor_id);
        if (it != in_b.end()) {
            const ActorState &sb = *it->second;
            ActorState m = sa;
            m.position = sa.position + w * (sb.position - sa.position);
            m.speed = sa.speed + w * (sb.speed - sa.speed);
            out.actors.push_back(std::move(m));
        } else if (nearer_a) {
            out.actors.push_back(sa);
        }
    }
    if (nearer_b)
        for (const ActorState &sb : b.actors)
            if (!in_a.contains(sb.actor_id)) out.actors.push_back(sb);
    return out;
}

} // namespace mmrt
