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

#include "mmrt/episode.hpp"
#include "mmrt/stats.hpp"

#include <array>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace mmrt {

// ---------------------------------------------------------------------------------------------
// Standard benchmark: 200 m x 200 m block with two crossing two-lane roads, eight convex
// buildings, one rooftop transmitter, six street-level fixed receivers versus receivers on the
// six cars.

namespace standard {

inline constexpr double half_extent = 100.0;
inline constexpr double car_speed = 7.5;
inline constexpr std::size_t car_count = 6;
inline constexpr double t_end = 24.0;
inline constexpr double dt = 1.0;
inline constexpr double warmup = 5.0;
inline constexpr std::size_t snapshot_count = 20;
inline constexpr std::uint64_t seed = 2026;
inline constexpr double gap_min = 15.0; ///< center to center; longer than a bus plus a car

inline std::vector<BuildingSpec> buildings() {
    auto rect = [](double x0, double y0, double x1, double y1, double h) {
        return BuildingSpec{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, h, "concrete"};
    };
    return {
        rect(18, 18, 50, 60, 20),
        rect(60, 20, 90, 45, 12),
        rect(-55, 20, -20, 50, 30),
        BuildingSpec{{{-90, 60}, {-60, 60}, {-55, 85}, {-75, 95}, {-92, 80}}, 15, "concrete"},
        rect(-50, -45, -18, -18, 25),
        rect(-90, -90, -60, -55, 10),
        rect(20, -55, 55, -20, 18),
        BuildingSpec{{{65, -20}, {80, -60}, {92, -20}}, 22, "concrete"},
    };
}

inline RoadNetwork roads() {
    const double e = half_extent;
    return RoadNetwork({
        {"east", {{-e, -3}, {e, -3}}, 13.9},
        {"west", {{e, 3}, {-e, 3}}, 13.9},
        {"north", {{3, -e}, {3, e}}, 13.9},
        {"south", {{-3, e}, {-3, -e}}, 13.9},
        {"walk_x", {{-e, -9}, {e, -9}}, 2.0},
        {"walk_y", {{9, -e}, {9, e}}, 2.0},
    });
}

inline Scenario scenario() {
    return build_scenario({{-half_extent, -half_extent}, {half_extent, half_extent}}, default_material_table(),
                          buildings(), roads());
}

inline std::vector<FlowSpec> flows() {
    auto flow = [](std::string id, std::string road, ActorKind kind, int count, double period, double start,
                   std::optional<double> speed = std::nullopt) {
        FlowSpec f = make_flow(std::move(id), {std::move(road)}, kind);
        f.count = count;
        f.insertion_period = period;
        f.start_time = start;
        if (speed) f.target_speed = *speed;
        return f;
    };
    return {
        flow("car_e", "east", ActorKind::car, 2, 3.0, 0.0, car_speed),
        flow("car_w", "west", ActorKind::car, 2, 3.0, 0.5, car_speed),
        flow("car_n", "north", ActorKind::car, 1, 1.0, 0.0, car_speed),
        flow("car_s", "south", ActorKind::car, 1, 1.0, 1.0, car_speed),
        flow("bus_n", "north", ActorKind::bus, 1, 1.0, 2.0),
        flow("bus_w", "west", ActorKind::bus, 1, 1.0, 8.0),
        flow("truck_s", "south", ActorKind::truck, 1, 1.0, 3.0),
        flow("ped_x", "walk_x", ActorKind::pedestrian, 2, 4.0, 0.0),
        flow("ped_y", "walk_y", ActorKind::pedestrian, 2, 4.0, 1.0),
    };
}

inline FlowTraceSource trace_source() {
    FlowTraceSource src;
    src.flows = flows();
    src.t_end = t_end;
    src.dt = dt;
    src.seed = seed;
    src.warmup = warmup;
    src.gap_min = gap_min;
    return src;
}

inline std::vector<Antenna> transmitters() { return {{"bs0", {20, 20, 25}}}; }

inline std::vector<Antenna> fixed_receivers() {
    return {{"rx_ne", {10, 10, 1.5}}, {"rx_nw", {-10, 10, 1.5}},   {"rx_sw", {-10, -10, 1.5}},
            {"rx_se", {10, -10, 1.5}}, {"rx_mw", {-45, 10, 1.5}}, {"rx_me", {45, -10, 1.5}}};
}

inline MobileRx mobile_receivers() { return MobileRx{{ActorKind::car}, 1.5}; }

/// Episode over the standard trace with fixed receivers and the detailed models.
inline EpisodeConfig episode(std::string scenario_path = "standard_scenario.json") {
    EpisodeConfig c;
    c.scenario_path = std::move(scenario_path);
    c.trace = trace_source();
    c.variant = Variant::detailed;
    c.tx = transmitters();
    c.rx = FixedRx{fixed_receivers()};
    c.worker_count = 1;
    return c;
}

} // namespace standard

// ---------------------------------------------------------------------------------------------
// Matrix {fixed, mobile} receivers x {detailed, cube} models.

struct BenchMatrixConfig {
    EpisodeConfig base;  ///< variant and rx are overridden per cell
    std::size_t repetitions = 5;
    std::vector<Antenna> fixed_rx;
    MobileRx mobile_rx;
    std::shared_ptr<const Scenario> scenario; ///< loaded from base.scenario_path when null
    std::optional<Trace> trace;               ///< taken from base.trace when empty

    void validate() const {
        if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
        if (fixed_rx.empty()) throw ConfigError("bench needs at least one fixed receiver");
        if (mobile_rx.kinds.empty()) throw ConfigError("bench mobile receivers need at least one actor kind");
    }
};

inline BenchMatrixConfig standard_bench_config() {
    BenchMatrixConfig c;
    c.base = standard::episode();
    c.fixed_rx = standard::fixed_receivers();
    c.mobile_rx = standard::mobile_receivers();
    c.scenario = std::make_shared<const Scenario>(standard::scenario());
    return c;
}

enum class RxMode { fixed, mobile };

inline std::string_view to_string(RxMode m) { return m == RxMode::fixed ? "fixed" : "mobile"; }

struct BenchCell {
    std::string id; ///< "<rx mode>-<variant>"
    RxMode rx_mode = RxMode::fixed;
    Variant variant = Variant::detailed;
    std::vector<double> runtime_median_s; ///< per scene, median over repetitions
    std::vector<std::size_t> face_counts;
    std::vector<std::size_t> link_counts;
    std::vector<std::size_t> path_counts;
    Summary runtime;

    std::size_t total_links() const {
        std::size_t n = 0;
        for (auto c : link_counts) n += c;
        return n;
    }
};

struct BenchReport {
    std::array<BenchCell, 4> cells; ///< fixed-detailed, fixed-cube, mobile-detailed, mobile-cube
    std::size_t repetitions = 0;
    std::size_t worker_count = 1;
    std::size_t hardware_threads = 0;

    const BenchCell &cell(RxMode m, Variant v) const {
        return cells[(m == RxMode::fixed ? 0 : 2) + (v == Variant::detailed ? 0 : 1)];
    }
};

struct CheckResult {
    bool passed = false;
    std::string detail;
};

/// Hard checks (a) detailed >= cube per receiver mode, (b) mobile >= fixed per variant, with
/// equal link counts across cells; soft check (c) the detailed-cube gap is larger under mobile.
struct BenchChecks {
    CheckResult detailed_vs_cube;
    CheckResult mobile_vs_fixed;
    CheckResult equal_links;
    CheckResult gap; ///< soft

    bool hard_passed() const { return detailed_vs_cube.passed && mobile_vs_fixed.passed && equal_links.passed; }
};

namespace detail {

inline std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

inline EpisodeConfig cell_config(const BenchMatrixConfig &config, RxMode mode, Variant variant) {
    EpisodeConfig ec = config.base;
    ec.variant = variant;
    if (mode == RxMode::fixed)
        ec.rx = FixedRx{config.fixed_rx};
    else
        ec.rx = config.mobile_rx;
    return ec;
}

inline std::string cell_id(RxMode mode, Variant variant) {
    return std::string(to_string(mode)) + "-" + std::string(to_string(variant));
}

inline EpisodeResult run_cell_once(const EpisodeConfig &ec, const std::string &id,
                                   const std::shared_ptr<const Scenario> &scenario, const Trace &trace) {
    try {
        return run_episode(ec, scenario, trace);
    } catch (const Error &e) {
        throw ConfigError("cell " + id + ": " + e.what());
    }
}

} // namespace detail

/// Runs the four cells on the same scenario and trace. A first untimed pass over every cell
/// records the counts; then, scene by scene, each repetition times the four cells back to back
/// so that load changes on the machine touch all of them alike.
inline BenchReport run_matrix(const BenchMatrixConfig &config) {
    config.validate();
    config.base.rt.validate();
    auto scenario = config.scenario ? config.scenario
                                    : std::make_shared<const Scenario>(load_scenario(config.base.scenario_path));
    const Trace trace = config.trace ? *config.trace : load_trace(config.base.trace, *scenario);
    BenchReport report;
    report.repetitions = config.repetitions;
    report.worker_count = config.base.worker_count;
    report.hardware_threads = std::thread::hardware_concurrency();

    std::array<EpisodeConfig, 4> configs;
    std::size_t k = 0;
    for (RxMode m : {RxMode::fixed, RxMode::mobile})
        for (Variant v : {Variant::detailed, Variant::cube}) {
            BenchCell &cell = report.cells[k];
            cell.id = detail::cell_id(m, v);
            cell.rx_mode = m;
            cell.variant = v;
            configs[k] = detail::cell_config(config, m, v);
            const EpisodeResult r = detail::run_cell_once(configs[k], cell.id, scenario, trace);
            for (const SceneRecord &rec : r.records) {
                cell.face_counts.push_back(rec.total_face_count);
                cell.link_counts.push_back(rec.links.size());
                std::size_t paths = 0;
                for (const auto &l : rec.links) paths += l.paths.size();
                cell.path_counts.push_back(paths);
            }
            ++k;
        }
    const std::vector<std::size_t> snapshots = episode_snapshots(config.base, trace);
    for (std::size_t scene = 0; scene < snapshots.size(); ++scene) {
        std::array<std::vector<double>, 4> samples;
        for (std::size_t rep = 0; rep < config.repetitions; ++rep)
            for (k = 0; k < 4; ++k)
                samples[k].push_back(trace_scene(configs[k], scenario, trace, snapshots[scene], scene).runtime_s);
        for (k = 0; k < 4; ++k) report.cells[k].runtime_median_s.push_back(median(std::move(samples[k])));
    }
    for (BenchCell &cell : report.cells) cell.runtime = summarize(cell.runtime_median_s);
    return report;
}

inline BenchChecks evaluate_checks(const BenchReport &r) {
    using detail::fmt;
    BenchChecks c;
    const auto &fd = r.cell(RxMode::fixed, Variant::detailed);
    const auto &fc = r.cell(RxMode::fixed, Variant::cube);
    const auto &md = r.cell(RxMode::mobile, Variant::detailed);
    const auto &mc = r.cell(RxMode::mobile, Variant::cube);

    // identical geometry in both variants (no actors) counts as equality
    auto at_least = [](const BenchCell &d, const BenchCell &c) {
        return d.face_counts == c.face_counts || d.runtime.mean >= c.runtime.mean;
    };
    c.detailed_vs_cube.passed = at_least(fd, fc) && at_least(md, mc);
    c.detailed_vs_cube.detail = "fixed " + fmt(fd.runtime.mean) + " vs " + fmt(fc.runtime.mean) + " s, mobile " +
                                fmt(md.runtime.mean) + " vs " + fmt(mc.runtime.mean) + " s";
    c.mobile_vs_fixed.passed = md.runtime.mean >= fd.runtime.mean && mc.runtime.mean >= fc.runtime.mean;
    c.mobile_vs_fixed.detail = "detailed " + fmt(md.runtime.mean) + " vs " + fmt(fd.runtime.mean) + " s, cube " +
                               fmt(mc.runtime.mean) + " vs " + fmt(fc.runtime.mean) + " s";
    bool links = true;
    for (const auto &cell : r.cells) links = links && cell.link_counts == fd.link_counts;
    c.equal_links.passed = links;
    c.equal_links.detail = "links per cell: " + std::to_string(fd.total_links()) + " " +
                           std::to_string(fc.total_links()) + " " + std::to_string(md.total_links()) + " " +
                           std::to_string(mc.total_links());
    const double gap_fixed = fd.runtime.mean - fc.runtime.mean;
    const double gap_mobile = md.runtime.mean - mc.runtime.mean;
    c.gap.passed = gap_mobile > gap_fixed;
    c.gap.detail = "detailed-cube gap: mobile " + fmt(gap_mobile) + " s, fixed " + fmt(gap_fixed) + " s";
    return c;
}

inline constexpr std::string_view bench_csv_header = "cell,scene_index,face_count,runtime_s_median";

inline void write_cell_csv(const BenchCell &cell, std::ostream &out) {
    out << bench_csv_header << '\n';
    for (std::size_t i = 0; i < cell.runtime_median_s.size(); ++i)
        out << cell.id << ',' << i << ',' << cell.face_counts[i] << ',' << detail::format_double(cell.runtime_median_s[i])
            << '\n';
}

/// Means and deviations for the four panels, plus the checks.
inline void write_table(const BenchReport &r, const BenchChecks &checks, std::ostream &out) {
    char line[160];
    out << "repetitions " << r.repetitions << ", worker_count " << r.worker_count << ", hardware threads "
        << r.hardware_threads << '\n';
    std::snprintf(line, sizeof line, "%-16s %8s %8s %12s %12s %12s %12s\n", "cell", "scenes", "faces", "mean_s",
                  "std_s", "min_s", "max_s");
    out << line;
    for (const BenchCell &c : r.cells) {
        double faces = 0.0;
        for (auto f : c.face_counts) faces += static_cast<double>(f);
        faces /= std::max<std::size_t>(1, c.face_counts.size());
        std::snprintf(line, sizeof line, "%-16s %8zu %8.1f %12.6f %12.6f %12.6f %12.6f\n", c.id.c_str(),
                      c.runtime_median_s.size(), faces, c.runtime.mean, c.runtime.std, c.runtime.min, c.runtime.max);
        out << line;
    }
    auto row = [&](const char *name, const CheckResult &cr, bool soft) {
        out << (cr.passed ? "ok   " : (soft ? "warn " : "FAIL ")) << name << ": " << cr.detail << '\n';
    };
    row("(a) detailed >= cube", checks.detailed_vs_cube, false);
    row("(b) mobile >= fixed", checks.mobile_vs_fixed, false);
    row("equal link counts", checks.equal_links, false);
    row("(c) gap larger under mobile", checks.gap, true);
}

// ---------------------------------------------------------------------------------------------
// Bench configuration file:
//   {"scenario": "...", "trace": {...}, "snapshot_stride": 1, "tx": [...], "rt": {...},
//    "worker_count": 1, "out_of_bounds": "skip", "repetitions": 5,
//    "fixed_rx": [...], "mobile_rx": {"kinds": ["car"], "height_offset": 1.5}}

inline BenchMatrixConfig bench_config_from_json(const json_io::json &j, const std::string &path = "bench") {
    using namespace json_io;
    check_keys(j, path,
               {"scenario", "trace", "snapshot_stride", "tx", "rt", "worker_count", "out_of_bounds", "repetitions",
                "fixed_rx", "mobile_rx"});
    BenchMatrixConfig c;
    json ep = json::object();
    for (const char *k : {"scenario", "trace", "snapshot_stride", "tx", "rt", "worker_count", "out_of_bounds"})
        if (j.contains(k)) ep[k] = j[k];
    ep["rx"] = {{"fixed", required(j, path, "fixed_rx")}};
    c.base = config_json::episode_config_from_json(ep, path);
    c.fixed_rx = config_json::antennas_from_json(j["fixed_rx"], path + ".fixed_rx");
    c.mobile_rx = config_json::mobile_from_json(required(j, path, "mobile_rx"), path + ".mobile_rx");
    const long long reps = integer_or(j, path, "repetitions", 5);
    if (reps < 1) throw ConfigError(path + ".repetitions must be >= 1");
    c.repetitions = static_cast<std::size_t>(reps);
    c.validate();
    return c;
}

inline json_io::json bench_config_to_json(const BenchMatrixConfig &c) {
    json_io::json j = config_json::to_json(c.base);
    j.erase("rx");
    j.erase("variant");
    j.erase("output");
    j.erase("summary");
    json_io::json fixed = json_io::json::array();
    for (const Antenna &a : c.fixed_rx) fixed.push_back(config_json::to_json(a));
    j["fixed_rx"] = std::move(fixed);
    j["mobile_rx"] = config_json::to_json(RxSpec{c.mobile_rx})["mobile"];
    j["repetitions"] = c.repetitions;
    return j;
}

} // namespace mmrt
