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
#include "mmrt/log.hpp"
#include "mmrt/mobility.hpp"
#include "mmrt/raytracer.hpp"
#include "mmrt/scenario.hpp"
#include "mmrt/scene.hpp"
#include "mmrt/stats.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace mmrt {

/// Trace produced by the built-in flow simulator. Snapshots before `warmup` seconds are dropped.
struct FlowTraceSource {
    std::vector<FlowSpec> flows;
    double t_end = 20.0;
    double dt = 1.0;
    std::uint64_t seed = 1;
    double gap_min = constants::default_gap_min;
    double warmup = 0.0;

    friend bool operator==(const FlowTraceSource &, const FlowTraceSource &) = default;
};

/// Trace CSV on disk.
struct FileTraceSource {
    std::string path;

    friend bool operator==(const FileTraceSource &, const FileTraceSource &) = default;
};

using TraceSource = std::variant<FlowTraceSource, FileTraceSource>;

struct EpisodeConfig {
    std::string scenario_path;
    TraceSource trace = FlowTraceSource{};
    std::size_t snapshot_stride = 1;
    Variant variant = Variant::detailed;
    std::vector<Antenna> tx;
    RxSpec rx = FixedRx{};
    RTConfig rt;
    std::size_t worker_count = 1;
    OutOfBoundsPolicy out_of_bounds = OutOfBoundsPolicy::skip;
    std::string output_path;  ///< episode records (line-delimited JSON)
    std::string summary_path; ///< per-scene CSV; derived from output_path when empty

    void validate() const {
        if (tx.empty()) throw ConfigError("episode needs at least one transmitter");
        if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
        if (worker_count < 1) throw ConfigError("worker_count must be >= 1");
        rt.validate();
    }

    friend bool operator==(const EpisodeConfig &, const EpisodeConfig &) = default;
};

struct SceneRecord {
    std::size_t scene_index = 0;
    std::size_t snapshot_index = 0; ///< position in the trace before striding
    double time = 0.0;
    std::vector<ActorState> actors;
    std::size_t total_face_count = 0;
    std::vector<Antenna> receivers; ///< as resolved for this scene
    std::vector<ChannelResult> links; ///< tx-major: (tx0, rx0), (tx0, rx1), ...
    double runtime_s = 0.0;

    friend bool operator==(const SceneRecord &, const SceneRecord &) = default;
};

struct EpisodeTotals {
    double total_runtime_s = 0.0;
    std::size_t scene_count = 0;
    double mean_runtime_s = 0.0;
    double std_runtime_s = 0.0;

    friend bool operator==(const EpisodeTotals &, const EpisodeTotals &) = default;
};

struct EpisodeResult {
    EpisodeConfig config;
    std::vector<SceneRecord> records;
    EpisodeTotals totals;

    friend bool operator==(const EpisodeResult &, const EpisodeResult &) = default;
};

inline EpisodeTotals compute_totals(const std::vector<SceneRecord> &records) {
    EpisodeTotals t;
    t.scene_count = records.size();
    if (records.empty()) return t;
    std::vector<double> rt;
    for (const auto &r : records) {
        rt.push_back(r.runtime_s);
        t.total_runtime_s += r.runtime_s;
    }
    const Summary s = summarize(rt);
    t.mean_runtime_s = s.mean;
    t.std_runtime_s = s.std;
    return t;
}

// ---------------------------------------------------------------------------------------------
// Configuration files

namespace config_json {

using json_io::json;

inline json to_json(const FlowSpec &f) {
    return {{"id", f.id},
            {"route", f.route},
            {"kind", std::string(to_string(f.kind))},
            {"target_speed", f.target_speed},
            {"acceleration", f.acceleration},
            {"insertion_period", f.insertion_period},
            {"count", f.count},
            {"start_time", f.start_time},
            {"speed_deviation", f.speed_deviation}};
}

inline FlowSpec flow_from_json(const json &j, const std::string &path, std::size_t index) {
    using namespace json_io;
    check_keys(j, path,
               {"id", "route", "kind", "target_speed", "acceleration", "insertion_period", "count", "start_time",
                "speed_deviation"});
    const std::string kind_s = string(j, path, "kind");
    auto kind = parse_actor_kind(kind_s);
    if (!kind) throw ConfigError(path + ".kind: unknown actor kind '" + kind_s + "'");
    FlowSpec f = make_flow(j.contains("id") ? string(j, path, "id") : "flow" + std::to_string(index), {}, *kind);
    const json &route = array(required(j, path, "route"), path + ".route");
    for (std::size_t i = 0; i < route.size(); ++i) f.route.push_back(string(route[i], path + ".route[" + std::to_string(i) + "]"));
    f.target_speed = number_or(j, path, "target_speed", f.target_speed);
    f.acceleration = number_or(j, path, "acceleration", f.acceleration);
    f.insertion_period = number_or(j, path, "insertion_period", f.insertion_period);
    f.count = static_cast<int>(integer_or(j, path, "count", f.count));
    f.start_time = number_or(j, path, "start_time", f.start_time);
    f.speed_deviation = number_or(j, path, "speed_deviation", f.speed_deviation);
    validate(f);
    return f;
}

/// Flow file: {"flows": [...], "gap_min": 2.5}
struct FlowFile {
    std::vector<FlowSpec> flows;
    double gap_min = constants::default_gap_min;
};

inline std::vector<FlowSpec> flows_from_json(const json &arr, const std::string &path) {
    std::vector<FlowSpec> flows;
    json_io::array(arr, path);
    for (std::size_t i = 0; i < arr.size(); ++i)
        flows.push_back(flow_from_json(arr[i], path + "[" + std::to_string(i) + "]", i));
    return flows;
}

inline FlowFile flow_file_from_json(const json &doc, const std::string &source) {
    json_io::check_keys(doc, source, {"flows", "gap_min"});
    FlowFile f;
    f.flows = flows_from_json(json_io::required(doc, source, "flows"), source + ".flows");
    f.gap_min = json_io::number_or(doc, source, "gap_min", f.gap_min);
    return f;
}

inline json to_json(const Antenna &a) { return {{"id", a.id}, {"position", json_io::to_json(a.position)}}; }

inline Antenna antenna_from_json(const json &j, const std::string &path) {
    json_io::check_keys(j, path, {"id", "position"});
    return {json_io::string(j, path, "id"), json_io::vec3(json_io::required(j, path, "position"), path + ".position")};
}

inline std::vector<Antenna> antennas_from_json(const json &arr, const std::string &path) {
    json_io::array(arr, path);
    std::vector<Antenna> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(antenna_from_json(arr[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline json to_json(const RxSpec &rx) {
    if (const auto *f = std::get_if<FixedRx>(&rx)) {
        json arr = json::array();
        for (const Antenna &a : f->receivers) arr.push_back(to_json(a));
        return {{"fixed", std::move(arr)}};
    }
    const auto &m = std::get<MobileRx>(rx);
    json kinds = json::array();
    for (ActorKind k : m.kinds) kinds.push_back(std::string(to_string(k)));
    return {{"mobile", {{"kinds", std::move(kinds)}, {"height_offset", m.height_offset}}}};
}

inline MobileRx mobile_from_json(const json &j, const std::string &path) {
    json_io::check_keys(j, path, {"kinds", "height_offset"});
    MobileRx m;
    if (j.contains("kinds")) {
        m.kinds.clear();
        const json &arr = json_io::array(j["kinds"], path + ".kinds");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string s = json_io::string(arr[i], path + ".kinds[" + std::to_string(i) + "]");
            auto k = parse_actor_kind(s);
            if (!k) throw ConfigError(path + ".kinds: unknown actor kind '" + s + "'");
            m.kinds.push_back(*k);
        }
    }
    m.height_offset = json_io::number_or(j, path, "height_offset", m.height_offset);
    return m;
}

inline RxSpec rx_from_json(const json &j, const std::string &path) {
    json_io::check_keys(j, path, {"fixed", "mobile"});
    if (j.contains("fixed") == j.contains("mobile"))
        throw ConfigError(path + ": give exactly one of 'fixed' or 'mobile'");
    if (j.contains("fixed")) return FixedRx{antennas_from_json(j["fixed"], path + ".fixed")};
    return mobile_from_json(j["mobile"], path + ".mobile");
}

inline json to_json(const RTConfig &rt) {
    return {{"frequency", rt.frequency}, {"max_reflection_order", rt.max_reflection_order}, {"max_paths", rt.max_paths}};
}

inline RTConfig rt_from_json(const json &j, const std::string &path) {
    json_io::check_keys(j, path, {"frequency", "max_reflection_order", "max_paths"});
    RTConfig rt;
    rt.frequency = json_io::number_or(j, path, "frequency", rt.frequency);
    rt.max_reflection_order = static_cast<int>(json_io::integer_or(j, path, "max_reflection_order", rt.max_reflection_order));
    const long long mp = json_io::integer_or(j, path, "max_paths", static_cast<long long>(rt.max_paths));
    if (mp < 1) throw ConfigError(path + ".max_paths must be >= 1");
    rt.max_paths = static_cast<std::size_t>(mp);
    return rt;
}

inline json to_json(const TraceSource &src) {
    if (const auto *f = std::get_if<FileTraceSource>(&src)) return {{"file", f->path}};
    const auto &fl = std::get<FlowTraceSource>(src);
    json flows = json::array();
    for (const FlowSpec &f : fl.flows) flows.push_back(to_json(f));
    return {{"flows", std::move(flows)}, {"t_end", fl.t_end}, {"dt", fl.dt}, {"seed", fl.seed},
            {"gap_min", fl.gap_min}, {"warmup", fl.warmup}};
}

inline TraceSource trace_source_from_json(const json &j, const std::string &path) {
    using namespace json_io;
    require_object(j, path);
    if (j.contains("file")) {
        check_keys(j, path, {"file"});
        return FileTraceSource{string(j, path, "file")};
    }
    check_keys(j, path, {"flows", "t_end", "dt", "seed", "gap_min", "warmup"});
    FlowTraceSource fl;
    fl.flows = flows_from_json(required(j, path, "flows"), path + ".flows");
    fl.t_end = number_or(j, path, "t_end", fl.t_end);
    fl.dt = number_or(j, path, "dt", fl.dt);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            throw ConfigError(path + ".seed: expected a non-negative integer");
        fl.seed = j["seed"].get<std::uint64_t>();
    }
    fl.gap_min = number_or(j, path, "gap_min", fl.gap_min);
    fl.warmup = number_or(j, path, "warmup", fl.warmup);
    return fl;
}

inline json to_json(const EpisodeConfig &c) {
    json tx = json::array();
    for (const Antenna &a : c.tx) tx.push_back(to_json(a));
    return {{"scenario", c.scenario_path},
            {"trace", to_json(c.trace)},
            {"snapshot_stride", c.snapshot_stride},
            {"variant", std::string(to_string(c.variant))},
            {"tx", std::move(tx)},
            {"rx", to_json(c.rx)},
            {"rt", to_json(c.rt)},
            {"worker_count", c.worker_count},
            {"out_of_bounds", c.out_of_bounds == OutOfBoundsPolicy::skip ? "skip" : "clamp"},
            {"output", c.output_path},
            {"summary", c.summary_path}};
}

inline EpisodeConfig episode_config_from_json(const json &j, const std::string &path = "episode") {
    using namespace json_io;
    check_keys(j, path,
               {"scenario", "trace", "snapshot_stride", "variant", "tx", "rx", "rt", "worker_count", "out_of_bounds",
                "output", "summary"});
    EpisodeConfig c;
    c.scenario_path = string(j, path, "scenario");
    c.trace = trace_source_from_json(required(j, path, "trace"), path + ".trace");
    const long long stride = integer_or(j, path, "snapshot_stride", 1);
    if (stride < 1) throw ConfigError(path + ".snapshot_stride must be >= 1");
    c.snapshot_stride = static_cast<std::size_t>(stride);
    if (j.contains("variant")) {
        const std::string v = string(j, path, "variant");
        auto var = parse_variant(v);
        if (!var) throw ConfigError(path + ".variant: expected 'detailed' or 'cube', got '" + v + "'");
        c.variant = *var;
    }
    c.tx = antennas_from_json(required(j, path, "tx"), path + ".tx");
    c.rx = rx_from_json(required(j, path, "rx"), path + ".rx");
    if (j.contains("rt")) c.rt = rt_from_json(j["rt"], path + ".rt");
    const long long workers = integer_or(j, path, "worker_count", 1);
    if (workers < 1) throw ConfigError(path + ".worker_count must be >= 1");
    c.worker_count = static_cast<std::size_t>(workers);
    if (j.contains("out_of_bounds")) {
        const std::string p = string(j, path, "out_of_bounds");
        if (p != "skip" && p != "clamp") throw ConfigError(path + ".out_of_bounds: expected 'skip' or 'clamp'");
        c.out_of_bounds = p == "skip" ? OutOfBoundsPolicy::skip : OutOfBoundsPolicy::clamp;
    }
    if (j.contains("output")) c.output_path = string(j, path, "output");
    if (j.contains("summary")) c.summary_path = string(j, path, "summary");
    c.validate();
    return c;
}

inline EpisodeConfig load_episode_config(const std::string &file) {
    return episode_config_from_json(json_io::load_file(file), file);
}

} // namespace config_json

// ---------------------------------------------------------------------------------------------
// Running

/// Trace from the configured source, flows simulated on the scenario road network.
inline Trace load_trace(const TraceSource &src, const Scenario &scenario) {
    if (const auto *f = std::get_if<FileTraceSource>(&src)) {
        std::ifstream in(f->path, std::ios::binary);
        if (!in) throw ConfigError("cannot open trace '" + f->path + "'");
        Trace t = parse_trace(in);
        validate(t);
        return t;
    }
    const auto &fl = std::get<FlowTraceSource>(src);
    Trace t = simulate_flows(scenario.roads, fl.flows, fl.t_end, fl.dt, fl.seed, {fl.gap_min});
    if (fl.warmup > 0.0)
        std::erase_if(t.snapshots,
                      [&](const Snapshot &s) { return s.time < fl.warmup - constants::time_tolerance; });
    return t;
}

namespace detail {

/// Runs task(i) for i in [0, n) on up to `workers` threads; the first exception is rethrown.
template <class Task> void parallel_for(std::size_t n, std::size_t workers, const Task &task) {
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// Traces every link of one prepared scene with up to `workers` threads: one image tree per
/// transmitter, then the links. Results are placed by link index, so they do not depend on
/// scheduling.
inline std::vector<ChannelResult> trace_links(const PreparedScene &prepared, const std::vector<Antenna> &tx,
                                              const std::vector<Antenna> &rx, const RTConfig &rt,
                                              std::size_t workers) {
    rt.validate();
    std::vector<std::optional<ImageTree>> trees(tx.size());
    detail::parallel_for(tx.size(), workers, [&](std::size_t i) {
        trees[i].emplace(tx[i].position, prepared, rt.max_reflection_order);
    });
    const std::size_t n = tx.size() * rx.size();
    std::vector<ChannelResult> links(n);
    detail::parallel_for(n, workers, [&](std::size_t i) {
        const std::size_t t = i / rx.size();
        links[i] = trace_channel(prepared, *trees[t], tx[t], rx[i % rx.size()], rt);
    });
    return links;
}

/// One scene of an episode: compose snapshot `si`, then time preparing and tracing it.
inline SceneRecord trace_scene(const EpisodeConfig &config, const std::shared_ptr<const Scenario> &scenario,
                               const Trace &trace, std::size_t si, std::size_t scene_index) {
    ComposeOptions compose;
    compose.out_of_bounds = config.out_of_bounds;
    const Snapshot &snap = trace.snapshots.at(si);
    const Scene scene = compose_scene(scenario, snap, config.variant, config.tx, config.rx, compose);
    SceneRecord rec;
    rec.scene_index = scene_index;
    rec.snapshot_index = si;
    rec.time = snap.time;
    rec.actors = snap.actors;
    rec.total_face_count = total_face_count(scene);
    rec.receivers = scene.rx;

    const auto start = std::chrono::steady_clock::now();
    const PreparedScene prepared(scene);
    rec.links = trace_links(prepared, scene.tx, scene.rx, config.rt, config.worker_count);
    const auto stop = std::chrono::steady_clock::now();
    rec.runtime_s = std::chrono::duration<double>(stop - start).count();
    return rec;
}

/// Snapshot indices an episode visits.
inline std::vector<std::size_t> episode_snapshots(const EpisodeConfig &config, const Trace &trace) {
    std::vector<std::size_t> out;
    for (std::size_t si = 0; si < trace.size(); si += config.snapshot_stride) out.push_back(si);
    return out;
}

/// For every selected snapshot: compose the scene, trace all (tx, rx) links, time the tracing.
inline EpisodeResult run_episode(const EpisodeConfig &config, std::shared_ptr<const Scenario> scenario,
                                 const Trace &trace) {
    config.validate();
    if (trace.empty()) throw ConfigError("trace is empty");
    EpisodeResult result;
    result.config = config;
    bool any_receiver = false;
    for (std::size_t si : episode_snapshots(config, trace)) {
        SceneRecord rec = trace_scene(config, scenario, trace, si, result.records.size());
        if (rec.receivers.empty()) log::warn("scene " + std::to_string(rec.scene_index) + " has no receivers");
        any_receiver = any_receiver || !rec.receivers.empty();
        result.records.push_back(std::move(rec));
    }
    if (!any_receiver) throw ConfigError("no scene resolved any receiver");
    result.totals = compute_totals(result.records);
    return result;
}

inline EpisodeResult run_episode(const EpisodeConfig &config) {
    config.validate();
    auto scenario = std::make_shared<const Scenario>(load_scenario(config.scenario_path));
    const Trace trace = load_trace(config.trace, *scenario);
    return run_episode(config, scenario, trace);
}

// ---------------------------------------------------------------------------------------------
// Episode file: line-delimited JSON. Line 1 is a header
//   {"format": "mmrt-episode", "version": 1, "scene_count": N, "config": {...}, "totals": {...}}
// followed by one self-contained record per scene. Doubles are written in shortest round-trip
// form; -inf power levels (no paths) are written as null.

inline constexpr int episode_format_version = 1;
inline constexpr std::string_view episode_format_name = "mmrt-episode";

namespace detail {

using json_io::json;

inline json db_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline double db_from_json(const json &j) {
    return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

inline json path_to_json(const PropagationPath &p) {
    json verts = json::array();
    for (const Vec3 &v : p.vertices) verts.push_back(json_io::to_json(v));
    json inter = json::array();
    for (const Interaction &i : p.interactions) inter.push_back(json::array({i.face, i.material}));
    return {{"length", p.length},
            {"delay", p.delay},
            {"gain_db", p.gain_db},
            {"gain_phase_rad", std::arg(p.gain)},
            {"gain_re", p.gain.real()},
            {"gain_im", p.gain.imag()},
            {"aod_az", p.aod.azimuth},
            {"aod_el", p.aod.elevation},
            {"aoa_az", p.aoa.azimuth},
            {"aoa_el", p.aoa.elevation},
            {"reflection_count", p.reflection_count},
            {"vertices", std::move(verts)},
            {"interactions", std::move(inter)}};
}

inline PropagationPath path_from_json(const json &j) {
    PropagationPath p;
    p.length = j.at("length").get<double>();
    p.delay = j.at("delay").get<double>();
    p.gain_db = j.at("gain_db").get<double>();
    p.gain = {j.at("gain_re").get<double>(), j.at("gain_im").get<double>()};
    p.aod = {j.at("aod_az").get<double>(), j.at("aod_el").get<double>()};
    p.aoa = {j.at("aoa_az").get<double>(), j.at("aoa_el").get<double>()};
    p.reflection_count = j.at("reflection_count").get<int>();
    for (const json &v : j.at("vertices")) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()});
    for (const json &i : j.at("interactions"))
        p.interactions.push_back({i.at(0).get<std::size_t>(), i.at(1).get<MaterialId>()});
    return p;
}

inline json record_to_json(const SceneRecord &r) {
    json actors = json::array();
    for (const ActorState &a : r.actors)
        actors.push_back({{"id", a.actor_id},
                          {"kind", std::string(to_string(a.kind))},
                          {"x", a.position.x},
                          {"y", a.position.y},
                          {"z", a.position.z},
                          {"heading", a.heading},
                          {"speed", a.speed}});
    json rx = json::array();
    for (const Antenna &a : r.receivers) rx.push_back(config_json::to_json(a));
    json links = json::array();
    for (const ChannelResult &c : r.links) {
        json paths = json::array();
        for (const PropagationPath &p : c.paths) paths.push_back(path_to_json(p));
        links.push_back({{"tx_id", c.tx_id},
                         {"rx_id", c.rx_id},
                         {"los_blocked", c.los_blocked},
                         {"total_power_noncoherent_db", db_to_json(c.total_power_noncoherent_db)},
                         {"total_power_coherent_db", db_to_json(c.total_power_coherent_db)},
                         {"paths", std::move(paths)}});
    }
    return {{"scene_index", r.scene_index},
            {"snapshot_index", r.snapshot_index},
            {"time", r.time},
            {"actors", std::move(actors)},
            {"total_face_count", r.total_face_count},
            {"runtime_s", r.runtime_s},
            {"receivers", std::move(rx)},
            {"links", std::move(links)}};
}

inline SceneRecord record_from_json(const json &j) {
    SceneRecord r;
    r.scene_index = j.at("scene_index").get<std::size_t>();
    r.snapshot_index = j.at("snapshot_index").get<std::size_t>();
    r.time = j.at("time").get<double>();
    for (const json &a : j.at("actors")) {
        const std::string kind = a.at("kind").get<std::string>();
        auto k = parse_actor_kind(kind);
        if (!k) throw std::invalid_argument("unknown actor kind '" + kind + "'");
        r.actors.push_back({a.at("id").get<std::string>(), *k,
                            {a.at("x").get<double>(), a.at("y").get<double>(), a.at("z").get<double>()},
                            a.at("heading").get<double>(), a.at("speed").get<double>()});
    }
    r.total_face_count = j.at("total_face_count").get<std::size_t>();
    r.runtime_s = j.at("runtime_s").get<double>();
    for (const json &a : j.at("receivers")) r.receivers.push_back(config_json::antenna_from_json(a, "receiver"));
    for (const json &l : j.at("links")) {
        ChannelResult c;
        c.tx_id = l.at("tx_id").get<std::string>();
        c.rx_id = l.at("rx_id").get<std::string>();
        c.los_blocked = l.at("los_blocked").get<bool>();
        c.total_power_noncoherent_db = db_from_json(l.at("total_power_noncoherent_db"));
        c.total_power_coherent_db = db_from_json(l.at("total_power_coherent_db"));
        for (const json &p : l.at("paths")) c.paths.push_back(path_from_json(p));
        r.links.push_back(std::move(c));
    }
    return r;
}

inline json totals_to_json(const EpisodeTotals &t) {
    return {{"total_runtime_s", t.total_runtime_s},
            {"scene_count", t.scene_count},
            {"mean_runtime_s", t.mean_runtime_s},
            {"std_runtime_s", t.std_runtime_s}};
}

inline EpisodeTotals totals_from_json(const json &j) {
    return {j.at("total_runtime_s").get<double>(), j.at("scene_count").get<std::size_t>(),
            j.at("mean_runtime_s").get<double>(), j.at("std_runtime_s").get<double>()};
}

} // namespace detail

inline void serialize_episode(const EpisodeResult &result, std::ostream &out) {
    detail::json header{{"format", episode_format_name},
                        {"version", episode_format_version},
                        {"scene_count", result.records.size()},
                        {"config", config_json::to_json(result.config)},
                        {"totals", detail::totals_to_json(result.totals)}};
    out << header.dump() << '\n';
    for (const SceneRecord &r : result.records) out << detail::record_to_json(r).dump() << '\n';
}

inline EpisodeResult load_episode(std::istream &in) {
    using detail::json;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    std::size_t line_no = 0;
    EpisodeResult result;
    std::size_t expected = 0;

    auto parse_line = [&](std::size_t start, std::string_view text) -> json {
        try {
            return json::parse(text.begin(), text.end());
        } catch (const json::parse_error &e) {
            const std::size_t at = start + (e.byte > 0 ? e.byte - 1 : 0);
            throw ParseError::at_offset(at, "malformed episode record (" + std::string(e.what()) + ")");
        }
    };

    while (pos < content.size()) {
        const std::size_t start = pos;
        std::size_t end = content.find('\n', pos);
        const bool terminated = end != std::string::npos;
        if (!terminated) end = content.size();
        pos = terminated ? end + 1 : end;
        std::string_view text(content.data() + start, end - start);
        if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
        if (text.empty()) continue;
        const json j = parse_line(start, text);
        try {
            if (line_no == 0) {
                if (!j.is_object() || j.value("format", std::string()) != episode_format_name)
                    throw ParseError::at_offset(start, "not an episode file (missing format header)");
                const int version = j.at("version").get<int>();
                if (version != episode_format_version) throw VersionError(version, episode_format_version);
                expected = j.at("scene_count").get<std::size_t>();
                result.config = config_json::episode_config_from_json(j.at("config"), "config");
                result.totals = detail::totals_from_json(j.at("totals"));
            } else {
                if (!terminated) throw ParseError::at_offset(end, "truncated record (no line terminator)");
                result.records.push_back(detail::record_from_json(j));
                if (result.records.back().scene_index != result.records.size() - 1)
                    throw ParseError::at_offset(start, "scene_index out of sequence");
            }
        } catch (const Error &) {
            throw;
        } catch (const std::exception &e) {
            throw ParseError::at_offset(start, std::string("invalid episode record: ") + e.what());
        }
        ++line_no;
    }
    if (line_no == 0) throw ParseError::at_offset(0, "empty episode file");
    if (result.records.size() != expected)
        throw ParseError::at_offset(content.size(), "truncated file: expected " + std::to_string(expected) +
                                                        " scene records, found " +
                                                        std::to_string(result.records.size()));
    return result;
}

inline void save_episode(const EpisodeResult &result, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    serialize_episode(result, out);
}

inline EpisodeResult load_episode_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open episode file '" + path + "'");
    return load_episode(in);
}

inline constexpr std::string_view summary_csv_header = "scene_index,time,total_face_count,n_links,n_paths_total,runtime_s";

inline void write_summary_csv(const EpisodeResult &result, std::ostream &out) {
    out << summary_csv_header << '\n';
    for (const SceneRecord &r : result.records) {
        std::size_t paths = 0;
        for (const auto &l : r.links) paths += l.paths.size();
        out << r.scene_index << ',' << detail::format_double(r.time) << ',' << r.total_face_count << ','
            << r.links.size() << ',' << paths << ',' << detail::format_double(r.runtime_s) << '\n';
    }
}

} // namespace mmrt
