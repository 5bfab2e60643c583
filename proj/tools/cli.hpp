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

#include "mmrt.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mmrt::cli {

/// Exit codes: 0 success, 1 validation or configuration error, 2 runtime error (corrupt or
/// incompatible data files, unexpected failures).
enum ExitCode : int { ok = 0, config_failure = 1, runtime_failure = 2 };

inline int exit_code(const Error &e) {
    switch (e.kind()) {
    case ErrorKind::parse:
    case ErrorKind::version:
        return runtime_failure;
    default:
        return config_failure;
    }
}

namespace detail {

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

inline std::string default_summary_path(const std::string &output) {
    std::filesystem::path p(output);
    p.replace_extension();
    return p.string() + "_summary.csv";
}

inline int scenario_validate(const std::string &path, std::ostream &out) {
    const Scenario sc = load_scenario(path);
    out << "scenario " << path << '\n';
    for (std::size_t i = 0; i < sc.buildings.size(); ++i)
        out << "  building " << i << ": " << sc.buildings[i].face_count() << " faces, height "
            << mmrt::detail::format_double(sc.building_specs[i].height) << " m, " << sc.building_specs[i].material
            << '\n';
    out << "  ground: " << sc.ground.face_count() << " faces\n";
    out << "  roads: " << sc.roads.roads().size() << '\n';
    out << "total: " << sc.buildings.size() << " buildings, " << sc.face_count() << " faces\n";
    return ok;
}

struct FlowsArgs {
    std::string scenario;
    std::string flows;
    double t_end = 20.0;
    double dt = 1.0;
    std::uint64_t seed = 1;
    std::string out;
};

inline int flows(const FlowsArgs &a, std::ostream &out, std::ostream &err) {
    const Scenario sc = load_scenario(a.scenario);
    const auto file = config_json::flow_file_from_json(json_io::load_file(a.flows), a.flows);
    const Trace trace = simulate_flows(sc.roads, file.flows, a.t_end, a.dt, a.seed, {file.gap_min});
    std::ostringstream csv;
    write_trace(csv, trace);
    if (a.out.empty() || a.out == "-") {
        out << csv.str();
    } else {
        write_text_file(a.out, csv.str());
        err << "wrote " << trace.size() << " snapshots to " << a.out << '\n';
    }
    return ok;
}

inline int episode(const std::string &config_path, std::ostream &out) {
    EpisodeConfig cfg = config_json::load_episode_config(config_path);
    if (cfg.output_path.empty()) cfg.output_path = "episode.jsonl";
    if (cfg.summary_path.empty()) cfg.summary_path = default_summary_path(cfg.output_path);
    const EpisodeResult r = run_episode(cfg);
    save_episode(r, cfg.output_path);
    std::ostringstream summary;
    write_summary_csv(r, summary);
    write_text_file(cfg.summary_path, summary.str());
    out << "scenes " << r.totals.scene_count << '\n'
        << "total_runtime_s " << mmrt::detail::format_double(r.totals.total_runtime_s) << '\n'
        << "output " << cfg.output_path << '\n'
        << "summary " << cfg.summary_path << '\n';
    return ok;
}

struct BenchArgs {
    std::string config;
    bool standard = false;
    std::optional<std::size_t> repetitions;
    std::string out_dir = ".";
    bool assert_hard = false;
};

inline int bench(const BenchArgs &a, std::ostream &out, std::ostream &err) {
    if (a.config.empty() == !a.standard) throw ConfigError("bench: give exactly one of --config or --standard");
    BenchMatrixConfig cfg = a.standard ? standard_bench_config()
                                       : bench_config_from_json(json_io::load_file(a.config), a.config);
    if (a.repetitions) cfg.repetitions = *a.repetitions;
    cfg.validate();
    const BenchReport report = run_matrix(cfg);
    const BenchChecks checks = evaluate_checks(report);

    std::filesystem::create_directories(a.out_dir);
    for (const BenchCell &c : report.cells) {
        std::ostringstream csv;
        write_cell_csv(c, csv);
        write_text_file((std::filesystem::path(a.out_dir) / ("bench_" + c.id + ".csv")).string(), csv.str());
    }
    std::ostringstream table;
    write_table(report, checks, table);
    write_text_file((std::filesystem::path(a.out_dir) / "bench_table.txt").string(), table.str());
    out << table.str();
    if (!checks.gap.passed) err << "warning: soft check (c) failed: " << checks.gap.detail << '\n';
    if (a.assert_hard && !checks.hard_passed()) {
        err << "error: hard benchmark check failed\n";
        return config_failure;
    }
    return ok;
}

inline int inspect(const std::string &path, std::size_t scene, std::ostream &out) {
    const EpisodeResult r = load_episode_file(path);
    if (scene >= r.records.size())
        throw LookupError("scene " + std::to_string(scene) + " out of range (episode has " +
                          std::to_string(r.records.size()) + " scenes)");
    const SceneRecord &rec = r.records[scene];
    char line[200];
    out << "scene " << rec.scene_index << " (snapshot " << rec.snapshot_index << ") t="
        << mmrt::detail::format_double(rec.time) << " s\n";
    out << "faces " << rec.total_face_count << ", runtime " << mmrt::detail::format_double(rec.runtime_s) << " s\n";
    out << "actors (" << rec.actors.size() << ")\n";
    for (const ActorState &a : rec.actors) {
        std::snprintf(line, sizeof line, "  %-14s %-10s x=%9.3f y=%9.3f heading=%7.4f speed=%7.3f\n", a.actor_id.c_str(),
                      std::string(to_string(a.kind)).c_str(), a.position.x, a.position.y, a.heading, a.speed);
        out << line;
    }
    out << "links (" << rec.links.size() << ")\n";
    for (const ChannelResult &l : rec.links) {
        out << "  " << l.tx_id << " -> " << l.rx_id << (l.los_blocked ? "  LOS blocked" : "  LOS") << ", "
            << l.paths.size() << " paths, power " << mmrt::detail::format_double(l.total_power_noncoherent_db)
            << " dB\n";
        std::snprintf(line, sizeof line, "    %4s %12s %14s %10s %5s\n", "#", "length_m", "delay_ns", "gain_db", "refl");
        out << line;
        for (std::size_t i = 0; i < l.paths.size(); ++i) {
            const PropagationPath &p = l.paths[i];
            std::snprintf(line, sizeof line, "    %4zu %12.4f %14.4f %10.3f %5d\n", i, p.length, p.delay * 1e9,
                          p.gain_db, p.reflection_count);
            out << line;
        }
    }
    return ok;
}

inline int export_standard(const std::string &dir, std::ostream &out) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path scen = fs::path(dir) / "standard_scenario.json";
    write_text_file(scen.string(), scenario_to_json(standard::scenario()).dump(2) + "\n");

    EpisodeConfig ep = standard::episode(scen.string());
    ep.output_path = (fs::path(dir) / "standard_episode.jsonl").string();
    write_text_file((fs::path(dir) / "standard_episode.json").string(), config_json::to_json(ep).dump(2) + "\n");

    BenchMatrixConfig bc = standard_bench_config();
    bc.base.scenario_path = scen.string();
    write_text_file((fs::path(dir) / "standard_bench.json").string(), bench_config_to_json(bc).dump(2) + "\n");

    json_io::json flows = {{"flows", json_io::json::array()}, {"gap_min", standard::gap_min}};
    for (const FlowSpec &f : standard::flows()) flows["flows"].push_back(config_json::to_json(f));
    write_text_file((fs::path(dir) / "standard_flows.json").string(), flows.dump(2) + "\n");
    out << "wrote standard_scenario.json, standard_episode.json, standard_bench.json, standard_flows.json to " << dir
        << '\n';
    return ok;
}

} // namespace detail

/// Runs the command line `args` (without the program name).
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"mmrt: mobility-driven mmWave ray-tracing channel simulator", "mmrt"};
    app.require_subcommand(1);

    auto *scenario = app.add_subcommand("scenario", "Scenario file tools");
    scenario->require_subcommand(1);
    auto *validate = scenario->add_subcommand("validate", "Check a scenario file and print face counts");
    std::string scenario_path;
    validate->add_option("path", scenario_path, "Scenario file")->required();

    detail::FlowsArgs fa;
    auto *flows = app.add_subcommand("flows", "Simulate actor flows and write a trace CSV");
    flows->add_option("--scenario", fa.scenario, "Scenario file with the road network")->required();
    flows->add_option("--flows", fa.flows, "Flow configuration file")->required();
    flows->add_option("--t-end", fa.t_end, "Simulated duration in seconds")->capture_default_str();
    flows->add_option("--dt", fa.dt, "Snapshot period in seconds")->capture_default_str();
    flows->add_option("--seed", fa.seed, "Random seed")->capture_default_str();
    flows->add_option("--out", fa.out, "Output CSV (standard output when omitted)");

    std::string episode_config;
    auto *episode = app.add_subcommand("episode", "Run an episode and write records and the summary CSV");
    episode->add_option("--config", episode_config, "Episode configuration file")->required();

    detail::BenchArgs ba;
    std::size_t reps = 0;
    auto *bench = app.add_subcommand("bench", "Run the receiver x model benchmark matrix");
    bench->add_option("--config", ba.config, "Benchmark configuration file");
    bench->add_flag("--standard", ba.standard, "Use the built-in standard benchmark");
    auto *reps_opt = bench->add_option("--repetitions", reps, "Repetitions per cell")->check(CLI::PositiveNumber);
    bench->add_option("--out-dir", ba.out_dir, "Directory for the CSVs and the table")->capture_default_str();
    bench->add_flag("--assert", ba.assert_hard, "Exit 1 when a hard ordering check fails");

    std::string episode_file;
    std::size_t scene_index = 0;
    auto *inspect = app.add_subcommand("inspect", "Print a digest of one scene of an episode file");
    inspect->add_option("episode", episode_file, "Episode file")->required();
    inspect->add_option("--scene", scene_index, "Scene index")->required();

    std::string export_dir = ".";
    auto *exp = app.add_subcommand("export-standard", "Write the standard benchmark configuration files");
    exp->add_option("--out-dir", export_dir, "Output directory")->capture_default_str();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return config_failure;
    }

    try {
        if (validate->parsed()) return detail::scenario_validate(scenario_path, out);
        if (flows->parsed()) return detail::flows(fa, out, err);
        if (episode->parsed()) return detail::episode(episode_config, out);
        if (bench->parsed()) {
            if (reps_opt->count() > 0) ba.repetitions = reps;
            return detail::bench(ba, out, err);
        }
        if (inspect->parsed()) return detail::inspect(episode_file, scene_index, out);
        if (exp->parsed()) return detail::export_standard(export_dir, out);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return runtime_failure;
    }
    return config_failure;
}

} // namespace mmrt::cli
