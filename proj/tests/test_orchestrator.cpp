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

#include "mmrt/bench.hpp"
#include "mmrt/episode.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

using namespace mmrt;

namespace {

std::shared_ptr<const Scenario> block_scenario() {
    return std::make_shared<const Scenario>(parse_scenario(R"({
        "bounds": {"min": [-60, -60], "max": [60, 60]},
        "buildings": [{"footprint": [[10, 10], [30, 10], [30, 30], [10, 30]], "height": 20},
                      {"footprint": [[-30, -30], [-10, -30], [-10, -10], [-30, -10]], "height": 12, "material": "glass"}],
        "roads": [{"id": "main", "polyline": [[-60, 0], [60, 0]]}]
    })"));
}

Trace rows(const std::string &text) {
    std::istringstream in(text);
    return parse_trace(in);
}

EpisodeConfig base_config() {
    EpisodeConfig c;
    c.tx = {{"bs", {0, 40, 15}}};
    c.rx = FixedRx{{{"r0", {5, -5, 1.5}}, {"r1", {-20, 5, 1.5}}}};
    return c;
}

Trace five_snapshots() {
    std::string text;
    for (int t = 0; t < 5; ++t)
        text += std::to_string(t) + ",car1,car," + std::to_string(-40 + 8 * t) + ",0,0,8\n" + std::to_string(t) +
                ",bus1,bus," + std::to_string(30 - 5 * t) + ",0,3.14159,5\n";
    return rows(text);
}

void zero_runtimes(EpisodeResult &r) {
    for (auto &rec : r.records) rec.runtime_s = 0.0;
    r.totals = {};
}

} // namespace

TEST(Episode, CountsRecordsAndLinks) {
    const Trace t = rows("0,car1,car,0,0,0,8\n1,car1,car,8,0,0,8\n2,car1,car,16,0,0,8\n");
    const EpisodeResult r = run_episode(base_config(), block_scenario(), t);
    ASSERT_EQ(r.records.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(r.records[i].scene_index, i);
        EXPECT_EQ(r.records[i].links.size(), 2u);
        EXPECT_GE(r.records[i].runtime_s, 0.0);
    }
    EXPECT_EQ(r.totals.scene_count, 3u);
}

TEST(Episode, Stride) {
    EpisodeConfig c = base_config();
    c.snapshot_stride = 2;
    const EpisodeResult r = run_episode(c, block_scenario(), five_snapshots());
    ASSERT_EQ(r.records.size(), 3u);
    EXPECT_EQ(r.records[0].snapshot_index, 0u);
    EXPECT_EQ(r.records[1].snapshot_index, 2u);
    EXPECT_EQ(r.records[2].snapshot_index, 4u);
    EXPECT_EQ(r.records[2].time, 4.0);
    c.snapshot_stride = 3;
    EXPECT_EQ(run_episode(c, block_scenario(), five_snapshots()).records.size(), 2u);
}

TEST(Episode, MobileReceiverPosition) {
    EpisodeConfig c = base_config();
    c.rx = MobileRx{{ActorKind::car}, 1.5};
    const EpisodeResult r = run_episode(c, block_scenario(), rows("0,car1,car,18,5,0,8\n"));
    ASSERT_EQ(r.records[0].receivers.size(), 1u);
    EXPECT_EQ(r.records[0].receivers[0].position, (Vec3{18, 5, 1.5}));
    EXPECT_EQ(r.records[0].links[0].rx_id, "car1");
}

TEST(Episode, MobileReceiversTrackActorsExactly) {
    EpisodeConfig c = base_config();
    c.rx = MobileRx{{ActorKind::car, ActorKind::bus}, 2.25};
    const EpisodeResult r = run_episode(c, block_scenario(), five_snapshots());
    for (const auto &rec : r.records) {
        ASSERT_EQ(rec.receivers.size(), rec.actors.size());
        for (std::size_t i = 0; i < rec.actors.size(); ++i) {
            EXPECT_EQ(rec.receivers[i].position.x, rec.actors[i].position.x);
            EXPECT_EQ(rec.receivers[i].position.y, rec.actors[i].position.y);
            EXPECT_EQ(rec.receivers[i].position.z, rec.actors[i].position.z + 2.25);
        }
        EXPECT_EQ(rec.links.size(), c.tx.size() * rec.receivers.size());
    }
}

TEST(Episode, FaceCountMatchesComposedScene) {
    EpisodeConfig c = base_config();
    const auto sc = block_scenario();
    const Trace t = five_snapshots();
    const EpisodeResult r = run_episode(c, sc, t);
    for (const auto &rec : r.records) {
        const Scene s = compose_scene(sc, t.snapshots[rec.snapshot_index], c.variant, c.tx, c.rx);
        EXPECT_EQ(rec.total_face_count, total_face_count(s));
    }
}

TEST(Episode, ReceiverErrorsAndWarnings) {
    EpisodeConfig c = base_config();
    c.rx = MobileRx{{ActorKind::truck}, 1.5};
    EXPECT_THROW(run_episode(c, block_scenario(), five_snapshots()), ConfigError);
    EXPECT_THROW(run_episode(base_config(), block_scenario(), Trace{}), ConfigError);

    c.rx = MobileRx{{ActorKind::car}, 1.5};
    std::vector<std::string> warnings;
    log::ScopedSink sink([&](std::string_view m) { warnings.emplace_back(m); });
    const EpisodeResult r = run_episode(c, block_scenario(), rows("0,bus1,bus,0,0,0,1\n1,car1,car,0,0,0,1\n"));
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_TRUE(r.records[0].links.empty());
    EXPECT_EQ(r.records[1].links.size(), 1u);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("scene 0"), std::string::npos);
}

TEST(Episode, ConfigValidation) {
    EpisodeConfig c = base_config();
    c.tx.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    c = base_config();
    c.snapshot_stride = 0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Episode, DeterministicAcrossWorkerCounts) {
    EpisodeConfig c = base_config();
    c.rx = FixedRx{{{"a", {5, -5, 1.5}}, {"b", {-20, 5, 1.5}}, {"c", {40, -40, 2}}, {"d", {-5, 45, 3}}}};
    c.tx.push_back({"bs2", {-40, 40, 10}});
    EpisodeResult one = run_episode(c, block_scenario(), five_snapshots());
    c.worker_count = 4;
    EpisodeResult four = run_episode(c, block_scenario(), five_snapshots());
    zero_runtimes(one);
    zero_runtimes(four);
    four.config.worker_count = 1;
    EXPECT_EQ(one, four);
}

TEST(EpisodeFile, RoundTripFieldExact) {
    EpisodeConfig c = base_config();
    c.scenario_path = "somewhere.json";
    c.trace = FlowTraceSource{{make_flow("f", {"main"}, ActorKind::car)}, 5.0, 0.5, 42, 3.0, 1.0};
    c.rt.frequency = 60e9;
    c.rt.max_paths = 7;
    c.output_path = "out.jsonl";
    const EpisodeResult r = run_episode(c, block_scenario(), five_snapshots());
    std::stringstream ss;
    serialize_episode(r, ss);
    const EpisodeResult back = load_episode(ss);
    EXPECT_EQ(back, r);
    EXPECT_EQ(back.records[1].runtime_s, r.records[1].runtime_s);

    std::stringstream again;
    serialize_episode(back, again);
    std::stringstream first;
    serialize_episode(r, first);
    EXPECT_EQ(again.str(), first.str());
}

TEST(EpisodeFile, RoundTripAwkwardValues) {
    EpisodeResult r;
    r.config = base_config();
    r.config.rx = MobileRx{{ActorKind::pedestrian, ActorKind::bus}, 0.1 + 0.2};
    SceneRecord rec;
    rec.time = 1.0 / 3.0;
    rec.actors.push_back({"p \"quoted\"", ActorKind::pedestrian, {1e-300, -0.0, 0}, 5e-324, 1.7976931348623157e308});
    ChannelResult link;
    link.tx_id = "bs";
    link.rx_id = "p";
    rec.links.push_back(link);
    rec.runtime_s = 1.2345678901234567e-5;
    r.records.push_back(rec);
    r.totals = compute_totals(r.records);
    std::stringstream ss;
    serialize_episode(r, ss);
    const EpisodeResult back = load_episode(ss);
    EXPECT_EQ(back, r);
    EXPECT_TRUE(std::signbit(back.records[0].actors[0].position.y));
    EXPECT_TRUE(std::isinf(back.records[0].links[0].total_power_coherent_db));
}

TEST(EpisodeFile, EmptyRecords) {
    EpisodeResult r;
    r.config = base_config();
    std::stringstream ss;
    serialize_episode(r, ss);
    const EpisodeResult back = load_episode(ss);
    EXPECT_TRUE(back.records.empty());
    EXPECT_EQ(back, r);
}

TEST(EpisodeFile, VersionMismatch) {
    EpisodeResult r;
    r.config = base_config();
    std::stringstream ss;
    serialize_episode(r, ss);
    std::string text = ss.str();
    const auto pos = text.find("\"version\":1");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 11, "\"version\":2");
    std::istringstream in(text);
    try {
        load_episode(in);
        FAIL();
    } catch (const VersionError &e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find('2'), std::string::npos);
        EXPECT_NE(msg.find('1'), std::string::npos);
    }
}

TEST(EpisodeFile, TruncationReportsByteOffset) {
    const EpisodeResult r = run_episode(base_config(), block_scenario(), five_snapshots());
    std::stringstream ss;
    serialize_episode(r, ss);
    const std::string text = ss.str();
    const std::size_t second_line = text.find('\n') + 1;
    const std::size_t cut = second_line + (text.find('\n', second_line) - second_line) / 2;
    std::istringstream in(text.substr(0, cut));
    try {
        load_episode(in);
        FAIL();
    } catch (const ParseError &e) {
        ASSERT_TRUE(e.byte_offset());
        EXPECT_GE(*e.byte_offset(), second_line);
        EXPECT_LE(*e.byte_offset(), cut);
    }
    // whole lines missing
    const std::size_t third_line = text.find('\n', second_line) + 1;
    std::istringstream partial(text.substr(0, third_line));
    try {
        load_episode(partial);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.byte_offset(), third_line);
    }
    std::istringstream garbage("not json at all\n");
    EXPECT_THROW(load_episode(garbage), ParseError);
    std::istringstream empty("");
    EXPECT_THROW(load_episode(empty), ParseError);
}

TEST(EpisodeFile, SummaryCsv) {
    const EpisodeResult r = run_episode(base_config(), block_scenario(), five_snapshots());
    std::ostringstream os;
    write_summary_csv(r, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "scene_index,time,total_face_count,n_links,n_paths_total,runtime_s");
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    }
    EXPECT_EQ(n, 5u);
}

TEST(EpisodeConfigJson, RoundTripAndUnknownKeys) {
    EpisodeConfig c = base_config();
    c.scenario_path = "s.json";
    c.trace = FileTraceSource{"trace.csv"};
    c.variant = Variant::cube;
    c.out_of_bounds = OutOfBoundsPolicy::clamp;
    c.worker_count = 3;
    EXPECT_EQ(config_json::episode_config_from_json(config_json::to_json(c)), c);
    c.rx = MobileRx{{ActorKind::bus}, 2.0};
    c.trace = standard::trace_source();
    EXPECT_EQ(config_json::episode_config_from_json(config_json::to_json(c)), c);

    auto j = config_json::to_json(c);
    j["rt"]["max_reflection_orders"] = 2;
    try {
        config_json::episode_config_from_json(j);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("episode.rt"), std::string::npos) << e.what();
    }
    j = config_json::to_json(c);
    j["rx"] = {{"fixed", json_io::json::array()}, {"mobile", json_io::json::object()}};
    EXPECT_THROW(config_json::episode_config_from_json(j), ConfigError);
    j = config_json::to_json(c);
    j["snapshot_stride"] = 0;
    EXPECT_THROW(config_json::episode_config_from_json(j), ConfigError);
}

TEST(Summarize, Examples) {
    const std::vector<double> a{1, 2, 3};
    const Summary s = summarize(a);
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.min, 1.0);
    EXPECT_DOUBLE_EQ(s.max, 3.0);
    EXPECT_NEAR(s.std, std::sqrt(2.0 / 3.0), 1e-15);
    const std::vector<double> one{5};
    EXPECT_EQ(summarize(one).std, 0.0);
    EXPECT_EQ(summarize(one).mean, 5.0);
    const std::vector<double> flat{2, 2, 2, 2};
    EXPECT_EQ(summarize(flat).std, 0.0);
    EXPECT_THROW(summarize(std::vector<double>{}), DomainError);
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

namespace {

BenchMatrixConfig tiny_bench(const Trace &trace) {
    BenchMatrixConfig b;
    b.base = base_config();
    b.repetitions = 1;
    b.fixed_rx = {{"r0", {5, -5, 1.5}}};
    b.mobile_rx = MobileRx{{ActorKind::car}, 1.5};
    b.scenario = block_scenario();
    b.trace = trace;
    return b;
}

} // namespace

TEST(Bench, FourCellsWithSeriesPerScene) {
    const BenchReport r = run_matrix(tiny_bench(rows("0,car1,car,0,0,0,8\n1,car1,car,8,0,0,8\n")));
    ASSERT_EQ(r.cells.size(), 4u);
    EXPECT_EQ(r.cells[0].id, "fixed-detailed");
    EXPECT_EQ(r.cells[1].id, "fixed-cube");
    EXPECT_EQ(r.cells[2].id, "mobile-detailed");
    EXPECT_EQ(r.cells[3].id, "mobile-cube");
    for (const auto &c : r.cells) {
        EXPECT_EQ(c.runtime_median_s.size(), 2u);
        EXPECT_EQ(c.face_counts.size(), 2u);
    }
    EXPECT_TRUE(evaluate_checks(r).equal_links.passed);
}

TEST(Bench, DetailedFaceCountsDominate) {
    const BenchReport r = run_matrix(tiny_bench(five_snapshots()));
    const auto &d = r.cell(RxMode::fixed, Variant::detailed).face_counts;
    const auto &c = r.cell(RxMode::fixed, Variant::cube).face_counts;
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_GT(d[i], c[i]);
}

TEST(Bench, NoActorsEqualFaceCounts) {
    BenchMatrixConfig b = tiny_bench(Trace{{Snapshot{0.0, {}}, Snapshot{1.0, {}}}});
    // without actors the mobile cells resolve no receivers; the error names the cell
    try {
        run_matrix(b);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("mobile-detailed"), std::string::npos) << e.what();
    }
    BenchReport r;
    for (std::size_t i = 0; i < 4; ++i) {
        r.cells[i].face_counts = {30, 30};
        r.cells[i].link_counts = {1, 1};
        r.cells[i].runtime.mean = i % 2 == 0 ? 1.0 : 2.0; // detailed faster than cube
    }
    EXPECT_TRUE(evaluate_checks(r).detailed_vs_cube.passed);
    r.cells[1].face_counts = {20, 20};
    EXPECT_FALSE(evaluate_checks(r).detailed_vs_cube.passed);
}

TEST(Bench, ReportFieldsDeterministic) {
    const Trace t = five_snapshots();
    const BenchReport a = run_matrix(tiny_bench(t));
    const BenchReport b = run_matrix(tiny_bench(t));
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(a.cells[i].face_counts, b.cells[i].face_counts);
        EXPECT_EQ(a.cells[i].link_counts, b.cells[i].link_counts);
        EXPECT_EQ(a.cells[i].path_counts, b.cells[i].path_counts);
    }
}

TEST(Bench, CsvAndTable) {
    const BenchReport r = run_matrix(tiny_bench(five_snapshots()));
    std::ostringstream csv;
    write_cell_csv(r.cells[2], csv);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "cell,scene_index,face_count,runtime_s_median");
    EXPECT_NE(csv.str().find("mobile-detailed,4,"), std::string::npos);
    std::ostringstream table;
    write_table(r, evaluate_checks(r), table);
    for (const char *id : {"fixed-detailed", "fixed-cube", "mobile-detailed", "mobile-cube", "(a)", "(b)", "(c)"})
        EXPECT_NE(table.str().find(id), std::string::npos) << id;
}

TEST(Bench, ConfigJsonRoundTrip) {
    BenchMatrixConfig b = standard_bench_config();
    b.repetitions = 3;
    const BenchMatrixConfig back = bench_config_from_json(bench_config_to_json(b));
    EXPECT_EQ(back.repetitions, 3u);
    EXPECT_EQ(back.fixed_rx, b.fixed_rx);
    EXPECT_EQ(back.mobile_rx, b.mobile_rx);
    EXPECT_EQ(back.base.trace, b.base.trace);
    EXPECT_EQ(back.base.tx, b.base.tx);
    auto j = bench_config_to_json(b);
    j["repetitions"] = 0;
    EXPECT_THROW(bench_config_from_json(j), ConfigError);
}

TEST(Bench, StandardScenarioShape) {
    const Scenario sc = standard::scenario();
    EXPECT_EQ(sc.buildings.size(), 8u);
    for (const auto &b : sc.building_specs) {
        EXPECT_GE(b.height, 10.0);
        EXPECT_LE(b.height, 30.0);
    }
    const Trace t = load_trace(standard::trace_source(), sc);
    ASSERT_EQ(t.size(), standard::snapshot_count);
    for (const auto &s : t.snapshots) {
        std::size_t cars = 0;
        for (const auto &a : s.actors) cars += a.kind == ActorKind::car;
        EXPECT_EQ(cars, standard::car_count) << "t=" << s.time;
    }
    EXPECT_EQ(standard::fixed_receivers().size(), standard::car_count);
}
