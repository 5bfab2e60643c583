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

#include "mmrt/bvh.hpp"
#include "mmrt/fresnel.hpp"
#include "mmrt/bench.hpp"
#include "mmrt/raytracer.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace mmrt;

namespace {

MaterialTable pec_table() { return MaterialTable({Material{"pec", 1.0, 0.0, true}}); }

Mesh as_mesh(const std::vector<Face> &faces) { return Mesh{faces}; }

/// Ground quad at z = 0 spanning [-s, s]^2.
Mesh ground(double s, MaterialId mat) {
    Mesh m;
    detail::push_quad(m, {-s, -s, 0}, {s, -s, 0}, {s, s, 0}, {-s, s, 0}, mat);
    return m;
}

Mesh wall_x(double x, double half, double height, MaterialId mat) {
    Mesh m;
    detail::push_quad(m, {x, -half, 0}, {x, half, 0}, {x, half, height}, {x, -half, height}, mat);
    return m;
}

bool chains_match(const std::vector<Vec3> &a, const std::vector<Vec3> &b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (distance(a[i], b[i]) > tol) return false;
    return true;
}

} // namespace

TEST(Fresnel, PerfectConductor) {
    const Material pec{"m", 1.0, 0.0, true};
    for (double c : {0.0, 0.3, 1.0}) {
        EXPECT_EQ(fresnel_reflection(pec, c, 28e9, Polarization::te), std::complex<double>(-1.0));
        EXPECT_EQ(fresnel_reflection(pec, c, 28e9, Polarization::tm), std::complex<double>(1.0));
    }
}

TEST(Fresnel, LosslessNormalIncidence) {
    const Material glass{"g", 6.25, 0.0, false};
    EXPECT_NEAR(std::abs(fresnel_reflection(glass, 1.0, 28e9, Polarization::te)), 1.5 / 3.5, 1e-15);
    EXPECT_NEAR(std::abs(fresnel_reflection(glass, 1.0, 28e9, Polarization::tm)), 1.5 / 3.5, 1e-15);
}

TEST(Fresnel, MatchesSnellOracle) {
    const Material m{"c", 5.31, 0.48, false};
    const std::complex<double> eta{5.31, -0.48 / (2 * oracle::pi * 28e9 * oracle::eps0)};
    for (double theta = 0.0; theta < 1.55; theta += 0.05) {
        const double c = std::cos(theta);
        const auto te = fresnel_reflection(m, c, 28e9, Polarization::te);
        const auto tm = fresnel_reflection(m, c, 28e9, Polarization::tm);
        EXPECT_NEAR(std::abs(te - oracle::gamma_perpendicular(eta, theta)), 0.0, 1e-12) << theta;
        EXPECT_NEAR(std::abs(tm - oracle::gamma_parallel(eta, theta)), 0.0, 1e-12) << theta;
    }
}

TEST(Fresnel, GrazingAndBrewster) {
    const Material m{"d", 4.0, 0.0, false};
    EXPECT_NEAR(std::abs(fresnel_reflection(m, 0.0, 28e9, Polarization::te)), 1.0, 1e-15);
    const double brewster = std::atan(2.0);
    EXPECT_NEAR(std::abs(fresnel_reflection(m, std::cos(brewster), 28e9, Polarization::tm)), 0.0, 1e-12);
}

TEST(Fresnel, DomainErrors) {
    const Material m{"d", 4.0, 0.0, false};
    EXPECT_THROW(fresnel_reflection(m, 1.5, 28e9, Polarization::te), DomainError);
    EXPECT_THROW(fresnel_reflection(m, -0.1, 28e9, Polarization::tm), DomainError);
}

TEST(Fresnel, ItuGlassAt28GHz) {
    const MaterialTable t = default_material_table();
    const auto eta = oracle::power_law_eta(6.27, 0.0, 0.0043, 1.1925, 28e9);
    const double expected = std::abs(oracle::normal_incidence_gamma(eta));
    EXPECT_NEAR(std::abs(fresnel_reflection(t.at(materials::glass), 1.0, 28e9, Polarization::te)), expected, 1e-12);
}

TEST(Fresnel, LosslessGlassNormalIncidence) {
    const Material glass{"glass", 6.27, 0.0, false};
    const double expected = (std::sqrt(6.27) - 1.0) / (std::sqrt(6.27) + 1.0);
    EXPECT_NEAR(std::abs(fresnel_reflection(glass, 1.0, 28e9, Polarization::te)), expected, 1e-12);
    EXPECT_NEAR(std::abs(fresnel_reflection(glass, 1.0, 28e9, Polarization::tm)), expected, 1e-12);
    EXPECT_NEAR(expected, 0.429223, 1e-6);
}

TEST(Los, FriisAndDelay) {
    const PreparedScene scene({}, pec_table());
    RTConfig cfg;
    cfg.frequency = 60e9;
    const auto p = los_path({0, 0, 1}, {1, 0, 1}, scene, cfg);
    ASSERT_TRUE(p);
    EXPECT_NEAR(p->gain_db, oracle::friis_db(1.0, 60e9), 1e-9);
    EXPECT_NEAR(p->gain_db, -68.0, 0.05);
    const auto far = los_path({0, 0, 1}, {0, 300, 1}, scene, cfg);
    EXPECT_NEAR(far->delay, 300.0 / oracle::c0, 1e-6 * 300.0 / oracle::c0);
    EXPECT_EQ(far->reflection_count, 0);
    EXPECT_NEAR(far->aod.azimuth, constants::pi / 2, 1e-12);
    EXPECT_NEAR(far->aoa.azimuth, -constants::pi / 2, 1e-12);
    const double lambda = oracle::c0 / 60e9;
    const std::complex<double> expected = lambda / (4 * oracle::pi * 300.0) * std::polar(1.0, -2 * oracle::pi * 300.0 / lambda);
    EXPECT_NEAR(std::abs(far->gain - expected), 0.0, 1e-9 * std::abs(expected));
    EXPECT_THROW(los_path({1, 1, 1}, {1, 1, 1}, scene, cfg), DomainError);
}

TEST(Los, Blocked) {
    const PreparedScene scene({wall_x(5, 10, 10, 0)}, pec_table());
    EXPECT_FALSE(los_path({0, 0, 1}, {10, 0, 1}, scene, RTConfig{}));
    EXPECT_TRUE(los_path({0, 0, 1}, {4, 0, 1}, scene, RTConfig{}));
}

TEST(ImageMethod, GroundReflectionTwoRay) {
    const MaterialTable mats = default_material_table();
    const PreparedScene scene({ground(100, materials::ground)}, mats);
    RTConfig cfg;
    cfg.max_reflection_order = 1;
    const Vec3 tx{0, 0, 10}, rx{40, 0, 2};
    const auto paths = image_method_paths(tx, rx, scene, cfg);
    ASSERT_EQ(paths.size(), 1u);
    const PropagationPath &p = paths[0];
    // reflection point where the line to the image source (0, 0, -10) meets z = 0
    EXPECT_NEAR(p.vertices[1].x, 40.0 * 10.0 / 12.0, 1e-9);
    EXPECT_NEAR(p.vertices[1].z, 0.0, 1e-12);
    const double L = std::hypot(40.0, 12.0);
    EXPECT_NEAR(p.length, L, 1e-9);
    const Material &g = mats.at(materials::ground);
    const std::complex<double> eta{g.rel_permittivity, -g.conductivity / (2 * oracle::pi * 28e9 * oracle::eps0)};
    const double theta = std::atan2(40.0, 12.0);
    const double lambda = oracle::c0 / 28e9;
    // vertical polarization over a horizontal plane is the in-plane component
    EXPECT_NEAR(std::abs(p.gain), lambda / (4 * oracle::pi * L) * std::abs(oracle::gamma_parallel(eta, theta)), 1e-12);
    EXPECT_EQ(p.interactions[0].material, materials::ground);
}

TEST(ImageMethod, VerticalWallIsPerpendicular) {
    const MaterialTable mats = default_material_table();
    const PreparedScene scene({wall_x(10, 50, 40, materials::concrete)}, mats);
    RTConfig cfg;
    cfg.max_reflection_order = 1;
    const Vec3 tx{0, -5, 5}, rx{2, 7, 5};
    const auto paths = image_method_paths(tx, rx, scene, cfg);
    ASSERT_EQ(paths.size(), 1u);
    const Material &c = mats.at(materials::concrete);
    const std::complex<double> eta{c.rel_permittivity, -c.conductivity / (2 * oracle::pi * 28e9 * oracle::eps0)};
    const Vec3 d = paths[0].vertices[1] - tx;
    const double theta = std::acos(std::abs(d.x) / norm(d));
    const double L = paths[0].length;
    EXPECT_NEAR(L, distance(Vec3{20, -5, 5}, rx), 1e-9);
    const double lambda = oracle::c0 / 28e9;
    EXPECT_NEAR(std::abs(paths[0].gain),
                lambda / (4 * oracle::pi * L) * std::abs(oracle::gamma_perpendicular(eta, theta)), 1e-12);
}

TEST(ImageMethod, PecDoubleBounceUnitMagnitude) {
    // corner reflector: wall x = 10 and ground
    const PreparedScene scene({ground(100, 0), wall_x(10, 50, 30, 0)}, pec_table());
    RTConfig cfg;
    const Vec3 tx{0, 0, 8}, rx{3, 4, 2};
    const auto paths = image_method_paths(tx, rx, scene, cfg);
    ASSERT_EQ(paths.size(), 3u); // ground, wall, wall-ground; ground-wall would hit the wall below z = 0
    const double lambda = cfg.wavelength();
    for (const auto &p : paths) EXPECT_NEAR(std::abs(p.gain), lambda / (4 * oracle::pi * p.length), 1e-15);
}

TEST(ImageMethod, OrderZeroOnlyLos) {
    const PreparedScene scene({ground(100, 0)}, pec_table());
    RTConfig cfg;
    cfg.max_reflection_order = 0;
    EXPECT_TRUE(image_method_paths({0, 0, 5}, {10, 0, 5}, scene, cfg).empty());
    const ChannelResult r = trace_channel(scene, {"t", {0, 0, 5}}, {"r", {10, 0, 5}}, cfg);
    ASSERT_EQ(r.paths.size(), 1u);
    EXPECT_FALSE(r.los_blocked);
    cfg.max_reflection_order = 4;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.max_reflection_order = -1;
    EXPECT_THROW(trace_channel(scene, {"t", {0, 0, 5}}, {"r", {10, 0, 5}}, cfg), ConfigError);
}

TEST(ImageMethod, ReflectorOutsidePolygonRejected) {
    // the specular point on the plane z = 0 falls outside the small patch
    Mesh patch;
    detail::push_quad(patch, {-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}, 0);
    const PreparedScene scene({patch}, pec_table());
    RTConfig cfg;
    EXPECT_TRUE(image_method_paths({5, 0, 3}, {12, 0, 3}, scene, cfg).empty());
    EXPECT_EQ(image_method_paths({-2, 0, 3}, {2, 0, 3}, scene, cfg).size(), 1u);
}

TEST(ImageMethod, MergedReflectorsDoNotDuplicate) {
    // a ground split into many triangles behaves like one plane
    Mesh tiles;
    for (int i = -5; i < 5; ++i)
        for (int j = -5; j < 5; ++j)
            detail::push_quad(tiles, {i * 10.0, j * 10.0, 0}, {i * 10.0 + 10, j * 10.0, 0},
                              {i * 10.0 + 10, j * 10.0 + 10, 0}, {i * 10.0, j * 10.0 + 10, 0}, 0);
    const PreparedScene scene({tiles}, pec_table());
    EXPECT_EQ(scene.reflectors().size(), 1u);
    // reflection point exactly on a tile corner
    const auto paths = image_method_paths({-10, -10, 5}, {10, 10, 5}, scene, RTConfig{});
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_NEAR(paths[0].vertices[1].x, 0.0, 1e-12);
}

TEST(Reflectors, BoxFacesMergeToSix) {
    const PreparedScene scene({make_box({0, 0, 0}, {2, 3, 4}, 0)}, pec_table());
    ASSERT_EQ(scene.reflectors().size(), 6u);
    for (const Reflector &r : scene.reflectors()) {
        EXPECT_EQ(r.polygon.size(), 4u);
        EXPECT_EQ(r.faces.size(), 2u);
    }
}

TEST(Reflectors, DifferentMaterialsStaySeparate) {
    Mesh m;
    detail::push_quad(m, {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, 0);
    m.faces[1].material_id = 1;
    const PreparedScene scene({m}, default_material_table());
    EXPECT_EQ(scene.reflectors().size(), 2u);
}

TEST(Bvh, NearestHitMatchesBruteForce) {
    std::mt19937_64 rng(3);
    const auto faces = oracle::random_scene(rng, 300, true);
    const AccelIndex index(faces);
    std::size_t hits = 0;
    for (int i = 0; i < 3000; ++i) {
        const Vec3 o = oracle::random_point(rng, -15, 15);
        const Vec3 d = oracle::random_point(rng, -1, 1);
        const auto got = index.intersect(o, d);
        const auto want = oracle::nearest_hit(faces, o, d);
        ASSERT_EQ(got.has_value(), want.has_value()) << i;
        if (!got) continue;
        ++hits;
        EXPECT_NEAR(got->t, want->second, 1e-9 * std::max(1.0, want->second));
        if (got->face != want->first) {
            EXPECT_NEAR(got->t, want->second, 1e-12) << "different face, same distance";
        }
    }
    EXPECT_GT(hits, 1000u);
}

TEST(Bvh, OcclusionWindow) {
    const AccelIndex index(wall_x(5, 10, 10, 0).faces);
    EXPECT_TRUE(index.occluded({0, 0, 1}, {1, 0, 0}, 0.0, 10.0));
    EXPECT_FALSE(index.occluded({0, 0, 1}, {1, 0, 0}, 0.0, 4.9));
    EXPECT_FALSE(index.occluded({0, 0, 1}, {1, 0, 0}, 5.1, 10.0));
    EXPECT_FALSE(index.occluded({0, 0, 1}, {-1, 0, 0}, 0.0, 100.0));
    const AccelIndex empty(std::vector<Face>{});
    EXPECT_FALSE(empty.intersect({0, 0, 0}, {1, 0, 0}));
}

TEST(Bvh, LeavesPartitionFaces) {
    std::mt19937_64 rng(5);
    const auto faces = oracle::random_scene(rng, 200, false);
    const AccelIndex index(faces);
    std::vector<int> seen(faces.size(), 0);
    for (const auto &leaf : index.leaves()) {
        EXPECT_LE(leaf.size(), 4u);
        for (std::size_t f : leaf) ++seen[f];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Bvh, EdgeHitAndTies) {
    Mesh m;
    detail::push_quad(m, {0, -1, -1}, {0, 1, -1}, {0, 1, 1}, {0, -1, 1}, 0);
    const AccelIndex index(m.faces);
    // through the shared diagonal: both triangles hit at the same t, lower index wins
    const auto hit = index.intersect({-5, 0, 0}, {1, 0, 0});
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->face, 0u);
    EXPECT_DOUBLE_EQ(hit->t, 5.0);
}

namespace {

struct RandomCase {
    std::vector<Face> faces;
    Vec3 tx, rx;
};

RandomCase random_case(std::mt19937_64 &rng, std::size_t max_faces) {
    std::uniform_int_distribution<std::size_t> nf(2, max_faces - 2);
    RandomCase c;
    c.faces = oracle::random_scene(rng, nf(rng), true, 3);
    c.tx = oracle::random_point(rng, -9, 9);
    c.rx = oracle::random_point(rng, -9, 9);
    return c;
}

} // namespace

TEST(ImageMethod, MatchesBruteForceEnumeration) {
    std::mt19937_64 rng(2024);
    const MaterialTable mats = default_material_table();
    std::size_t total = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const RandomCase c = random_case(rng, 12);
        const PreparedScene scene({as_mesh(c.faces)}, mats);
        RTConfig cfg;
        cfg.max_reflection_order = 2;
        for (bool pruning : {true, false}) {
            auto got = image_method_paths(c.tx, c.rx, scene, cfg, {pruning});
            const auto want = oracle::brute_force_paths(c.faces, c.tx, c.rx, 2);
            ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
            for (const auto &w : want) {
                const bool found = std::any_of(got.begin(), got.end(),
                                               [&](const auto &g) { return chains_match(g.vertices, w.vertices, 1e-6); });
                EXPECT_TRUE(found) << "trial " << trial;
            }
        }
        total += oracle::brute_force_paths(c.faces, c.tx, c.rx, 2).size();
    }
    EXPECT_GT(total, 60u);
}

TEST(ImageMethod, CanyonMatchesBruteForce) {
    std::mt19937_64 rng(555);
    const MaterialTable mats = default_material_table();
    std::size_t second = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const auto faces = oracle::random_canyon(rng, 1 + trial % 5, 3);
        const Vec3 tx{-6.0 + 0.4 * trial, 3.0, 2.0 + 0.2 * trial}, rx{5.0, -7.0 + 0.3 * trial, 1.5};
        const PreparedScene scene({as_mesh(faces)}, mats);
        RTConfig cfg;
        cfg.max_reflection_order = 2;
        const auto got = image_method_paths(tx, rx, scene, cfg);
        const auto want = oracle::brute_force_paths(faces, tx, rx, 2);
        ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
        for (const auto &w : want) {
            EXPECT_TRUE(std::any_of(got.begin(), got.end(),
                                    [&](const auto &g) { return chains_match(g.vertices, w.vertices, 1e-6); }))
                << "trial " << trial;
            second += w.vertices.size() == 4;
        }
    }
    EXPECT_GT(second, 20u);
}

TEST(ImageMethod, OrderThreeMatchesBruteForce) {
    std::mt19937_64 rng(77);
    const MaterialTable mats = default_material_table();
    for (int trial = 0; trial < 10; ++trial) {
        const RandomCase c = random_case(rng, 8);
        const PreparedScene scene({as_mesh(c.faces)}, mats);
        RTConfig cfg;
        cfg.max_reflection_order = 3;
        EXPECT_EQ(image_method_paths(c.tx, c.rx, scene, cfg).size(),
                  oracle::brute_force_paths(c.faces, c.tx, c.rx, 3).size())
            << trial;
    }
}

TEST(ImageMethod, SpecularLawAndReciprocity) {
    std::mt19937_64 rng(99);
    const MaterialTable mats = default_material_table();
    std::size_t checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const RandomCase c = random_case(rng, 12);
        const PreparedScene scene({as_mesh(c.faces)}, mats);
        RTConfig cfg;
        const auto fwd = image_method_paths(c.tx, c.rx, scene, cfg);
        const auto rev = image_method_paths(c.rx, c.tx, scene, cfg);
        ASSERT_EQ(fwd.size(), rev.size());
        for (const auto &p : fwd) {
            for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
                const Vec3 n = scene.faces()[p.interactions[i - 1].face].normal();
                const Vec3 in = normalized(p.vertices[i - 1] - p.vertices[i]);
                const Vec3 out = normalized(p.vertices[i + 1] - p.vertices[i]);
                EXPECT_NEAR(std::acos(std::clamp(std::abs(dot(in, n)), 0.0, 1.0)),
                            std::acos(std::clamp(std::abs(dot(out, n)), 0.0, 1.0)), 1e-9);
                EXPECT_NEAR(dot(cross(in, out), n), 0.0, 1e-9);
                ++checked;
            }
            const bool matched = std::any_of(rev.begin(), rev.end(), [&](const auto &q) {
                return std::abs(q.length - p.length) <= 1e-9 * p.length &&
                       std::abs(std::abs(q.gain) - std::abs(p.gain)) <= 1e-9 * std::abs(p.gain);
            });
            EXPECT_TRUE(matched);
        }
    }
    EXPECT_GT(checked, 50u);
}

TEST(TraceChannel, SortedTruncatedAndPowers) {
    const PreparedScene scene({ground(100, 0), wall_x(10, 50, 30, 0), wall_x(-10, 50, 30, 0)}, pec_table());
    RTConfig cfg;
    const ChannelResult all = trace_channel(scene, {"t", {0, 0, 8}}, {"r", {3, 4, 2}}, cfg);
    ASSERT_GE(all.paths.size(), 5u);
    for (std::size_t i = 1; i < all.paths.size(); ++i)
        EXPECT_GE(std::abs(all.paths[i - 1].gain), std::abs(all.paths[i].gain));
    double p = 0.0;
    std::complex<double> sum = 0.0;
    for (const auto &x : all.paths) {
        p += std::norm(x.gain);
        sum += x.gain;
    }
    EXPECT_NEAR(all.total_power_noncoherent_db, 10 * std::log10(p), 1e-12);
    EXPECT_NEAR(all.total_power_coherent_db, 20 * std::log10(std::abs(sum)), 1e-12);
    cfg.max_paths = 3;
    const ChannelResult few = trace_channel(scene, {"t", {0, 0, 8}}, {"r", {3, 4, 2}}, cfg);
    ASSERT_EQ(few.paths.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(few.paths[i], all.paths[i]);
    EXPECT_EQ(few.tx_id, "t");
    EXPECT_EQ(few.rx_id, "r");
}

TEST(TraceChannel, NoPathsGivesMinusInfinity) {
    // receiver enclosed in a box
    const PreparedScene scene({make_box({-1, -1, 0.5}, {1, 1, 3}, 0)}, pec_table());
    const ChannelResult r = trace_channel(scene, {"t", {20, 0, 5}}, {"r", {0, 0, 1}}, RTConfig{});
    EXPECT_TRUE(r.paths.empty());
    EXPECT_TRUE(r.los_blocked);
    EXPECT_TRUE(std::isinf(r.total_power_noncoherent_db) && r.total_power_noncoherent_db < 0);
}

TEST(PathGain, RejectsMismatchedSites) {
    const std::vector<Vec3> v{{0, 0, 1}, {1, 0, 1}};
    const std::vector<ReflectionSite> s(1);
    EXPECT_THROW(path_gain(v, s, RTConfig{}), DomainError);
}

TEST(ImageTree, PruningKeepsEveryPathOnTheStandardScene) {
    auto scenario = std::make_shared<const Scenario>(standard::scenario());
    const Trace trace = load_trace(standard::trace_source(), *scenario);
    for (std::size_t si : {std::size_t{0}, trace.size() - 1}) {
        const Scene scene = compose_scene(scenario, trace.snapshots[si], Variant::detailed, standard::transmitters(),
                                          standard::mobile_receivers());
        const PreparedScene prepared(scene);
        const RTConfig cfg;
        const ImageTree pruned(scene.tx[0].position, prepared, cfg.max_reflection_order);
        const ImageTree full(scene.tx[0].position, prepared, cfg.max_reflection_order, {false});
        EXPECT_LT(pruned.nodes().size(), full.nodes().size() / 4);
        for (const Antenna &rx : scene.rx) {
            const auto a = image_method_paths(pruned, rx.position, prepared, cfg);
            const auto b = image_method_paths(full, rx.position, prepared, cfg);
            ASSERT_EQ(a.size(), b.size()) << rx.id;
            for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << rx.id;
        }
    }
}

TEST(ImageTree, ChecksTransmitterAndOrder) {
    const PreparedScene scene({wall_x(10, 50, 40, materials::concrete)}, default_material_table());
    const RTConfig cfg;
    const ImageTree tree({0, 0, 5}, scene, cfg.max_reflection_order);
    const Antenna tx{"t", {0, 0, 5}}, other{"o", {1, 0, 5}}, rx{"r", {3, 3, 2}};
    EXPECT_NO_THROW(trace_channel(scene, tree, tx, rx, cfg));
    EXPECT_THROW(trace_channel(scene, tree, other, rx, cfg), DomainError);
    RTConfig third = cfg;
    third.max_reflection_order = 3;
    EXPECT_THROW(trace_channel(scene, tree, tx, rx, third), DomainError);
    EXPECT_THROW(ImageTree({0, 0, 5}, scene, 99), DomainError);
    EXPECT_EQ(trace_channel(scene, tree, tx, rx, cfg), trace_channel(scene, tx, rx, cfg));
}
