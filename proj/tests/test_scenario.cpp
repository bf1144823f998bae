// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "errors.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "test_util.hpp"

using namespace uhn;

TEST_SUITE_BEGIN("scenario");

namespace {

ScenarioConfig small_cfg(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.region = SimRegion{5.0, 5.0};
    cfg.lambda_mbs_per_km2 = 4.0;
    cfg.lambda_ue_per_km2 = 10.0;
    cfg.rng_seed = seed;
    return cfg;
}

bool same_points(const std::vector<Point3>& a, const std::vector<Point3>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].x_km != b[i].x_km || a[i].y_km != b[i].y_km || a[i].z_m != b[i].z_m)
            return false;
    return true;
}

std::vector<Point3> n_mbs_points(int n) {
    std::vector<Point3> pts;
    Xoshiro256 rng(42);
    for (int i = 0; i < n; ++i)
        pts.push_back(Point3{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0), 30.0});
    return pts;
}

}  // namespace

TEST_CASE("config validation rejects bad inputs") {
    ScenarioConfig cfg = small_cfg(1);
    CHECK_NOTHROW(validate(cfg));

    ScenarioConfig bad = cfg;
    bad.region.width_km = 0.0;
    CHECK_THROWS_AS(generate_ppp_layout(bad), std::invalid_argument);

    bad = cfg;
    bad.lambda_mbs_per_km2 = -1.0;
    CHECK_THROWS_AS(generate_ppp_layout(bad), std::invalid_argument);

    bad = cfg;
    bad.destroy_fraction = 1.5;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("poisson counts match the intensity on average") {
    // Mean MBS count is lambda * area = 100; over 1000 seeds the sample mean
    // must land within 5%.
    ScenarioConfig cfg = small_cfg(0);
    cfg.lambda_ue_per_km2 = 0.2;  // keep the loop cheap
    double total = 0.0;
    const int n_seeds = 1000;
    for (int s = 0; s < n_seeds; ++s) {
        cfg.rng_seed = static_cast<std::uint64_t>(s) + 1;
        total += static_cast<double>(generate_ppp_layout(cfg).mbs.size());
    }
    const double mean = total / n_seeds;
    const double expected = cfg.lambda_mbs_per_km2 * cfg.region.area_km2();
    CHECK(mean == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("generation is deterministic in the seed") {
    const ScenarioConfig cfg = small_cfg(1234);
    const NetworkLayout a = generate_ppp_layout(cfg);
    const NetworkLayout b = generate_ppp_layout(cfg);
    CHECK(same_points(a.mbs, b.mbs));
    CHECK(same_points(a.ue, b.ue));

    ScenarioConfig cfg2 = cfg;
    cfg2.rng_seed = 1235;
    const NetworkLayout c = generate_ppp_layout(cfg2);
    CHECK_FALSE(same_points(a.mbs, c.mbs));
}

TEST_CASE("all nodes live inside the region at their configured heights") {
    const ScenarioConfig cfg = small_cfg(7);
    const NetworkLayout l = generate_ppp_layout(cfg);
    for (const auto& p : l.mbs) {
        CHECK(l.region.contains(p.x_km, p.y_km));
        CHECK(p.z_m == cfg.mbs_altitude_m);
    }
    for (const auto& p : l.ue) {
        CHECK(l.region.contains(p.x_km, p.y_km));
        CHECK(p.z_m == cfg.ue_height_m);
    }
}

TEST_CASE("UE min-distance constraints hold, including preplaced UABSs") {
    ScenarioConfig cfg = small_cfg(99);
    cfg.lambda_ue_per_km2 = 40.0;
    cfg.d_min_ue_mbs_m = 60.0;
    cfg.d_min_ue_uabs_m = 40.0;
    const std::vector<Point3> uabs = {{1.0, 1.0, 100.0}, {4.0, 4.0, 100.0}};
    const NetworkLayout l = generate_ppp_layout(cfg, uabs);
    REQUIRE(l.uabs.size() == 2);
    for (const auto& u : l.ue) {
        for (const auto& s : l.mbs)
            CHECK(horizontal_dist_m(u, s) >= cfg.d_min_ue_mbs_m);
        for (const auto& s : l.uabs)
            CHECK(horizontal_dist_m(u, s) >= cfg.d_min_ue_uabs_m);
    }
}

TEST_CASE("infeasible exclusion radii fail after bounded resampling") {
    ScenarioConfig cfg = small_cfg(5);
    cfg.region = SimRegion{0.1, 0.1};
    cfg.lambda_mbs_per_km2 = 2000.0;  // blanket the region
    cfg.lambda_ue_per_km2 = 100.0;
    cfg.d_min_ue_mbs_m = 200.0;       // no admissible UE position remains
    CHECK_THROWS_AS(generate_ppp_layout(cfg), std::runtime_error);
}

TEST_CASE("destroy_mbs removes floor(fraction*N) uniformly") {
    NetworkLayout l = test_util::make_layout(n_mbs_points(400), {}, {{5, 5, 3}});

    SUBCASE("fraction 0 is the identity") {
        const NetworkLayout out = destroy_mbs(l, 0.0, 1);
        CHECK(same_points(out.mbs, l.mbs));
    }
    SUBCASE("exact halving") {
        CHECK(destroy_mbs(l, 0.5, 1).mbs.size() == 200);
    }
    SUBCASE("97.5% leaves 10 of 400") {
        CHECK(destroy_mbs(l, 0.975, 1).mbs.size() == 10);
    }
    SUBCASE("fraction 1 removes everything") {
        CHECK(destroy_mbs(l, 1.0, 1).mbs.empty());
    }
    SUBCASE("UEs and UABSs are untouched") {
        const NetworkLayout out = destroy_mbs(l, 0.7, 3);
        CHECK(same_points(out.ue, l.ue));
        CHECK(out.uabs.size() == l.uabs.size());
    }
    SUBCASE("deterministic in the seed, varies across seeds") {
        const NetworkLayout a = destroy_mbs(l, 0.5, 11);
        const NetworkLayout b = destroy_mbs(l, 0.5, 11);
        const NetworkLayout c = destroy_mbs(l, 0.5, 12);
        CHECK(same_points(a.mbs, b.mbs));
        CHECK_FALSE(same_points(a.mbs, c.mbs));
    }
    SUBCASE("composition counts are exact") {
        // Two destructions in sequence: each stage removes floor(f*N) of the
        // stations alive at that point.
        for (int n : {7, 40, 401}) {
            NetworkLayout base = test_util::make_layout(n_mbs_points(n), {}, {{1, 1, 3}});
            const double f1 = 0.3, f2 = 0.6;
            const auto once = destroy_mbs(base, f1, 5);
            const auto twice = destroy_mbs(once, f2, 6);
            const std::size_t expect1 =
                static_cast<std::size_t>(n) -
                static_cast<std::size_t>(std::floor(f1 * n));
            CHECK(once.mbs.size() == expect1);
            const std::size_t expect2 =
                expect1 - static_cast<std::size_t>(std::floor(f2 * static_cast<double>(expect1)));
            CHECK(twice.mbs.size() == expect2);
        }
    }
    SUBCASE("survivors are a subset in original order") {
        const NetworkLayout out = destroy_mbs(l, 0.4, 17);
        std::size_t j = 0;
        for (const auto& p : l.mbs) {
            if (j < out.mbs.size() && p.x_km == out.mbs[j].x_km &&
                p.y_km == out.mbs[j].y_km)
                ++j;
        }
        CHECK(j == out.mbs.size());
    }
    SUBCASE("fraction out of range throws") {
        CHECK_THROWS_AS(destroy_mbs(l, -0.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(destroy_mbs(l, 1.1, 1), std::invalid_argument);
    }
}

TEST_CASE("hex grid: single UABS sits at the region center") {
    const auto pts = hex_grid_positions(1, SimRegion{10.0, 10.0}, 100.0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x_km == doctest::Approx(5.0));
    CHECK(pts[0].y_km == doctest::Approx(5.0));
    CHECK(pts[0].z_m == 100.0);
}

TEST_CASE("hex grid: four UABSs form two offset rows") {
    const auto pts = hex_grid_positions(4, SimRegion{10.0, 10.0}, 100.0);
    REQUIRE(pts.size() == 4);
    // pitch = sqrt(100/4) = 5, row spacing = 5*sqrt(3)/2, centered.
    const double v = 5.0 * std::sqrt(3.0) / 2.0;
    CHECK(pts[0].x_km == doctest::Approx(1.25));
    CHECK(pts[1].x_km == doctest::Approx(6.25));
    CHECK(pts[2].x_km == doctest::Approx(3.75));  // half-pitch offset
    CHECK(pts[3].x_km == doctest::Approx(8.75));
    CHECK(pts[0].y_km == doctest::Approx(5.0 - v / 2.0));
    CHECK(pts[2].y_km == doctest::Approx(5.0 + v / 2.0));
    CHECK(pts[1].x_km - pts[0].x_km == doctest::Approx(5.0));
}

TEST_CASE("hex grid: deterministic, inside the region, exact count") {
    const SimRegion regions[] = {{10.0, 10.0}, {5.0, 5.0}, {10.0, 5.0}};
    for (const auto& region : regions)
        for (int n : {1, 2, 3, 4, 7, 16, 25, 36, 60}) {
            const auto a = hex_grid_positions(n, region, 100.0);
            const auto b = hex_grid_positions(n, region, 100.0);
            REQUIRE(a.size() == static_cast<std::size_t>(n));
            CHECK(same_points(a, b));
            for (const auto& p : a) {
                CHECK(p.x_km >= -1e-9);
                CHECK(p.x_km <= region.width_km + 1e-9);
                CHECK(p.y_km >= -1e-9);
                CHECK(p.y_km <= region.height_km + 1e-9);
            }
        }
}

TEST_CASE("hex grid: rejects impossible placements") {
    CHECK_THROWS_AS(hex_grid_positions(0, SimRegion{10, 10}, 100.0),
                    std::invalid_argument);
    // Skinny region: the second row's half-pitch offset cannot fit.
    CHECK_THROWS_AS(hex_grid_positions(2, SimRegion{0.5, 100.0}, 100.0),
                    std::invalid_argument);
}

TEST_CASE("layout CSV round trip is exact") {
    ScenarioConfig cfg = small_cfg(21);
    cfg.lambda_ue_per_km2 = 5.0;
    NetworkLayout l = generate_ppp_layout(cfg, {{2.5, 2.5, 100.0}});
    const std::string path = test_util::temp_path("layout.csv");
    save_layout_csv(l, path);
    const NetworkLayout r = load_layout_csv(path, l.mbs_eff_power_dbm,
                                            l.uabs_eff_power_dbm);
    CHECK(same_points(l.mbs, r.mbs));
    CHECK(same_points(l.uabs, r.uabs));
    CHECK(same_points(l.ue, r.ue));
    std::filesystem::remove(path);
}

TEST_CASE("layout CSV rejects malformed input") {
    const std::string path = test_util::temp_path("bad_layout.csv");
    {
        std::ofstream f(path);
        f << "node_type,x_km,y_km,z_m\n";
        f << "satellite,1,2,3\n";
    }
    CHECK_THROWS_AS(load_layout_csv(path, 46, 30), parse_error);
    {
        std::ofstream f(path);
        f << "mbs,1,2,3\n";  // missing header
    }
    CHECK_THROWS_AS(load_layout_csv(path, 46, 30), parse_error);
    CHECK_THROWS_AS(load_layout_csv("/nonexistent/file.csv", 46, 30), io_error);
    std::filesystem::remove(path);
}

TEST_SUITE_END();
