// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "hexopt.hpp"
#include "test_util.hpp"

using namespace uhn;

TEST_SUITE_BEGIN("hexopt");

namespace {

NetworkLayout search_layout(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.region = SimRegion{4.0, 4.0};
    cfg.lambda_mbs_per_km2 = 2.0;
    cfg.lambda_ue_per_km2 = 15.0;
    cfg.rng_seed = seed;
    NetworkLayout l = generate_ppp_layout(cfg);
    return with_uabs(l, hex_grid_positions(4, cfg.region, 100.0));
}

}  // namespace

TEST_CASE("grid validation") {
    IcicGrid g = default_grid(IcicMode::feicic);
    CHECK_NOTHROW(validate(g));
    CHECK(g.size() == 600);
    CHECK(default_grid(IcicMode::eicic).size() == 120);
    CHECK(default_grid(IcicMode::none).size() == 6);

    g.alpha.clear();
    CHECK_THROWS_AS(validate(g), std::invalid_argument);
}

TEST_CASE("singleton grid returns that point, bit-equal to a direct call") {
    const NetworkLayout l = search_layout(3);
    const IcicGrid g{{9.0}, {0.5}, {25.0}, {-10.0}};
    const std::uint64_t seed = 1234;
    const GridSearchResult r =
        grid_search_icic(l, test_util::splm_model(), g, 0.5, seed);
    CHECK(r.best.tau_db == 9.0);
    CHECK(r.best.alpha == 0.5);
    CHECK(r.surface.size() == 1);

    const SeReport direct = evaluate_5pse(l, test_util::splm_model(),
                                          IcicParams{9.0, 0.5, 25.0, -10.0, 0.5}, seed);
    CHECK(r.best_report.fifth_percentile_se == direct.fifth_percentile_se);
    CHECK(r.best_report.per_ue_se == direct.per_ue_se);
}

TEST_CASE("full search equals an independent nested-loop enumeration") {
    const NetworkLayout l = search_layout(4);
    const IcicGrid g{{0.0, 9.0}, {0.0, 1.0}, {20.0, 40.0}, {-20.0, -5.0}};
    const std::uint64_t seed = 77;
    const PathLossModel model = test_util::splm_model();
    const GridSearchResult r = grid_search_icic(l, model, g, 0.5, seed);
    CHECK(r.surface.size() == 16);

    // Oracle: plain nested loops over the same axes, first strict max wins.
    double best = -1.0;
    IcicParams best_params;
    std::size_t idx = 0;
    for (double tau : g.tau_db)
        for (double alpha : g.alpha)
            for (double rho : g.rho_db)
                for (double rho_prime : g.rho_prime_db) {
                    const IcicParams p{tau, alpha, rho, rho_prime, 0.5};
                    const double v = evaluate_5pse(l, model, p, seed).fifth_percentile_se;
                    CHECK(r.surface[idx].fifth_pse == v);  // same point, same value
                    ++idx;
                    if (v > best) {
                        best = v;
                        best_params = p;
                    }
                }
    CHECK(r.best_report.fifth_percentile_se == best);
    CHECK(r.best.tau_db == best_params.tau_db);
    CHECK(r.best.alpha == best_params.alpha);
    CHECK(r.best.rho_db == best_params.rho_db);
    CHECK(r.best.rho_prime_db == best_params.rho_prime_db);
}

TEST_CASE("returned maximum dominates every surface point") {
    const NetworkLayout l = search_layout(5);
    const IcicGrid g{{0.0, 6.0, 12.0}, {0.0, 0.5, 1.0}, {20.0, 30.0}, {-15.0, -5.0}};
    const GridSearchResult r = grid_search_icic(l, test_util::splm_model(), g, 0.5, 9);
    for (const auto& p : r.surface)
        CHECK(r.best_report.fifth_percentile_se >= p.fifth_pse);
}

TEST_CASE("ties keep the first point in lexicographic order") {
    // Single MBS, no UABSs, rho = +inf: every UE is a USF-MUE so alpha never
    // enters the score. All alphas tie and the first one must be returned.
    const auto l = test_util::make_layout({{0.5, 0.5, 30.0}}, {},
                                          {{1.0, 1.0, 3.0}, {2.0, 2.0, 3.0}},
                                          46.0, 30.0, SimRegion{4.0, 4.0});
    const double inf = std::numeric_limits<double>::infinity();
    const IcicGrid g{{0.0}, {0.0, 0.25, 1.0}, {inf}, {-5.0}};
    const GridSearchResult r = grid_search_icic(l, test_util::splm_model(), g, 0.5, 2);
    CHECK(r.surface.size() == 3);
    CHECK(r.surface[0].fifth_pse == r.surface[2].fifth_pse);
    CHECK(r.best.alpha == 0.0);
}

TEST_CASE("deterministic across repeat runs") {
    const NetworkLayout l = search_layout(6);
    const IcicGrid g = grid_at_tau(default_grid(IcicMode::eicic), 6.0);
    const auto a = grid_search_icic(l, test_util::splm_model(), g, 0.5, 10);
    const auto b = grid_search_icic(l, test_util::splm_model(), g, 0.5, 10);
    REQUIRE(a.surface.size() == b.surface.size());
    for (std::size_t i = 0; i < a.surface.size(); ++i)
        CHECK(a.surface[i].fifth_pse == b.surface[i].fifth_pse);
    CHECK(a.best_report.fifth_percentile_se == b.best_report.fifth_percentile_se);
}

TEST_CASE("surface CSV export") {
    const NetworkLayout l = search_layout(7);
    const IcicGrid g{{0.0, 3.0}, {0.5}, {25.0}, {-10.0}};
    const GridSearchResult r = grid_search_icic(l, test_util::splm_model(), g, 0.5, 1);
    const std::string path = test_util::temp_path("surface.csv");
    save_surface_csv(r.surface, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "tau_db,alpha,rho_db,rho_prime_db,fifth_pse_bpshz");
    int rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows == 2);
    std::filesystem::remove(path);
}

TEST_CASE("empty grid and empty layout are rejected") {
    const NetworkLayout l = search_layout(8);
    IcicGrid g;
    CHECK_THROWS_AS(grid_search_icic(l, test_util::splm_model(), g, 0.5, 1),
                    std::invalid_argument);
    const auto no_ue = test_util::make_layout({{1.0, 1.0, 30.0}}, {}, {});
    CHECK_THROWS_AS(grid_search_icic(no_ue, test_util::splm_model(),
                                     default_grid(IcicMode::none), 0.5, 1),
                    std::invalid_argument);
}

TEST_SUITE_END();
