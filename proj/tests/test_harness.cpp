// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "harness.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace uhn;

TEST_SUITE_BEGIN("harness");

namespace {

/// Small fast matrix for unit-level checks.
ExperimentSpec small_spec() {
    ExperimentSpec s;
    s.scenario.region = SimRegion{3.0, 3.0};
    s.scenario.lambda_mbs_per_km2 = 2.0;
    s.scenario.lambda_ue_per_km2 = 20.0;
    s.scenario.n_uabs = 4;
    s.scenario.destroy_fraction = 0.5;
    s.model = test_util::splm_model();
    s.deployment = Deployment::hex;
    s.icic_mode = IcicMode::feicic;
    s.n_uabs_list = {4};
    s.destroy_fractions = {0.5};
    s.n_drops = 3;
    s.grid = IcicGrid{{0.0, 6.0}, {0.0, 1.0}, {25.0}, {-10.0}};
    s.master_seed = 17;
    return s;
}

bool same_nontiming(const AggregateResult& a, const AggregateResult& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const auto& ca = a.cells[i];
        const auto& cb = b.cells[i];
        if (ca.mean_5pse != cb.mean_5pse || ca.std_5pse != cb.std_5pse) return false;
        if (ca.drops.size() != cb.drops.size()) return false;
        for (std::size_t d = 0; d < ca.drops.size(); ++d) {
            if (ca.drops[d].fifth_pse != cb.drops[d].fifth_pse) return false;
            if (ca.drops[d].best_params.tau_db != cb.drops[d].best_params.tau_db)
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("spec validation") {
    ExperimentSpec s = small_spec();
    CHECK_NOTHROW(validate(s));
    s.n_drops = 0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = small_spec();
    s.n_uabs_list.clear();
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = small_spec();
    s.destroy_fractions = {1.5};
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
}

TEST_CASE("presets") {
    const ExperimentSpec desk = desk_preset();
    CHECK(desk.scenario.region.width_km == 5.0);
    CHECK(desk.n_drops == 20);
    const ExperimentSpec paper = paper_preset();
    CHECK(paper.scenario.region.width_km == 10.0);
    CHECK(paper.n_drops == 100);
    CHECK(paper.n_uabs_list.back() == 60);
}

TEST_CASE("per-drop seeds are distinct and reproducible") {
    const DropSeeds a = drop_seeds(1, 0);
    const DropSeeds b = drop_seeds(1, 1);
    const DropSeeds c = drop_seeds(1, 0);
    CHECK(a.layout == c.layout);
    CHECK(a.fading == c.fading);
    CHECK(a.layout != b.layout);
    CHECK(a.layout != a.destroy);
    CHECK(a.destroy != a.fading);
    CHECK(a.fading != a.ga);
}

TEST_CASE("single-drop singleton-grid run equals a direct grid search") {
    ExperimentSpec s = small_spec();
    s.n_drops = 1;
    s.grid = IcicGrid{{6.0}, {0.5}, {25.0}, {-10.0}};
    const AggregateResult agg = run_experiment(s);
    REQUIRE(agg.cells.size() == 1);
    REQUIRE(agg.cells[0].drops.size() == 1);

    const DropSeeds seeds = drop_seeds(s.master_seed, 0);
    ScenarioConfig cfg = s.scenario;
    cfg.rng_seed = seeds.layout;
    NetworkLayout l = destroy_mbs(generate_ppp_layout(cfg), 0.5, seeds.destroy);
    l = with_uabs(l, hex_grid_positions(4, cfg.region, cfg.uabs_altitude_m));
    const GridSearchResult direct =
        grid_search_icic(l, s.model, s.grid, s.beta, seeds.fading);
    CHECK(agg.cells[0].drops[0].fifth_pse == direct.best_report.fifth_percentile_se);
    CHECK(agg.cells[0].mean_5pse == direct.best_report.fifth_percentile_se);
}

TEST_CASE("experiment matrix is deterministic and cell-shaped") {
    ExperimentSpec s = small_spec();
    s.n_uabs_list = {2, 4};
    s.destroy_fractions = {0.5, 0.975};
    const AggregateResult a = run_experiment(s);
    const AggregateResult b = run_experiment(s);
    CHECK(a.cells.size() == 4);
    CHECK(same_nontiming(a, b));
    for (const auto& cell : a.cells) {
        CHECK(cell.drops.size() == static_cast<std::size_t>(s.n_drops));
        for (const auto& d : cell.drops) CHECK(d.elapsed_s > 0.0);
    }
}

TEST_CASE("parallel drops give the same results as sequential") {
    ExperimentSpec s = small_spec();
    const AggregateResult seq = run_experiment(s);
    s.jobs = 3;
    const AggregateResult par = run_experiment(s);
    CHECK(same_nontiming(seq, par));
}

TEST_CASE("hex and GA runs see matched drops") {
    // The base layout of drop d must not depend on the deployment, so that
    // optimizer comparisons are paired.
    ExperimentSpec s = small_spec();
    const DropSeeds seeds = drop_seeds(s.master_seed, 2);
    ScenarioConfig cfg = s.scenario;
    cfg.rng_seed = seeds.layout;
    const NetworkLayout l1 = generate_ppp_layout(cfg);
    const NetworkLayout l2 = generate_ppp_layout(cfg);
    CHECK(l1.mbs.size() == l2.mbs.size());
    CHECK(l1.ue.size() == l2.ue.size());
}

TEST_CASE("matrix iteration order does not affect cell results") {
    ExperimentSpec s = small_spec();
    s.n_uabs_list = {2, 4};
    const AggregateResult fwd = run_experiment(s);
    s.n_uabs_list = {4, 2};
    const AggregateResult rev = run_experiment(s);
    REQUIRE(fwd.cells.size() == 2);
    REQUIRE(rev.cells.size() == 2);
    CHECK(fwd.cells[0].mean_5pse == rev.cells[1].mean_5pse);
    CHECK(fwd.cells[1].mean_5pse == rev.cells[0].mean_5pse);
}

TEST_CASE("a failing drop reports its index") {
    ExperimentSpec s = small_spec();
    s.n_uabs_list = {0};
    s.destroy_fractions = {1.0};  // no stations at all -> evaluation error
    try {
        run_experiment(s);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("drop") != std::string::npos);
    }
}

TEST_CASE("GA deployment path runs end to end") {
    ExperimentSpec s = small_spec();
    s.deployment = Deployment::ga;
    s.icic_mode = IcicMode::eicic;
    s.n_drops = 2;
    s.ga.population_size = 8;
    s.ga.generations = 4;
    const AggregateResult agg = run_experiment(s);
    REQUIRE(agg.cells.size() == 1);
    CHECK(agg.cells[0].drops.size() == 2);
    for (const auto& d : agg.cells[0].drops) {
        CHECK(d.best_params.alpha == 0.0);  // eicic pin via bounds
        CHECK(d.fifth_pse >= 0.0);
    }
}

TEST_CASE("per-drop CSV and aggregate JSON round trip") {
    ExperimentSpec s = small_spec();
    s.n_drops = 4;
    const AggregateResult agg = run_experiment(s);
    const std::string cpath = test_util::temp_path("drops.csv");
    const std::string jpath = test_util::temp_path("agg.json");
    save_per_drop_csv(agg, cpath);
    save_aggregate_json(agg, jpath);

    std::ifstream cf(cpath);
    std::string header;
    std::getline(cf, header);
    CHECK(header ==
          "drop_id,n_uabs,destroy_fraction,mode,tau_db,alpha,rho_db,rho_prime_db,"
          "fifth_pse,elapsed_s");
    double sum = 0.0;
    int rows = 0;
    for (std::string line; std::getline(cf, line);) {
        std::stringstream ss(line);
        std::string field;
        for (int i = 0; i < 9; ++i) std::getline(ss, field, ',');
        sum += std::stod(field);
        ++rows;
    }
    CHECK(rows == 4);
    const double csv_mean = sum / rows;

    std::ifstream jf(jpath);
    const nlohmann::json j = nlohmann::json::parse(jf);
    CHECK(j["cells"].size() == 1);
    const double json_mean = j["cells"][0]["mean_5pse_bpshz"].get<double>();
    CHECK(csv_mean == doctest::Approx(json_mean).epsilon(1e-12));
    CHECK(j["cells"][0]["n_drops"].get<int>() == 4);

    std::filesystem::remove(cpath);
    std::filesystem::remove(jpath);
}

TEST_CASE("CRE sweep: rows, determinism, and a degenerate single point") {
    ExperimentSpec s = small_spec();
    s.n_drops = 3;
    s.grid = IcicGrid{};  // defaults per mode
    s.icic_mode = IcicMode::eicic;

    const std::vector<double> taus = {0.0, 6.0, 12.0};
    const auto rows = sweep_cre(s, taus);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].tau_db == taus[i]);
        CHECK(rows[i].n_drops == 3);
        CHECK(rows[i].mean_5pse >= 0.0);
    }
    const auto again = sweep_cre(s, taus);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(rows[i].mean_5pse == again[i].mean_5pse);

    // A one-tau sweep must match optimizing the remaining parameters at that
    // tau via the experiment path.
    ExperimentSpec one = s;
    one.grid.tau_db = {6.0};
    const auto single = sweep_cre(one, {6.0});
    const AggregateResult agg = run_experiment(one);
    CHECK(single[0].mean_5pse == doctest::Approx(agg.cells[0].mean_5pse).epsilon(1e-12));

    const std::string path = test_util::temp_path("sweep.csv");
    save_sweep_csv(rows, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "tau_db,mean_5pse_bpshz,std_5pse_bpshz,n_drops");
    int count = 0;
    for (std::string line; std::getline(f, line);) ++count;
    CHECK(count == 3);
    std::filesystem::remove(path);
}

TEST_CASE("sweep requires hex deployment") {
    ExperimentSpec s = small_spec();
    s.deployment = Deployment::ga;
    CHECK_THROWS_AS(sweep_cre(s, {0.0}), std::invalid_argument);
}

TEST_CASE("hex optimizer wall clock grows with grid size") {
    ExperimentSpec tiny = small_spec();
    tiny.n_drops = 4;
    tiny.grid = IcicGrid{{6.0}, {0.5}, {25.0}, {-10.0}};  // 1 point
    ExperimentSpec full = tiny;
    full.grid = IcicGrid{};  // feicic default: 600 points
    const AggregateResult fast = run_experiment(tiny);
    const AggregateResult slow = run_experiment(full);
    CHECK(fast.cells[0].mean_elapsed_s > 0.0);
    CHECK(slow.cells[0].mean_elapsed_s > fast.cells[0].mean_elapsed_s);
}

TEST_SUITE_END();
