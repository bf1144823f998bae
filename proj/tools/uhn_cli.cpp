// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links only the public C API of libuhnsim; all
// simulation work happens behind it.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uhn.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& message) { throw CliError(message); }

void check(uhn_status status, const std::string& context) {
    if (status != UHN_OK)
        fail(context + ": " + uhn_status_str(status) + " (" + uhn_last_error() + ")");
}

/// Full run configuration; owns the storage the C spec points into.
struct RunConfig {
    uhn_scenario_config scenario{};
    uhn_model model{};
    int deployment = UHN_DEPLOY_HEX;
    int icic_mode = UHN_ICIC_FEICIC;
    std::vector<int> n_uabs_list{4};
    std::vector<double> destroy_fractions{0.5};
    int n_drops = 20;
    std::vector<double> grid_tau, grid_alpha, grid_rho, grid_rho_prime;
    uhn_ga_config ga{};
    double beta = 0.5;
    std::uint64_t seed = 1;
    int jobs = 0;  // 0: all available cores
    std::string out_dir;

    bool has_grid() const {
        return !grid_tau.empty() || !grid_alpha.empty() || !grid_rho.empty() ||
               !grid_rho_prime.empty();
    }
};

RunConfig desk_config() {
    RunConfig c;
    uhn_scenario_config_default(&c.scenario);
    c.scenario.region_width_km = 5.0;
    c.scenario.region_height_km = 5.0;
    c.scenario.n_uabs = 4;
    c.scenario.destroy_fraction = 0.5;
    uhn_model_default(&c.model, UHN_PLM_SPLM);
    uhn_ga_config_default(&c.ga);
    c.n_uabs_list = {4, 16};
    c.destroy_fractions = {0.5, 0.975};
    c.n_drops = 20;
    return c;
}

RunConfig paper_config() {
    RunConfig c = desk_config();
    c.scenario.region_width_km = 10.0;
    c.scenario.region_height_km = 10.0;
    c.n_uabs_list = {4, 16, 36, 60};
    c.n_drops = 100;
    return c;
}

double json_number(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    fail("config: " + key + " must be a number (or \"inf\"/\"-inf\")");
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail("config: unknown key '" + key + "' in " + where);
    }
}

int parse_mode(const std::string& s) {
    if (s == "none") return UHN_ICIC_NONE;
    if (s == "eicic") return UHN_ICIC_EICIC;
    if (s == "feicic") return UHN_ICIC_FEICIC;
    fail("unknown icic mode '" + s + "' (expected none|eicic|feicic)");
}

int parse_deployment(const std::string& s) {
    if (s == "hex") return UHN_DEPLOY_HEX;
    if (s == "ga") return UHN_DEPLOY_GA;
    fail("unknown deployment '" + s + "' (expected hex|ga)");
}

int parse_variant(const std::string& s) {
    if (s == "splm") return UHN_PLM_SPLM;
    if (s == "ohplm") return UHN_PLM_OHPLM;
    fail("unknown model '" + s + "' (expected splm|ohplm)");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) fail("cannot open config: " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        fail("config parse error in " + path + ": " + e.what());
    }
    expect_keys(j, "top level",
                {"schema", "scenario", "model", "deployment", "icic_mode",
                 "n_uabs_list", "destroy_fractions", "n_drops", "grid", "ga",
                 "beta", "seed", "jobs", "output_dir"});
    if (!j.contains("schema") || !j["schema"].is_number_integer() ||
        j["schema"].get<int>() != 1)
        fail("config: missing or unsupported schema version (expected 1)");

    if (j.contains("scenario")) {
        const auto& s = j["scenario"];
        expect_keys(s, "scenario",
                    {"region_km", "lambda_mbs", "lambda_ue", "n_uabs",
                     "destroy_fraction", "mbs_altitude_m", "uabs_altitude_m",
                     "ue_height_m", "d_min_ue_mbs_m", "d_min_ue_uabs_m",
                     "mbs_power_dbm", "uabs_power_dbm"});
        if (s.contains("region_km")) {
            if (!s["region_km"].is_array() || s["region_km"].size() != 2)
                fail("config: scenario.region_km must be [width, height]");
            cfg.scenario.region_width_km = json_number(s["region_km"][0], "region_km");
            cfg.scenario.region_height_km = json_number(s["region_km"][1], "region_km");
        }
        auto num = [&](const char* key, double& out) {
            if (s.contains(key)) out = json_number(s[key], key);
        };
        num("lambda_mbs", cfg.scenario.lambda_mbs_per_km2);
        num("lambda_ue", cfg.scenario.lambda_ue_per_km2);
        if (s.contains("n_uabs")) cfg.scenario.n_uabs = s["n_uabs"].get<int>();
        num("destroy_fraction", cfg.scenario.destroy_fraction);
        num("mbs_altitude_m", cfg.scenario.mbs_altitude_m);
        num("uabs_altitude_m", cfg.scenario.uabs_altitude_m);
        num("ue_height_m", cfg.scenario.ue_height_m);
        num("d_min_ue_mbs_m", cfg.scenario.d_min_ue_mbs_m);
        num("d_min_ue_uabs_m", cfg.scenario.d_min_ue_uabs_m);
        num("mbs_power_dbm", cfg.scenario.mbs_power_dbm);
        num("uabs_power_dbm", cfg.scenario.uabs_power_dbm);
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        expect_keys(m, "model",
                    {"variant", "delta", "fc_mhz", "max_pl_db",
                     "hata_standard_ue_correction", "se_ceiling_bpshz"});
        if (m.contains("variant"))
            cfg.model.variant = parse_variant(m["variant"].get<std::string>());
        if (m.contains("delta")) cfg.model.delta = json_number(m["delta"], "delta");
        if (m.contains("fc_mhz")) cfg.model.fc_mhz = json_number(m["fc_mhz"], "fc_mhz");
        if (m.contains("max_pl_db"))
            cfg.model.max_pl_db = json_number(m["max_pl_db"], "max_pl_db");
        if (m.contains("hata_standard_ue_correction"))
            cfg.model.hata_standard_ue_correction =
                m["hata_standard_ue_correction"].get<bool>() ? 1 : 0;
        if (m.contains("se_ceiling_bpshz"))
            cfg.model.se_ceiling_bpshz =
                json_number(m["se_ceiling_bpshz"], "se_ceiling_bpshz");
    }
    if (j.contains("deployment"))
        cfg.deployment = parse_deployment(j["deployment"].get<std::string>());
    if (j.contains("icic_mode"))
        cfg.icic_mode = parse_mode(j["icic_mode"].get<std::string>());
    if (j.contains("n_uabs_list"))
        cfg.n_uabs_list = j["n_uabs_list"].get<std::vector<int>>();
    if (j.contains("destroy_fractions"))
        cfg.destroy_fractions = j["destroy_fractions"].get<std::vector<double>>();
    if (j.contains("n_drops")) cfg.n_drops = j["n_drops"].get<int>();
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        expect_keys(g, "grid", {"tau_db", "alpha", "rho_db", "rho_prime_db"});
        auto axis = [&](const char* key, std::vector<double>& out) {
            if (!g.contains(key)) return;
            out.clear();
            for (const auto& v : g[key]) out.push_back(json_number(v, key));
        };
        axis("tau_db", cfg.grid_tau);
        axis("alpha", cfg.grid_alpha);
        axis("rho_db", cfg.grid_rho);
        axis("rho_prime_db", cfg.grid_rho_prime);
    }
    if (j.contains("ga")) {
        const auto& g = j["ga"];
        expect_keys(g, "ga",
                    {"population_size", "generations", "crossover_prob",
                     "mutation_prob", "elitism_count"});
        if (g.contains("population_size"))
            cfg.ga.population_size = g["population_size"].get<int>();
        if (g.contains("generations")) cfg.ga.generations = g["generations"].get<int>();
        if (g.contains("crossover_prob"))
            cfg.ga.crossover_prob = json_number(g["crossover_prob"], "crossover_prob");
        if (g.contains("mutation_prob"))
            cfg.ga.mutation_prob = json_number(g["mutation_prob"], "mutation_prob");
        if (g.contains("elitism_count"))
            cfg.ga.elitism_count = g["elitism_count"].get<int>();
    }
    if (j.contains("beta")) cfg.beta = json_number(j["beta"], "beta");
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    if (j.contains("output_dir")) cfg.out_dir = j["output_dir"].get<std::string>();
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(dir);
    return (dir / name).string();
}

struct LayoutHandle {
    uhn_layout* ptr = nullptr;
    LayoutHandle() = default;
    LayoutHandle(const LayoutHandle&) = delete;
    LayoutHandle& operator=(const LayoutHandle&) = delete;
    LayoutHandle(LayoutHandle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
    ~LayoutHandle() { uhn_layout_free(ptr); }
};

struct ReportHandle {
    uhn_report* ptr = nullptr;
    ReportHandle() = default;
    ReportHandle(const ReportHandle&) = delete;
    ReportHandle& operator=(const ReportHandle&) = delete;
    ~ReportHandle() { uhn_report_free(ptr); }
};

/// Per-drop seed derivation; mirrors the harness (splitmix64 chain) so that
/// single-layout commands line up with experiment drop 0.
struct Seeds {
    std::uint64_t layout, destroy, fading, ga;
};

std::uint64_t mix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = master;
    for (std::uint64_t x : {a, b, std::uint64_t{0}}) {
        std::uint64_t xs = x;
        s ^= mix(xs) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        mix(s);
    }
    return mix(s);
}

Seeds seeds_for_drop(std::uint64_t master, int drop) {
    const auto d = static_cast<std::uint64_t>(drop);
    return Seeds{derive(master, d, 1), derive(master, d, 2), derive(master, d, 3),
                 derive(master, d, 4)};
}

/// generate -> destroy -> optional hex placement, using drop-0 seeds.
LayoutHandle build_layout(const RunConfig& cfg, bool place_hex) {
    const Seeds seeds = seeds_for_drop(cfg.seed, 0);
    uhn_scenario_config sc = cfg.scenario;
    sc.seed = seeds.layout;
    LayoutHandle base;
    check(uhn_layout_generate(&sc, &base.ptr), "generate layout");
    LayoutHandle destroyed;
    check(uhn_layout_destroy_mbs(base.ptr, cfg.scenario.destroy_fraction,
                                 seeds.destroy, &destroyed.ptr),
          "destroy MBSs");
    if (place_hex && cfg.scenario.n_uabs > 0)
        check(uhn_layout_place_hex_uabs(destroyed.ptr, cfg.scenario.n_uabs,
                                        cfg.scenario.uabs_altitude_m),
              "place hex UABSs");
    return destroyed;
}

uhn_experiment_spec experiment_spec(const RunConfig& cfg, const uhn_icic_grid* grid,
                                    const uhn_ga_config* ga) {
    uhn_experiment_spec spec{};
    spec.scenario = cfg.scenario;
    spec.model = cfg.model;
    spec.deployment = cfg.deployment;
    spec.icic_mode = cfg.icic_mode;
    spec.n_uabs_list = cfg.n_uabs_list.data();
    spec.n_uabs_count = cfg.n_uabs_list.size();
    spec.destroy_fractions = cfg.destroy_fractions.data();
    spec.n_destroy = cfg.destroy_fractions.size();
    spec.n_drops = cfg.n_drops;
    spec.grid = grid;
    spec.ga = ga;
    spec.bounds = nullptr;
    spec.beta = cfg.beta;
    spec.master_seed = cfg.seed;
    spec.jobs = cfg.jobs;
    return spec;
}

std::vector<double> sweep_taus(const RunConfig& cfg) {
    if (!cfg.grid_tau.empty()) return cfg.grid_tau;
    return {0.0, 3.0, 6.0, 9.0, 12.0, 15.0};
}

json params_to_json(const uhn_icic_params& p) {
    auto num = [](double v) {
        if (std::isfinite(v)) return json(v);
        return json(v > 0 ? "inf" : "-inf");
    };
    return {{"tau_db", num(p.tau_db)},
            {"alpha", p.alpha},
            {"rho_db", num(p.rho_db)},
            {"rho_prime_db", num(p.rho_prime_db)},
            {"beta", p.beta}};
}

int cmd_scenario(const RunConfig& cfg, bool pl_cdf) {
    const Seeds seeds = seeds_for_drop(cfg.seed, 0);
    uhn_scenario_config sc = cfg.scenario;
    sc.seed = seeds.layout;
    LayoutHandle base;
    check(uhn_layout_generate(&sc, &base.ptr), "generate layout");
    check(uhn_layout_save_csv(base.ptr, out_path(cfg, "layout_initial.csv").c_str()),
          "save initial layout");

    LayoutHandle final_layout;
    check(uhn_layout_destroy_mbs(base.ptr, cfg.scenario.destroy_fraction,
                                 seeds.destroy, &final_layout.ptr),
          "destroy MBSs");
    if (cfg.scenario.n_uabs > 0)
        check(uhn_layout_place_hex_uabs(final_layout.ptr, cfg.scenario.n_uabs,
                                        cfg.scenario.uabs_altitude_m),
              "place hex UABSs");
    check(uhn_layout_save_csv(final_layout.ptr, out_path(cfg, "layout.csv").c_str()),
          "save layout");
    if (pl_cdf)
        check(uhn_path_loss_cdf_csv(final_layout.ptr, &cfg.model,
                                    out_path(cfg, "path_loss_cdf.csv").c_str()),
              "path-loss CDF");

    size_t n_mbs = 0, n_uabs = 0, n_ue = 0;
    uhn_layout_counts(final_layout.ptr, &n_mbs, &n_uabs, &n_ue);
    std::printf("scenario: %zu MBS, %zu UABS, %zu UE -> %s\n", n_mbs, n_uabs, n_ue,
                out_path(cfg, "layout.csv").c_str());
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::optional<std::string>& only_mode) {
    const auto taus = sweep_taus(cfg);
    std::vector<int> modes;
    if (only_mode)
        modes = {parse_mode(*only_mode)};
    else
        modes = {UHN_ICIC_NONE, UHN_ICIC_EICIC, UHN_ICIC_FEICIC};

    for (int mode : modes) {
        RunConfig c = cfg;
        c.icic_mode = mode;
        c.deployment = UHN_DEPLOY_HEX;
        c.grid_tau.clear();  // the sweep supplies the tau axis itself
        uhn_icic_grid grid{};
        std::vector<double> alpha = c.grid_alpha, rho = c.grid_rho,
                            rho_prime = c.grid_rho_prime;
        grid.alpha = alpha.data();
        grid.n_alpha = alpha.size();
        grid.rho_db = rho.data();
        grid.n_rho = rho.size();
        grid.rho_prime_db = rho_prime.data();
        grid.n_rho_prime = rho_prime.size();
        uhn_experiment_spec spec =
            experiment_spec(c, c.has_grid() ? &grid : nullptr, &c.ga);
        const char* name = mode == UHN_ICIC_NONE    ? "sweep_none.csv"
                           : mode == UHN_ICIC_EICIC ? "sweep_eicic.csv"
                                                    : "sweep_feicic.csv";
        const std::string path = out_path(cfg, name);
        check(uhn_sweep_cre(&spec, taus.data(), taus.size(), path.c_str()),
              "CRE sweep");
        std::printf("sweep: wrote %s (%zu tau values, %d drops)\n", path.c_str(),
                    taus.size(), cfg.n_drops);
    }
    return 0;
}

int cmd_hexsearch(const RunConfig& cfg) {
    const Seeds seeds = seeds_for_drop(cfg.seed, 0);
    LayoutHandle layout = build_layout(cfg, true);
    const std::string layout_path = out_path(cfg, "hexsearch_layout.csv");
    check(uhn_layout_save_csv(layout.ptr, layout_path.c_str()), "save layout");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> tau = cfg.grid_tau, alpha = cfg.grid_alpha,
                        rho = cfg.grid_rho, rho_prime = cfg.grid_rho_prime;
    if (tau.empty()) tau = {0, 3, 6, 9, 12, 15};
    if (alpha.empty())
        alpha = cfg.icic_mode == UHN_ICIC_FEICIC
                    ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}
                    : std::vector<double>{cfg.icic_mode == UHN_ICIC_EICIC ? 0.0 : 1.0};
    if (rho.empty())
        rho = cfg.icic_mode == UHN_ICIC_NONE ? std::vector<double>{inf}
                                             : std::vector<double>{20, 25, 30, 35, 40};
    if (rho_prime.empty())
        rho_prime = cfg.icic_mode == UHN_ICIC_NONE
                        ? std::vector<double>{-inf}
                        : std::vector<double>{-20, -15, -10, -5};
    const uhn_icic_grid grid{tau.data(),       tau.size(),  alpha.data(),
                             alpha.size(),     rho.data(),  rho.size(),
                             rho_prime.data(), rho_prime.size()};

    uhn_icic_params best{};
    ReportHandle report;
    const std::string surface_path = out_path(cfg, "hexsearch_surface.csv");
    check(uhn_grid_search(layout.ptr, &cfg.model, &grid, cfg.beta, seeds.fading,
                          &best, &report.ptr, surface_path.c_str()),
          "grid search");

    double fifth = 0.0;
    uhn_report_fifth_pse(report.ptr, &fifth);
    json j;
    j["schema"] = 1;
    j["params"] = params_to_json(best);
    j["fifth_percentile_se_bpshz"] = fifth;
    j["fading_seed"] = seeds.fading;
    j["layout_csv"] = layout_path;
    j["mbs_power_dbm"] = cfg.scenario.mbs_power_dbm;
    j["uabs_power_dbm"] = cfg.scenario.uabs_power_dbm;
    std::ofstream f(out_path(cfg, "hexsearch_best.json"));
    if (!f) fail("cannot write hexsearch_best.json");
    f << j.dump(2) << '\n';

    check(uhn_report_save_json(report.ptr,
                               out_path(cfg, "hexsearch_report.json").c_str()),
          "save report");
    std::printf("hexsearch: best 5pSE %.6g bps/Hz at tau=%g alpha=%g rho=%g rho'=%g\n",
                fifth, best.tau_db, best.alpha, best.rho_db, best.rho_prime_db);
    return 0;
}

int cmd_optimize(const RunConfig& cfg) {
    const Seeds seeds = seeds_for_drop(cfg.seed, 0);
    LayoutHandle base = build_layout(cfg, false);

    uhn_ga_config ga = cfg.ga;
    ga.rng_seed = seeds.ga;
    ga.fading_seed = seeds.fading;
    uhn_param_bounds bounds{};
    uhn_param_bounds_default(&bounds, cfg.icic_mode);

    const int n_uabs = cfg.scenario.n_uabs;
    std::vector<double> genes(2 * static_cast<std::size_t>(n_uabs) + 4);
    uhn_icic_params best{};
    ReportHandle report;
    check(uhn_ga_optimize(base.ptr, &cfg.model, &ga, &bounds, n_uabs,
                          cfg.scenario.uabs_altitude_m, cfg.beta, genes.data(),
                          &best, &report.ptr,
                          out_path(cfg, "optimize_history.csv").c_str(),
                          out_path(cfg, "optimize_best.json").c_str()),
          "GA optimize");

    // Audit trail: the drop layout with the winning UABS positions, so the
    // reported fitness can be reproduced with `evaluate`.
    const std::string layout_path = out_path(cfg, "optimize_layout.csv");
    check(uhn_layout_set_uabs(base.ptr, genes.data(),
                              static_cast<size_t>(n_uabs),
                              cfg.scenario.uabs_altitude_m),
          "apply best UABS positions");
    check(uhn_layout_save_csv(base.ptr, layout_path.c_str()), "save layout");

    double fifth = 0.0;
    uhn_report_fifth_pse(report.ptr, &fifth);
    {
        std::ifstream in(out_path(cfg, "optimize_best.json"));
        json j = json::parse(in);
        j["fading_seed"] = seeds.fading;
        j["ga_seed"] = seeds.ga;
        j["layout_csv"] = layout_path;
        j["mbs_power_dbm"] = cfg.scenario.mbs_power_dbm;
        j["uabs_power_dbm"] = cfg.scenario.uabs_power_dbm;
        std::ofstream out(out_path(cfg, "optimize_best.json"));
        out << j.dump(2) << '\n';
    }
    std::printf("optimize: best 5pSE %.6g bps/Hz (tau=%g alpha=%g rho=%g rho'=%g)\n",
                fifth, best.tau_db, best.alpha, best.rho_db, best.rho_prime_db);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& layout_path,
                 const uhn_icic_params& params, std::uint64_t fading_seed) {
    LayoutHandle layout;
    check(uhn_layout_load_csv(layout_path.c_str(), cfg.scenario.mbs_power_dbm,
                              cfg.scenario.uabs_power_dbm, &layout.ptr),
          "load layout");
    ReportHandle report;
    check(uhn_evaluate(layout.ptr, &cfg.model, &params, fading_seed, &report.ptr),
          "evaluate");
    check(uhn_report_save_json(report.ptr,
                               out_path(cfg, "evaluate_report.json").c_str()),
          "save report json");
    check(uhn_report_save_csv(report.ptr, out_path(cfg, "evaluate_report.csv").c_str()),
          "save report csv");
    double fifth = 0.0;
    uhn_report_fifth_pse(report.ptr, &fifth);
    std::printf("evaluate: 5pSE %.17g bps/Hz\n", fifth);
    return 0;
}

int cmd_bench(const RunConfig& cfg) {
    uhn_icic_grid grid{};
    std::vector<double> tau = cfg.grid_tau, alpha = cfg.grid_alpha,
                        rho = cfg.grid_rho, rho_prime = cfg.grid_rho_prime;
    grid.tau_db = tau.data();
    grid.n_tau = tau.size();
    grid.alpha = alpha.data();
    grid.n_alpha = alpha.size();
    grid.rho_db = rho.data();
    grid.n_rho = rho.size();
    grid.rho_prime_db = rho_prime.data();
    grid.n_rho_prime = rho_prime.size();

    for (int deployment : {UHN_DEPLOY_HEX, UHN_DEPLOY_GA}) {
        RunConfig c = cfg;
        c.deployment = deployment;
        uhn_experiment_spec spec =
            experiment_spec(c, cfg.has_grid() ? &grid : nullptr, &c.ga);
        const char* tag = deployment == UHN_DEPLOY_HEX ? "hex" : "ga";
        check(uhn_run_experiment(
                  &spec,
                  out_path(cfg, std::string("bench_") + tag + "_drops.csv").c_str(),
                  out_path(cfg, std::string("bench_") + tag + ".json").c_str()),
              std::string("bench ") + tag);
        std::printf("bench: finished %s deployment\n", tag);
    }

    std::ofstream out(out_path(cfg, "bench_summary.csv"));
    if (!out) fail("cannot write bench_summary.csv");
    out << "deployment,n_uabs,destroy_fraction,mean_5pse_bpshz,mean_elapsed_s\n";
    for (const char* tag : {"hex", "ga"}) {
        std::ifstream in(out_path(cfg, std::string("bench_") + tag + ".json"));
        const json j = json::parse(in);
        for (const auto& cell : j["cells"]) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%.17g\n", tag,
                          cell["n_uabs"].get<int>(),
                          cell["destroy_fraction"].get<double>(),
                          cell["mean_5pse_bpshz"].get<double>(),
                          cell["mean_elapsed_s"].get<double>());
            out << buf;
        }
    }
    std::printf("bench: wrote %s\n", out_path(cfg, "bench_summary.csv").c_str());
    return 0;
}

int cmd_experiment(const RunConfig& cfg) {
    uhn_icic_grid grid{};
    std::vector<double> tau = cfg.grid_tau, alpha = cfg.grid_alpha,
                        rho = cfg.grid_rho, rho_prime = cfg.grid_rho_prime;
    grid.tau_db = tau.data();
    grid.n_tau = tau.size();
    grid.alpha = alpha.data();
    grid.n_alpha = alpha.size();
    grid.rho_db = rho.data();
    grid.n_rho = rho.size();
    grid.rho_prime_db = rho_prime.data();
    grid.n_rho_prime = rho_prime.size();
    uhn_ga_config ga = cfg.ga;
    uhn_experiment_spec spec =
        experiment_spec(cfg, cfg.has_grid() ? &grid : nullptr, &ga);
    check(uhn_run_experiment(&spec, out_path(cfg, "experiment_drops.csv").c_str(),
                             out_path(cfg, "experiment_aggregate.json").c_str()),
          "run experiment");
    std::printf("experiment: wrote %s and %s\n",
                out_path(cfg, "experiment_drops.csv").c_str(),
                out_path(cfg, "experiment_aggregate.json").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uhnsim: UAV-assisted LTE-Advanced HetNet 5pSE simulator"};
    app.require_subcommand(1);

    std::string preset = "desk";
    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> drops_flag, jobs_flag, n_uabs_flag;
    std::optional<double> destroy_flag, beta_flag;
    std::optional<std::string> mode_flag, deployment_flag, model_flag, out_dir_flag;

    app.add_option("--preset", preset, "Configuration preset (desk|paper)")
        ->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--config", config_path, "JSON config file (schema 1)");
    app.add_option("--seed", seed_flag, "Master seed (overrides config)");
    app.add_option("--drops", drops_flag, "Monte-Carlo drops per cell");
    app.add_option("--jobs", jobs_flag, "Parallel drop workers (0 = all cores)");
    app.add_option("--mode", mode_flag, "ICIC mode (none|eicic|feicic)");
    app.add_option("--deployment", deployment_flag, "UABS deployment (hex|ga)");
    app.add_option("--model", model_flag, "Path-loss model (splm|ohplm)");
    app.add_option("--n-uabs", n_uabs_flag, "UABS count for single-layout commands");
    app.add_option("--destroy", destroy_flag, "MBS destruction fraction");
    app.add_option("--beta", beta_flag, "USF duty cycle");
    app.add_option("--out-dir", out_dir_flag,
                   "Output directory (default $UHN_OUT_DIR or .)");

    auto* sc_scenario = app.add_subcommand("scenario", "Generate and export layouts");
    bool pl_cdf = false;
    sc_scenario->add_flag("--pl-cdf", pl_cdf, "Also export the path-loss CDF");

    auto* sc_sweep =
        app.add_subcommand("sweep", "CRE sweep (hex deployment) per ICIC mode");
    auto* sc_optimize = app.add_subcommand("optimize", "GA joint optimization");
    auto* sc_hexsearch =
        app.add_subcommand("hexsearch", "Brute-force ICIC grid search on a hex layout");
    auto* sc_bench =
        app.add_subcommand("bench", "Hex vs GA runtime and 5pSE comparison");
    auto* sc_experiment =
        app.add_subcommand("experiment", "Run the full Monte-Carlo matrix");

    auto* sc_evaluate = app.add_subcommand("evaluate", "Re-score a layout CSV");
    std::string eval_layout;
    double eval_tau = 0.0, eval_alpha = 1.0;
    double eval_rho = std::numeric_limits<double>::infinity();
    double eval_rho_prime = -std::numeric_limits<double>::infinity();
    std::uint64_t eval_seed = 1;
    sc_evaluate->add_option("--layout", eval_layout, "Layout CSV path")->required();
    sc_evaluate->add_option("--tau-db", eval_tau, "CRE bias in dB");
    sc_evaluate->add_option("--alpha", eval_alpha, "CSF power reduction factor");
    sc_evaluate->add_option("--rho-db", eval_rho, "MUE scheduling threshold in dB");
    sc_evaluate->add_option("--rho-prime-db", eval_rho_prime,
                            "UUE scheduling threshold in dB");
    sc_evaluate->add_option("--fading-seed", eval_seed, "Fading realization seed");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = preset == "paper" ? paper_config() : desk_config();
        if (const char* env = std::getenv("UHN_OUT_DIR")) cfg.out_dir = env;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (seed_flag) cfg.seed = *seed_flag;
        if (drops_flag) cfg.n_drops = *drops_flag;
        if (jobs_flag) cfg.jobs = *jobs_flag;
        if (mode_flag) cfg.icic_mode = parse_mode(*mode_flag);
        if (deployment_flag) cfg.deployment = parse_deployment(*deployment_flag);
        if (model_flag) {
            const int variant = parse_variant(*model_flag);
            if (variant != cfg.model.variant) uhn_model_default(&cfg.model, variant);
        }
        if (n_uabs_flag) cfg.scenario.n_uabs = *n_uabs_flag;
        if (destroy_flag) cfg.scenario.destroy_fraction = *destroy_flag;
        if (beta_flag) cfg.beta = *beta_flag;
        if (out_dir_flag) cfg.out_dir = *out_dir_flag;

        if (sc_scenario->parsed()) return cmd_scenario(cfg, pl_cdf);
        if (sc_sweep->parsed()) return cmd_sweep(cfg, mode_flag);
        if (sc_optimize->parsed()) return cmd_optimize(cfg);
        if (sc_hexsearch->parsed()) return cmd_hexsearch(cfg);
        if (sc_bench->parsed()) return cmd_bench(cfg);
        if (sc_experiment->parsed()) return cmd_experiment(cfg);
        if (sc_evaluate->parsed()) {
            const uhn_icic_params params{eval_tau, eval_alpha, eval_rho,
                                         eval_rho_prime, cfg.beta};
            return cmd_evaluate(cfg, eval_layout, params, eval_seed);
        }
        std::fprintf(stderr, "error: no subcommand\n");
        return 2;
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
