// SPDX-License-Identifier: Apache-2.0
#include "uhn.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "errors.hpp"
#include "harness.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

/// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
uhn_status guarded(Fn&& fn) {
    try {
        fn();
        return UHN_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return UHN_ERR_INVALID_ARGUMENT;
    } catch (const uhn::parse_error& e) {
        set_error(e.what());
        return UHN_ERR_PARSE;
    } catch (const uhn::io_error& e) {
        set_error(e.what());
        return UHN_ERR_IO;
    } catch (const std::bad_alloc& e) {
        set_error(e.what());
        return UHN_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return UHN_ERR_RUNTIME;
    } catch (...) {
        set_error("unknown error");
        return UHN_ERR_INTERNAL;
    }
}

bool require(bool cond, const char* message) {
    if (!cond) set_error(message);
    return cond;
}

uhn::ScenarioConfig to_core(const uhn_scenario_config& c) {
    uhn::ScenarioConfig s;
    s.region = uhn::SimRegion{c.region_width_km, c.region_height_km};
    s.lambda_mbs_per_km2 = c.lambda_mbs_per_km2;
    s.lambda_ue_per_km2 = c.lambda_ue_per_km2;
    s.n_uabs = c.n_uabs;
    s.destroy_fraction = c.destroy_fraction;
    s.mbs_altitude_m = c.mbs_altitude_m;
    s.uabs_altitude_m = c.uabs_altitude_m;
    s.ue_height_m = c.ue_height_m;
    s.d_min_ue_mbs_m = c.d_min_ue_mbs_m;
    s.d_min_ue_uabs_m = c.d_min_ue_uabs_m;
    s.mbs_power_dbm = c.mbs_power_dbm;
    s.uabs_power_dbm = c.uabs_power_dbm;
    s.rng_seed = c.seed;
    return s;
}

uhn::PathLossModel to_core(const uhn_model& m) {
    uhn::PathLossModel model;
    model.variant = m.variant == UHN_PLM_OHPLM ? uhn::PlmVariant::ohplm
                                               : uhn::PlmVariant::splm;
    model.delta = m.delta;
    model.fc_mhz = m.fc_mhz;
    model.max_pl_db = m.max_pl_db;
    model.hata_standard_ue_correction = m.hata_standard_ue_correction != 0;
    return model;
}

uhn::EvalOptions eval_options(const uhn_model& m) {
    uhn::EvalOptions opts;
    if (m.se_ceiling_bpshz > 0.0) opts.se_ceiling_bpshz = m.se_ceiling_bpshz;
    return opts;
}

uhn::IcicParams to_core(const uhn_icic_params& p) {
    return uhn::IcicParams{p.tau_db, p.alpha, p.rho_db, p.rho_prime_db, p.beta};
}

uhn_icic_params from_core(const uhn::IcicParams& p) {
    return uhn_icic_params{p.tau_db, p.alpha, p.rho_db, p.rho_prime_db, p.beta};
}

uhn::IcicGrid to_core(const uhn_icic_grid& g) {
    uhn::IcicGrid grid;
    grid.tau_db.assign(g.tau_db, g.tau_db + g.n_tau);
    grid.alpha.assign(g.alpha, g.alpha + g.n_alpha);
    grid.rho_db.assign(g.rho_db, g.rho_db + g.n_rho);
    grid.rho_prime_db.assign(g.rho_prime_db, g.rho_prime_db + g.n_rho_prime);
    return grid;
}

uhn::GaConfig to_core(const uhn_ga_config& c) {
    uhn::GaConfig g;
    g.population_size = c.population_size;
    g.generations = c.generations;
    g.elitism_count = c.elitism_count;
    g.crossover_prob = c.crossover_prob;
    g.mutation_prob = c.mutation_prob;
    g.rng_seed = c.rng_seed;
    g.fading_seed = c.fading_seed;
    return g;
}

uhn::ParamBounds to_core(const uhn_param_bounds& b) {
    uhn::ParamBounds out;
    out.tau_db = {b.tau_lo_db, b.tau_hi_db};
    out.alpha = {b.alpha_lo, b.alpha_hi};
    out.rho_db = {b.rho_lo_db, b.rho_hi_db};
    out.rho_prime_db = {b.rho_prime_lo_db, b.rho_prime_hi_db};
    return out;
}

uhn::IcicMode mode_from_int(int mode) {
    switch (mode) {
        case UHN_ICIC_NONE: return uhn::IcicMode::none;
        case UHN_ICIC_EICIC: return uhn::IcicMode::eicic;
        case UHN_ICIC_FEICIC: return uhn::IcicMode::feicic;
    }
    throw std::invalid_argument("unknown ICIC mode code");
}

}  // namespace

struct uhn_layout {
    uhn::NetworkLayout layout;
};

struct uhn_report {
    uhn::SeReport report;
};

extern "C" {

const char* uhn_status_str(uhn_status status) {
    switch (status) {
        case UHN_OK: return "ok";
        case UHN_ERR_INVALID_ARGUMENT: return "invalid argument";
        case UHN_ERR_IO: return "i/o error";
        case UHN_ERR_PARSE: return "parse error";
        case UHN_ERR_RUNTIME: return "runtime error";
        case UHN_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* uhn_last_error(void) { return g_last_error.c_str(); }

const char* uhn_version(void) { return "1.0.0"; }

void uhn_scenario_config_default(uhn_scenario_config* cfg) {
    if (!cfg) return;
    const uhn::ScenarioConfig d;
    *cfg = uhn_scenario_config{d.region.width_km, d.region.height_km,
                               d.lambda_mbs_per_km2, d.lambda_ue_per_km2,
                               d.n_uabs, d.destroy_fraction, d.mbs_altitude_m,
                               d.uabs_altitude_m, d.ue_height_m, d.d_min_ue_mbs_m,
                               d.d_min_ue_uabs_m, d.mbs_power_dbm, d.uabs_power_dbm,
                               d.rng_seed};
}

void uhn_model_default(uhn_model* model, int variant) {
    if (!model) return;
    *model = uhn_model{variant, 4.0, 763.0, 0.0, 0, 0.0};
}

void uhn_ga_config_default(uhn_ga_config* cfg) {
    if (!cfg) return;
    const uhn::GaConfig d;
    *cfg = uhn_ga_config{d.population_size, d.generations, d.elitism_count,
                         d.crossover_prob, d.mutation_prob, d.rng_seed,
                         d.fading_seed};
}

void uhn_param_bounds_default(uhn_param_bounds* bounds, int icic_mode) {
    if (!bounds) return;
    uhn::ParamBounds b;
    try {
        b = uhn::bounds_for_mode(mode_from_int(icic_mode));
    } catch (const std::exception&) {
        b = uhn::ParamBounds{};
    }
    *bounds = uhn_param_bounds{b.tau_db.lo,       b.tau_db.hi,
                               b.alpha.lo,        b.alpha.hi,
                               b.rho_db.lo,       b.rho_db.hi,
                               b.rho_prime_db.lo, b.rho_prime_db.hi};
}

uhn_status uhn_layout_generate(const uhn_scenario_config* cfg, uhn_layout** out) {
    if (!require(cfg && out, "layout_generate: cfg and out must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new uhn_layout{uhn::generate_ppp_layout(to_core(*cfg))}; });
}

uhn_status uhn_layout_destroy_mbs(const uhn_layout* layout, double fraction,
                                  uint64_t seed, uhn_layout** out) {
    if (!require(layout && out, "destroy_mbs: layout and out must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded(
        [&] { *out = new uhn_layout{uhn::destroy_mbs(layout->layout, fraction, seed)}; });
}

uhn_status uhn_layout_place_hex_uabs(uhn_layout* layout, int n_uabs,
                                     double altitude_m) {
    if (!require(layout, "place_hex_uabs: layout must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        layout->layout.uabs =
            uhn::hex_grid_positions(n_uabs, layout->layout.region, altitude_m);
    });
}

uhn_status uhn_layout_set_uabs(uhn_layout* layout, const double* xy_km, size_t n,
                               double altitude_m) {
    if (!require(layout && (xy_km || n == 0), "set_uabs: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<uhn::Point3> pts;
        pts.reserve(n);
        for (size_t i = 0; i < n; ++i)
            pts.push_back(uhn::Point3{xy_km[2 * i], xy_km[2 * i + 1], altitude_m});
        layout->layout.uabs = std::move(pts);
    });
}

uhn_status uhn_layout_counts(const uhn_layout* layout, size_t* n_mbs,
                             size_t* n_uabs, size_t* n_ue) {
    if (!require(layout, "layout_counts: layout must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    if (n_mbs) *n_mbs = layout->layout.mbs.size();
    if (n_uabs) *n_uabs = layout->layout.uabs.size();
    if (n_ue) *n_ue = layout->layout.ue.size();
    return UHN_OK;
}

uhn_status uhn_layout_save_csv(const uhn_layout* layout, const char* path) {
    if (!require(layout && path, "layout_save_csv: layout and path must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] { uhn::save_layout_csv(layout->layout, path); });
}

uhn_status uhn_layout_load_csv(const char* path, double mbs_power_dbm,
                               double uabs_power_dbm, uhn_layout** out) {
    if (!require(path && out, "layout_load_csv: path and out must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new uhn_layout{uhn::load_layout_csv(path, mbs_power_dbm, uabs_power_dbm)};
    });
}

void uhn_layout_free(uhn_layout* layout) { delete layout; }

uhn_status uhn_path_loss_cdf_csv(const uhn_layout* layout, const uhn_model* model,
                                 const char* path) {
    if (!require(layout && model && path, "path_loss_cdf: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        uhn::path_loss_cdf(layout->layout, to_core(*model)).save_csv(path);
    });
}

uhn_status uhn_evaluate(const uhn_layout* layout, const uhn_model* model,
                        const uhn_icic_params* params, uint64_t fading_seed,
                        uhn_report** out) {
    if (!require(layout && model && params && out, "evaluate: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new uhn_report{uhn::evaluate_5pse(layout->layout, to_core(*model),
                                                 to_core(*params), fading_seed,
                                                 eval_options(*model))};
    });
}

uhn_status uhn_report_fifth_pse(const uhn_report* report, double* out) {
    if (!require(report && out, "report_fifth_pse: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    *out = report->report.fifth_percentile_se;
    return UHN_OK;
}

uhn_status uhn_report_n_ue(const uhn_report* report, size_t* out) {
    if (!require(report && out, "report_n_ue: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    *out = report->report.per_ue_se.size();
    return UHN_OK;
}

uhn_status uhn_report_save_json(const uhn_report* report, const char* path) {
    if (!require(report && path, "report_save_json: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] { uhn::save_report_json(report->report, path); });
}

uhn_status uhn_report_save_csv(const uhn_report* report, const char* path) {
    if (!require(report && path, "report_save_csv: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] { uhn::save_report_csv(report->report, path); });
}

void uhn_report_free(uhn_report* report) { delete report; }

uhn_status uhn_grid_search(const uhn_layout* layout, const uhn_model* model,
                           const uhn_icic_grid* grid, double beta,
                           uint64_t fading_seed, uhn_icic_params* best,
                           uhn_report** best_report,
                           const char* surface_csv_path) {
    if (!require(layout && model && grid && best, "grid_search: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    if (!require(grid->tau_db && grid->alpha && grid->rho_db && grid->rho_prime_db,
                 "grid_search: grid axes must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        auto res = uhn::grid_search_icic(layout->layout, to_core(*model),
                                         to_core(*grid), beta, fading_seed,
                                         eval_options(*model));
        *best = from_core(res.best);
        if (surface_csv_path) uhn::save_surface_csv(res.surface, surface_csv_path);
        if (best_report) *best_report = new uhn_report{std::move(res.best_report)};
    });
}

uhn_status uhn_ga_optimize(const uhn_layout* base, const uhn_model* model,
                           const uhn_ga_config* cfg,
                           const uhn_param_bounds* bounds, int n_uabs,
                           double uabs_altitude_m, double beta,
                           double* best_genes, uhn_icic_params* best_params,
                           uhn_report** best_report,
                           const char* history_csv_path,
                           const char* best_json_path) {
    if (!require(base && model && cfg && bounds, "ga_optimize: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    if (!require(n_uabs >= 0, "ga_optimize: n_uabs must be >= 0"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto gene_bounds = uhn::chromosome_bounds(
            n_uabs, base->layout.region, to_core(*bounds));
        auto res = uhn::ga_optimize(base->layout, to_core(*model), to_core(*cfg),
                                    gene_bounds, beta, uabs_altitude_m,
                                    eval_options(*model));
        if (best_genes)
            std::memcpy(best_genes, res.best.genes.data(),
                        res.best.genes.size() * sizeof(double));
        if (best_params) *best_params = from_core(res.best_params);
        if (history_csv_path) uhn::save_history_csv(res.history, history_csv_path);
        if (best_json_path) uhn::save_best_json(res, beta, best_json_path);
        if (best_report) *best_report = new uhn_report{std::move(res.best_report)};
    });
}

namespace {

uhn::ExperimentSpec spec_to_core(const uhn_experiment_spec& s) {
    uhn::ExperimentSpec spec;
    spec.scenario = to_core(s.scenario);
    spec.model = to_core(s.model);
    spec.deployment = s.deployment == UHN_DEPLOY_GA ? uhn::Deployment::ga
                                                    : uhn::Deployment::hex;
    spec.icic_mode = mode_from_int(s.icic_mode);
    if (!s.n_uabs_list || s.n_uabs_count == 0)
        throw std::invalid_argument("experiment: n_uabs_list must be non-empty");
    spec.n_uabs_list.assign(s.n_uabs_list, s.n_uabs_list + s.n_uabs_count);
    if (!s.destroy_fractions || s.n_destroy == 0)
        throw std::invalid_argument("experiment: destroy_fractions must be non-empty");
    spec.destroy_fractions.assign(s.destroy_fractions,
                                  s.destroy_fractions + s.n_destroy);
    spec.n_drops = s.n_drops;
    if (s.grid) spec.grid = to_core(*s.grid);
    if (s.ga) spec.ga = to_core(*s.ga);
    spec.ga_bounds = s.bounds ? to_core(*s.bounds)
                              : uhn::bounds_for_mode(spec.icic_mode);
    spec.beta = s.beta;
    spec.master_seed = s.master_seed;
    spec.jobs = s.jobs;
    spec.eval = eval_options(s.model);
    return spec;
}

}  // namespace

uhn_status uhn_run_experiment(const uhn_experiment_spec* spec,
                              const char* per_drop_csv_path,
                              const char* aggregate_json_path) {
    if (!require(spec, "run_experiment: spec must be non-NULL"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto agg = uhn::run_experiment(spec_to_core(*spec));
        if (per_drop_csv_path) uhn::save_per_drop_csv(agg, per_drop_csv_path);
        if (aggregate_json_path) uhn::save_aggregate_json(agg, aggregate_json_path);
    });
}

uhn_status uhn_sweep_cre(const uhn_experiment_spec* spec, const double* tau_db,
                         size_t n_tau, const char* out_csv_path) {
    if (!require(spec && tau_db && n_tau > 0 && out_csv_path,
                 "sweep_cre: NULL argument"))
        return UHN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto rows = uhn::sweep_cre(spec_to_core(*spec),
                                         std::vector<double>(tau_db, tau_db + n_tau));
        uhn::save_sweep_csv(rows, out_csv_path);
    });
}

}  // extern "C"
