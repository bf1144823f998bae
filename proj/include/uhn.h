/* SPDX-License-Identifier: Apache-2.0
 *
 * uhnsim - system-level simulator and optimizer for UAV-assisted LTE-Advanced
 * heterogeneous networks. C API of the shared library.
 *
 * All functions return UHN_OK on success or a uhn_status error code; the
 * thread-local message behind uhn_last_error() describes the failure. Objects
 * are exchanged through opaque handles and released with the matching
 * uhn_*_free call. Passing NULL where a handle or pointer is required yields
 * UHN_ERR_INVALID_ARGUMENT.
 */
#ifndef UHN_H
#define UHN_H

#include <stddef.h>
#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

typedef enum uhn_status {
    UHN_OK = 0,
    UHN_ERR_INVALID_ARGUMENT = 1, /* bad parameter or violated precondition */
    UHN_ERR_IO = 2,               /* file could not be read or written */
    UHN_ERR_PARSE = 3,            /* malformed input file */
    UHN_ERR_RUNTIME = 4,          /* failure while running (e.g. aborted drop) */
    UHN_ERR_INTERNAL = 5
} uhn_status;

const char* uhn_status_str(uhn_status status);

/* Message for the most recent failure on this thread. */
const char* uhn_last_error(void);

/* Library version as "major.minor.patch". */
const char* uhn_version(void);

/* ------------------------------------------------------------------ */
/* Scenario and model descriptions (plain structs, validated on use). */

typedef struct uhn_scenario_config {
    double region_width_km, region_height_km;
    double lambda_mbs_per_km2, lambda_ue_per_km2;
    int n_uabs;
    double destroy_fraction;
    double mbs_altitude_m, uabs_altitude_m, ue_height_m;
    double d_min_ue_mbs_m, d_min_ue_uabs_m;
    double mbs_power_dbm, uabs_power_dbm; /* effective transmit powers */
    uint64_t seed;
} uhn_scenario_config;

/* Table-typical defaults: 10x10 km, 4 MBS/km2, 100 UE/km2, 46/30 dBm. */
void uhn_scenario_config_default(uhn_scenario_config* cfg);

enum { UHN_PLM_SPLM = 0, UHN_PLM_OHPLM = 1 };

typedef struct uhn_model {
    int variant;       /* UHN_PLM_SPLM or UHN_PLM_OHPLM */
    double delta;      /* SPLM path-loss exponent */
    double fc_mhz;     /* OHPLM carrier frequency */
    double max_pl_db;  /* 0 selects the variant default (160 / 225 dB) */
    int hata_standard_ue_correction; /* nonzero: textbook a(h_ue) form */
    double se_ceiling_bpshz;         /* 0 selects the default (10) */
} uhn_model;

void uhn_model_default(uhn_model* model, int variant);

typedef struct uhn_icic_params {
    double tau_db, alpha, rho_db, rho_prime_db, beta;
} uhn_icic_params;

enum { UHN_ICIC_NONE = 0, UHN_ICIC_EICIC = 1, UHN_ICIC_FEICIC = 2 };
enum { UHN_DEPLOY_HEX = 0, UHN_DEPLOY_GA = 1 };

/* ------------------------------------------------------------------ */
/* Network layouts. */

typedef struct uhn_layout uhn_layout;

uhn_status uhn_layout_generate(const uhn_scenario_config* cfg, uhn_layout** out);
uhn_status uhn_layout_destroy_mbs(const uhn_layout* layout, double fraction,
                                  uint64_t seed, uhn_layout** out);
/* Replaces the UABS set with a centered hexagonal lattice. */
uhn_status uhn_layout_place_hex_uabs(uhn_layout* layout, int n_uabs,
                                     double altitude_m);
/* Replaces the UABS set with explicit positions; xy_km holds n (x, y) pairs. */
uhn_status uhn_layout_set_uabs(uhn_layout* layout, const double* xy_km, size_t n,
                               double altitude_m);
uhn_status uhn_layout_counts(const uhn_layout* layout, size_t* n_mbs,
                             size_t* n_uabs, size_t* n_ue);
uhn_status uhn_layout_save_csv(const uhn_layout* layout, const char* path);
uhn_status uhn_layout_load_csv(const char* path, double mbs_power_dbm,
                               double uabs_power_dbm, uhn_layout** out);
void uhn_layout_free(uhn_layout* layout);

/* Path-loss CDF over every (UE, station) pair, written as loss_db,cum_prob. */
uhn_status uhn_path_loss_cdf_csv(const uhn_layout* layout, const uhn_model* model,
                                 const char* path);

/* ------------------------------------------------------------------ */
/* 5th-percentile spectral-efficiency evaluation. */

typedef struct uhn_report uhn_report;

uhn_status uhn_evaluate(const uhn_layout* layout, const uhn_model* model,
                        const uhn_icic_params* params, uint64_t fading_seed,
                        uhn_report** out);
uhn_status uhn_report_fifth_pse(const uhn_report* report, double* out);
uhn_status uhn_report_n_ue(const uhn_report* report, size_t* out);
uhn_status uhn_report_save_json(const uhn_report* report, const char* path);
uhn_status uhn_report_save_csv(const uhn_report* report, const char* path);
void uhn_report_free(uhn_report* report);

/* ------------------------------------------------------------------ */
/* Brute-force ICIC grid search (fixed UABS deployment). */

typedef struct uhn_icic_grid {
    const double* tau_db;
    size_t n_tau;
    const double* alpha;
    size_t n_alpha;
    const double* rho_db;
    size_t n_rho;
    const double* rho_prime_db;
    size_t n_rho_prime;
} uhn_icic_grid;

/* Evaluates every grid point against one shared fading realization; returns
 * the argmax parameters and (optionally) the winner's report, and writes the
 * full surface CSV when surface_csv_path is non-NULL. */
uhn_status uhn_grid_search(const uhn_layout* layout, const uhn_model* model,
                           const uhn_icic_grid* grid, double beta,
                           uint64_t fading_seed, uhn_icic_params* best,
                           uhn_report** best_report,
                           const char* surface_csv_path);

/* ------------------------------------------------------------------ */
/* Genetic algorithm over UABS positions + ICIC parameters. */

typedef struct uhn_ga_config {
    int population_size, generations, elitism_count;
    double crossover_prob, mutation_prob;
    uint64_t rng_seed, fading_seed;
} uhn_ga_config;

void uhn_ga_config_default(uhn_ga_config* cfg);

typedef struct uhn_param_bounds {
    double tau_lo_db, tau_hi_db;
    double alpha_lo, alpha_hi;
    double rho_lo_db, rho_hi_db;
    double rho_prime_lo_db, rho_prime_hi_db;
} uhn_param_bounds;

void uhn_param_bounds_default(uhn_param_bounds* bounds, int icic_mode);

/* Runs the GA against `base` (its UABS set is ignored; positions come from
 * the chromosome). best_genes, when non-NULL, must hold 2*n_uabs + 4 doubles.
 * history_csv_path / best_json_path are written when non-NULL. */
uhn_status uhn_ga_optimize(const uhn_layout* base, const uhn_model* model,
                           const uhn_ga_config* cfg,
                           const uhn_param_bounds* bounds, int n_uabs,
                           double uabs_altitude_m, double beta,
                           double* best_genes, uhn_icic_params* best_params,
                           uhn_report** best_report,
                           const char* history_csv_path,
                           const char* best_json_path);

/* ------------------------------------------------------------------ */
/* Monte-Carlo experiment harness. */

typedef struct uhn_experiment_spec {
    uhn_scenario_config scenario;
    uhn_model model;
    int deployment; /* UHN_DEPLOY_* */
    int icic_mode;  /* UHN_ICIC_* */
    const int* n_uabs_list;
    size_t n_uabs_count;
    const double* destroy_fractions;
    size_t n_destroy;
    int n_drops;
    const uhn_icic_grid* grid;       /* NULL: mode defaults */
    const uhn_ga_config* ga;         /* NULL: defaults */
    const uhn_param_bounds* bounds;  /* NULL: mode defaults */
    double beta;
    uint64_t master_seed;
    int jobs; /* parallel drop workers; 0 = all cores */
} uhn_experiment_spec;

/* Runs the matrix; writes the per-drop CSV and/or aggregate JSON when the
 * paths are non-NULL. */
uhn_status uhn_run_experiment(const uhn_experiment_spec* spec,
                              const char* per_drop_csv_path,
                              const char* aggregate_json_path);

/* CRE sweep (hex deployment): per tau, the remaining ICIC parameters are
 * grid-optimized; rows are (tau_db, mean_5pse, std_5pse, n_drops). Uses the
 * scalar scenario.n_uabs / scenario.destroy_fraction. */
uhn_status uhn_sweep_cre(const uhn_experiment_spec* spec, const double* tau_db,
                         size_t n_tau, const char* out_csv_path);

#if defined(__cplusplus)
} /* extern "C" */
#endif

#endif /* UHN_H */
