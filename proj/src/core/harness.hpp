// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaopt.hpp"
#include "hexopt.hpp"
#include "radio.hpp"
#include "scenario.hpp"

namespace uhn {

enum class Deployment { hex, ga };

const char* to_string(Deployment d);
Deployment deployment_from_string(const std::string& s);

/// One Monte-Carlo experiment matrix: scenario x model x deployment x mode,
/// swept over UABS counts and destruction levels. Per-drop seeds derive from
/// master_seed and the drop number only, so hex and GA runs with the same
/// master seed see identical layouts and fading (matched drops).
struct ExperimentSpec {
    ScenarioConfig scenario;
    PathLossModel model;
    Deployment deployment = Deployment::hex;
    IcicMode icic_mode = IcicMode::feicic;
    std::vector<int> n_uabs_list = {4};
    std::vector<double> destroy_fractions = {0.5};
    int n_drops = 20;
    IcicGrid grid;        // empty axes are filled from default_grid(icic_mode)
    GaConfig ga;
    ParamBounds ga_bounds;
    double beta = 0.5;
    std::uint64_t master_seed = 1;
    int jobs = 1;  // parallel drop workers; 0 selects the hardware concurrency
    EvalOptions eval;
};

void validate(const ExperimentSpec& spec);

/// Desk-scale preset: 5x5 km, 20 drops, 4/16 UABSs. Runs in minutes.
ExperimentSpec desk_preset();
/// Full-scale preset: 10x10 km, 100 drops, up to 60 UABSs. Slow.
ExperimentSpec paper_preset();

struct DropResult {
    int drop_id = 0;
    int n_uabs = 0;
    double destroy_fraction = 0.0;
    IcicParams best_params;
    double fifth_pse = 0.0;
    double elapsed_s = 0.0;  // wall clock around the optimizer call only
};

struct CellResult {
    int n_uabs = 0;
    double destroy_fraction = 0.0;
    double mean_5pse = 0.0;
    double std_5pse = 0.0;
    double mean_elapsed_s = 0.0;
    IcicParams modal_params;  // most frequent best tuple across drops
    std::vector<DropResult> drops;
};

struct AggregateResult {
    Deployment deployment = Deployment::hex;
    IcicMode icic_mode = IcicMode::feicic;
    std::vector<CellResult> cells;
};

/// Runs the full matrix. A failing drop aborts with its index in the error.
AggregateResult run_experiment(const ExperimentSpec& spec);

/// Per-drop seed derivation, shared by run_experiment and sweep_cre.
struct DropSeeds {
    std::uint64_t layout, destroy, fading, ga;
};
DropSeeds drop_seeds(std::uint64_t master_seed, int drop);

struct SweepRow {
    double tau_db = 0.0;
    double mean_5pse = 0.0;
    double std_5pse = 0.0;
    int n_drops = 0;
};

/// CRE sweep over a hex deployment: for every tau the remaining parameters
/// are grid-optimized, all against shared per-drop fading. Uses the scalar
/// scenario.n_uabs / scenario.destroy_fraction.
std::vector<SweepRow> sweep_cre(const ExperimentSpec& spec,
                                const std::vector<double>& tau_values_db);

void save_per_drop_csv(const AggregateResult& agg, const std::string& path);
void save_aggregate_json(const AggregateResult& agg, const std::string& path);
void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace uhn
