// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "radio.hpp"

namespace uhn {

/// Closed gene interval. lo == hi freezes the gene.
struct GeneBounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// Search vector: [x1, y1, ..., xN, yN, tau_db, alpha, rho_db, rho_prime_db].
/// Positions are in km; the duty cycle beta is fixed, not searched.
struct Chromosome {
    std::vector<double> genes;

    int n_uabs() const { return static_cast<int>((genes.size() - 4) / 2); }
};

struct GaConfig {
    int population_size = 60;
    int generations = 100;
    double crossover_prob = 0.7;
    double mutation_prob = 0.1;
    int elitism_count = 1;
    std::uint64_t rng_seed = 1;
    std::uint64_t fading_seed = 1;  // one realization fixed for the whole run
};

void validate(const GaConfig& cfg);

/// Box bounds of the four ICIC genes.
struct ParamBounds {
    GeneBounds tau_db{0.0, 15.0};
    GeneBounds alpha{0.0, 1.0};
    GeneBounds rho_db{20.0, 40.0};
    GeneBounds rho_prime_db{-20.0, -5.0};
};

/// Mode pins expressed as degenerate bounds.
ParamBounds bounds_for_mode(IcicMode mode);

/// Full per-gene bounds for n_uabs UABSs inside `region`.
std::vector<GeneBounds> chromosome_bounds(int n_uabs, const SimRegion& region,
                                          const ParamBounds& params);

/// Chromosome -> (layout with replaced UABS set, ICIC parameters). Throws on
/// out-of-bounds genes.
std::pair<NetworkLayout, IcicParams> decode(const Chromosome& c,
                                            const NetworkLayout& base, double beta,
                                            double uabs_altitude_m,
                                            const std::vector<GeneBounds>& bounds);

/// Inverse of decode (beta is dropped; it is not a gene).
Chromosome encode(const NetworkLayout& layout, const IcicParams& params);

struct GaHistoryRow {
    int generation;   // 1-based; generation 1 is the initial population
    double best;      // best fitness in the population (equals best-so-far)
    double mean;      // population mean fitness
};

struct GaResult {
    Chromosome best;
    IcicParams best_params;
    SeReport best_report;
    std::vector<GaHistoryRow> history;
};

/// Generational real-coded GA over UABS positions and ICIC parameters with
/// the 5pSE as fitness: roulette-wheel selection on shifted fitness,
/// arithmetic uniform crossover, per-gene uniform-resample mutation, and
/// elitism. Fitness uses one fading realization for the whole run, so it is
/// a deterministic function of the chromosome.
GaResult ga_optimize(const NetworkLayout& base, const PathLossModel& model,
                     const GaConfig& cfg, const std::vector<GeneBounds>& bounds,
                     double beta, double uabs_altitude_m,
                     const EvalOptions& opts = {});

/// CSV of (generation, best_fitness, mean_fitness) rows.
void save_history_csv(const std::vector<GaHistoryRow>& history,
                      const std::string& path);

/// JSON with the winning genes, decoded parameters, and achieved 5pSE.
void save_best_json(const GaResult& result, double beta, const std::string& path);

}  // namespace uhn
