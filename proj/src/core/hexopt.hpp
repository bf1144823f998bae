// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radio.hpp"

namespace uhn {

/// Discretized ICIC parameter domains for the brute-force search.
struct IcicGrid {
    std::vector<double> tau_db;
    std::vector<double> alpha;
    std::vector<double> rho_db;
    std::vector<double> rho_prime_db;

    std::size_t size() const {
        return tau_db.size() * alpha.size() * rho_db.size() * rho_prime_db.size();
    }
};

void validate(const IcicGrid& grid);

/// Default grid steps per mode. FeICIC searches all four parameters; eICIC
/// pins alpha = 0; no-ICIC pins alpha = 1 with degenerate thresholds so that
/// only the CRE bias remains.
IcicGrid default_grid(IcicMode mode);

/// Restriction of `grid` to a single CRE value (for sweeps).
IcicGrid grid_at_tau(const IcicGrid& grid, double tau_db);

struct GridPoint {
    double tau_db, alpha, rho_db, rho_prime_db;
    double fifth_pse;
};

struct GridSearchResult {
    IcicParams best;
    SeReport best_report;
    std::vector<GridPoint> surface;  // lexicographic tau > alpha > rho > rho'
};

/// Evaluates every grid point against one shared fading realization and
/// returns the argmax (ties keep the first point in lexicographic order).
GridSearchResult grid_search_icic(const NetworkLayout& layout,
                                  const PathLossModel& model, const IcicGrid& grid,
                                  double beta, std::uint64_t fading_seed,
                                  const EvalOptions& opts = {});

/// CSV of (tau_db, alpha, rho_db, rho_prime_db, fifth_pse) rows.
void save_surface_csv(const std::vector<GridPoint>& surface, const std::string& path);

}  // namespace uhn
