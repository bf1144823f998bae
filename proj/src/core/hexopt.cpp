// SPDX-License-Identifier: Apache-2.0
#include "hexopt.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "errors.hpp"

namespace uhn {

void validate(const IcicGrid& grid) {
    if (grid.tau_db.empty() || grid.alpha.empty() || grid.rho_db.empty() ||
        grid.rho_prime_db.empty())
        throw std::invalid_argument("icic grid: every axis needs at least one value");
    for (double a : grid.alpha)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("icic grid: alpha values must be in [0,1]");
}

IcicGrid default_grid(IcicMode mode) {
    IcicGrid g;
    g.tau_db = {0.0, 3.0, 6.0, 9.0, 12.0, 15.0};
    switch (mode) {
        case IcicMode::feicic:
            g.alpha = {0.0, 0.25, 0.5, 0.75, 1.0};
            g.rho_db = {20.0, 25.0, 30.0, 35.0, 40.0};
            g.rho_prime_db = {-20.0, -15.0, -10.0, -5.0};
            break;
        case IcicMode::eicic:
            g.alpha = {0.0};
            g.rho_db = {20.0, 25.0, 30.0, 35.0, 40.0};
            g.rho_prime_db = {-20.0, -15.0, -10.0, -5.0};
            break;
        case IcicMode::none:
            g.alpha = {1.0};
            g.rho_db = {std::numeric_limits<double>::infinity()};
            g.rho_prime_db = {-std::numeric_limits<double>::infinity()};
            break;
    }
    return g;
}

IcicGrid grid_at_tau(const IcicGrid& grid, double tau_db) {
    IcicGrid g = grid;
    g.tau_db = {tau_db};
    return g;
}

GridSearchResult grid_search_icic(const NetworkLayout& layout,
                                  const PathLossModel& model, const IcicGrid& grid,
                                  double beta, std::uint64_t fading_seed,
                                  const EvalOptions& opts) {
    validate(grid);
    validate(model);
    if (layout.ue.empty())
        throw std::invalid_argument("grid search: layout has no UEs");

    // One fading realization shared by every grid point keeps the points
    // comparable; Monte-Carlo averaging happens a level up.
    const FadingField fading =
        FadingField::draw(layout.ue.size(), layout.n_stations(), fading_seed);
    const auto rows = build_link_budget_table(layout, model, fading);

    GridSearchResult res;
    res.surface.reserve(grid.size());
    ScoreScratch scratch;
    double best = -std::numeric_limits<double>::infinity();
    for (double tau : grid.tau_db)
        for (double alpha : grid.alpha)
            for (double rho : grid.rho_db)
                for (double rho_prime : grid.rho_prime_db) {
                    const IcicParams p{tau, alpha, rho, rho_prime, beta};
                    const double v = score_5pse(rows, layout.mbs.size(),
                                                layout.uabs.size(), p, opts, scratch);
                    res.surface.push_back(GridPoint{tau, alpha, rho, rho_prime, v});
                    if (v > best) {
                        best = v;
                        res.best = p;
                    }
                }

    ScoreScratch full;
    classify_and_score(rows, layout.mbs.size(), layout.uabs.size(), res.best, opts,
                       full);
    res.best_report = make_report(full, res.best);
    return res;
}

void save_surface_csv(const std::vector<GridPoint>& surface, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "tau_db,alpha,rho_db,rho_prime_db,fifth_pse_bpshz\n";
    char buf[160];
    for (const auto& p : surface) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.tau_db,
                      p.alpha, p.rho_db, p.rho_prime_db, p.fifth_pse);
        f << buf;
    }
    if (!f) throw io_error("write failed: " + path);
}

}  // namespace uhn
