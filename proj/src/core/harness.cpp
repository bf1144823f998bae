// SPDX-License-Identifier: Apache-2.0
#include "harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "errors.hpp"
#include "json.hpp"

namespace uhn {

const char* to_string(Deployment d) {
    return d == Deployment::hex ? "hex" : "ga";
}

Deployment deployment_from_string(const std::string& s) {
    if (s == "hex") return Deployment::hex;
    if (s == "ga") return Deployment::ga;
    throw std::invalid_argument("unknown deployment: " + s);
}

void validate(const ExperimentSpec& spec) {
    validate(spec.scenario);
    validate(spec.model);
    validate(spec.ga);
    if (spec.n_drops < 1)
        throw std::invalid_argument("experiment: n_drops must be >= 1");
    if (spec.n_uabs_list.empty() || spec.destroy_fractions.empty())
        throw std::invalid_argument("experiment: sweep lists must be non-empty");
    for (int n : spec.n_uabs_list)
        if (n < 0) throw std::invalid_argument("experiment: n_uabs must be >= 0");
    for (double f : spec.destroy_fractions)
        if (!(f >= 0.0 && f <= 1.0))
            throw std::invalid_argument("experiment: destroy fraction must be in [0,1]");
    if (!(spec.beta > 0.0 && spec.beta < 1.0))
        throw std::invalid_argument("experiment: beta must be in (0,1)");
}

ExperimentSpec desk_preset() {
    ExperimentSpec s;
    s.scenario.region = SimRegion{5.0, 5.0};
    s.scenario.n_uabs = 4;
    s.scenario.destroy_fraction = 0.5;
    s.n_uabs_list = {4, 16};
    s.destroy_fractions = {0.5, 0.975};
    s.n_drops = 20;
    return s;
}

ExperimentSpec paper_preset() {
    ExperimentSpec s;
    s.scenario.region = SimRegion{10.0, 10.0};
    s.scenario.n_uabs = 4;
    s.scenario.destroy_fraction = 0.5;
    s.n_uabs_list = {4, 16, 36, 60};
    s.destroy_fractions = {0.5, 0.975};
    s.n_drops = 100;
    return s;
}

DropSeeds drop_seeds(std::uint64_t master_seed, int drop) {
    const auto d = static_cast<std::uint64_t>(drop);
    return DropSeeds{derive_seed(master_seed, d, 1), derive_seed(master_seed, d, 2),
                     derive_seed(master_seed, d, 3), derive_seed(master_seed, d, 4)};
}

namespace {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

IcicGrid pin_grid(IcicMode mode, IcicGrid grid) {
    const IcicGrid defaults = default_grid(mode);
    if (grid.tau_db.empty()) grid.tau_db = defaults.tau_db;
    if (grid.alpha.empty()) grid.alpha = defaults.alpha;
    if (grid.rho_db.empty()) grid.rho_db = defaults.rho_db;
    if (grid.rho_prime_db.empty()) grid.rho_prime_db = defaults.rho_prime_db;
    switch (mode) {
        case IcicMode::feicic:
            break;
        case IcicMode::eicic:
            grid.alpha = {0.0};
            break;
        case IcicMode::none:
            grid.alpha = defaults.alpha;
            grid.rho_db = defaults.rho_db;
            grid.rho_prime_db = defaults.rho_prime_db;
            break;
    }
    return grid;
}

ParamBounds pin_param_bounds(IcicMode mode, ParamBounds b) {
    const ParamBounds pins = bounds_for_mode(mode);
    switch (mode) {
        case IcicMode::feicic:
            break;
        case IcicMode::eicic:
            b.alpha = pins.alpha;
            break;
        case IcicMode::none:
            b.alpha = pins.alpha;
            b.rho_db = pins.rho_db;
            b.rho_prime_db = pins.rho_prime_db;
            break;
    }
    return b;
}

/// Base MBS+UE realization of one drop; identical across cells, deployments
/// and modes for a given master seed.
NetworkLayout drop_base_layout(const ExperimentSpec& spec, double destroy_fraction,
                               const DropSeeds& seeds) {
    ScenarioConfig cfg = spec.scenario;
    cfg.rng_seed = seeds.layout;
    const NetworkLayout base = generate_ppp_layout(cfg);
    return destroy_mbs(base, destroy_fraction, seeds.destroy);
}

DropResult run_one_drop(const ExperimentSpec& spec, int n_uabs,
                        double destroy_fraction, int drop) {
    const DropSeeds seeds = drop_seeds(spec.master_seed, drop);
    const NetworkLayout destroyed = drop_base_layout(spec, destroy_fraction, seeds);

    DropResult out;
    out.drop_id = drop;
    out.n_uabs = n_uabs;
    out.destroy_fraction = destroy_fraction;

    if (spec.deployment == Deployment::hex) {
        NetworkLayout layout =
            n_uabs > 0
                ? with_uabs(destroyed, hex_grid_positions(n_uabs, spec.scenario.region,
                                                          spec.scenario.uabs_altitude_m))
                : destroyed;
        const IcicGrid grid = pin_grid(spec.icic_mode, spec.grid);
        const auto t0 = std::chrono::steady_clock::now();
        GridSearchResult r = grid_search_icic(layout, spec.model, grid, spec.beta,
                                              seeds.fading, spec.eval);
        out.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.best_params = r.best;
        out.fifth_pse = r.best_report.fifth_percentile_se;
    } else {
        GaConfig ga = spec.ga;
        ga.rng_seed = seeds.ga;
        ga.fading_seed = seeds.fading;
        const auto bounds =
            chromosome_bounds(n_uabs, spec.scenario.region,
                              pin_param_bounds(spec.icic_mode, spec.ga_bounds));
        const auto t0 = std::chrono::steady_clock::now();
        GaResult r = ga_optimize(destroyed, spec.model, ga, bounds, spec.beta,
                                 spec.scenario.uabs_altitude_m, spec.eval);
        out.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.best_params = r.best_params;
        out.fifth_pse = r.best_report.fifth_percentile_se;
    }
    return out;
}

IcicParams modal_params(const std::vector<DropResult>& drops, double beta) {
    std::map<std::array<double, 4>, int> counts;
    for (const auto& d : drops)
        ++counts[{d.best_params.tau_db, d.best_params.alpha, d.best_params.rho_db,
                  d.best_params.rho_prime_db}];
    std::array<double, 4> best{};
    int best_count = 0;
    for (const auto& [tuple, count] : counts)
        if (count > best_count) {  // map order makes ties lexicographic-smallest
            best_count = count;
            best = tuple;
        }
    return IcicParams{best[0], best[1], best[2], best[3], beta};
}

CellResult aggregate_cell(int n_uabs, double fraction, std::vector<DropResult> drops,
                          double beta) {
    CellResult cell;
    cell.n_uabs = n_uabs;
    cell.destroy_fraction = fraction;
    cell.drops = std::move(drops);
    const double n = static_cast<double>(cell.drops.size());
    double sum = 0.0, sum_t = 0.0;
    for (const auto& d : cell.drops) {
        sum += d.fifth_pse;
        sum_t += d.elapsed_s;
    }
    cell.mean_5pse = sum / n;
    cell.mean_elapsed_s = sum_t / n;
    double ss = 0.0;
    for (const auto& d : cell.drops) {
        const double dx = d.fifth_pse - cell.mean_5pse;
        ss += dx * dx;
    }
    cell.std_5pse = std::sqrt(ss / n);
    cell.modal_params = modal_params(cell.drops, beta);
    return cell;
}

}  // namespace

AggregateResult run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    AggregateResult agg;
    agg.deployment = spec.deployment;
    agg.icic_mode = spec.icic_mode;

    for (int n_uabs : spec.n_uabs_list) {
        for (double fraction : spec.destroy_fractions) {
            std::vector<DropResult> drops(static_cast<std::size_t>(spec.n_drops));
            parallel_for(drops.size(), spec.jobs, [&](std::size_t i) {
                try {
                    drops[i] = run_one_drop(spec, n_uabs, fraction, static_cast<int>(i));
                } catch (const std::exception& e) {
                    throw std::runtime_error("drop " + std::to_string(i) + " (n_uabs=" +
                                             std::to_string(n_uabs) +
                                             ", destroy=" + std::to_string(fraction) +
                                             "): " + e.what());
                }
            });
            agg.cells.push_back(aggregate_cell(n_uabs, fraction, std::move(drops),
                                               spec.beta));
        }
    }
    return agg;
}

std::vector<SweepRow> sweep_cre(const ExperimentSpec& spec,
                                const std::vector<double>& tau_values_db) {
    validate(spec);
    if (spec.deployment != Deployment::hex)
        throw std::invalid_argument("sweep_cre: CRE sweeps use the hex deployment");
    if (tau_values_db.empty())
        throw std::invalid_argument("sweep_cre: tau list must be non-empty");

    IcicGrid grid = pin_grid(spec.icic_mode, spec.grid);
    grid.tau_db = tau_values_db;

    // best_per_drop[tau][drop]
    std::vector<std::vector<double>> best(tau_values_db.size());
    for (auto& v : best) v.resize(static_cast<std::size_t>(spec.n_drops));

    parallel_for(static_cast<std::size_t>(spec.n_drops), spec.jobs, [&](std::size_t d) {
        try {
            const DropSeeds seeds = drop_seeds(spec.master_seed, static_cast<int>(d));
            const NetworkLayout destroyed =
                drop_base_layout(spec, spec.scenario.destroy_fraction, seeds);
            NetworkLayout layout =
                spec.scenario.n_uabs > 0
                    ? with_uabs(destroyed,
                                hex_grid_positions(spec.scenario.n_uabs,
                                                   spec.scenario.region,
                                                   spec.scenario.uabs_altitude_m))
                    : destroyed;
            // One grid search over all tau values: every point shares the
            // drop's fading realization, so per-tau maxima are comparable.
            GridSearchResult r = grid_search_icic(layout, spec.model, grid, spec.beta,
                                                  seeds.fading, spec.eval);
            for (std::size_t t = 0; t < tau_values_db.size(); ++t) {
                double mx = -std::numeric_limits<double>::infinity();
                for (const auto& p : r.surface)
                    if (p.tau_db == tau_values_db[t]) mx = std::max(mx, p.fifth_pse);
                best[t][d] = mx;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("drop " + std::to_string(d) + ": " + e.what());
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(tau_values_db.size());
    for (std::size_t t = 0; t < tau_values_db.size(); ++t) {
        SweepRow row;
        row.tau_db = tau_values_db[t];
        row.n_drops = spec.n_drops;
        double sum = 0.0;
        for (double v : best[t]) sum += v;
        row.mean_5pse = sum / static_cast<double>(spec.n_drops);
        double ss = 0.0;
        for (double v : best[t]) ss += (v - row.mean_5pse) * (v - row.mean_5pse);
        row.std_5pse = std::sqrt(ss / static_cast<double>(spec.n_drops));
        rows.push_back(row);
    }
    return rows;
}

void save_per_drop_csv(const AggregateResult& agg, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "drop_id,n_uabs,destroy_fraction,mode,tau_db,alpha,rho_db,rho_prime_db,"
         "fifth_pse,elapsed_s\n";
    char buf[280];
    for (const auto& cell : agg.cells)
        for (const auto& d : cell.drops) {
            std::snprintf(buf, sizeof buf,
                          "%d,%d,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          d.drop_id, d.n_uabs, d.destroy_fraction,
                          to_string(agg.icic_mode), d.best_params.tau_db,
                          d.best_params.alpha, d.best_params.rho_db,
                          d.best_params.rho_prime_db, d.fifth_pse, d.elapsed_s);
            f << buf;
        }
    if (!f) throw io_error("write failed: " + path);
}

namespace {

nlohmann::json json_num(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

void save_aggregate_json(const AggregateResult& agg, const std::string& path) {
    nlohmann::json j;
    j["schema"] = 1;
    j["deployment"] = to_string(agg.deployment);
    j["icic_mode"] = to_string(agg.icic_mode);
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : agg.cells) {
        cells.push_back({{"n_uabs", c.n_uabs},
                         {"destroy_fraction", c.destroy_fraction},
                         {"n_drops", c.drops.size()},
                         {"mean_5pse_bpshz", c.mean_5pse},
                         {"std_5pse_bpshz", c.std_5pse},
                         {"mean_elapsed_s", c.mean_elapsed_s},
                         {"modal_params",
                          {{"tau_db", json_num(c.modal_params.tau_db)},
                           {"alpha", c.modal_params.alpha},
                           {"rho_db", json_num(c.modal_params.rho_db)},
                           {"rho_prime_db", json_num(c.modal_params.rho_prime_db)},
                           {"beta", c.modal_params.beta}}}});
    }
    j["cells"] = cells;
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
    if (!f) throw io_error("write failed: " + path);
}

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "tau_db,mean_5pse_bpshz,std_5pse_bpshz,n_drops\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", r.tau_db, r.mean_5pse,
                      r.std_5pse, r.n_drops);
        f << buf;
    }
    if (!f) throw io_error("write failed: " + path);
}

}  // namespace uhn
