// SPDX-License-Identifier: Apache-2.0
#include "gaopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "errors.hpp"
#include "json.hpp"

namespace uhn {

void validate(const GaConfig& cfg) {
    if (cfg.population_size < 2)
        throw std::invalid_argument("ga: population_size must be >= 2");
    if (cfg.generations < 1)
        throw std::invalid_argument("ga: generations must be >= 1");
    if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0) ||
        !(cfg.mutation_prob >= 0.0 && cfg.mutation_prob <= 1.0))
        throw std::invalid_argument("ga: probabilities must be in [0,1]");
    if (cfg.elitism_count < 0 || cfg.elitism_count >= cfg.population_size)
        throw std::invalid_argument("ga: elitism_count must be in [0, population_size)");
}

ParamBounds bounds_for_mode(IcicMode mode) {
    ParamBounds b;
    switch (mode) {
        case IcicMode::feicic:
            break;
        case IcicMode::eicic:
            b.alpha = {0.0, 0.0};
            break;
        case IcicMode::none: {
            const double inf = std::numeric_limits<double>::infinity();
            b.alpha = {1.0, 1.0};
            b.rho_db = {inf, inf};
            b.rho_prime_db = {-inf, -inf};
            break;
        }
    }
    return b;
}

std::vector<GeneBounds> chromosome_bounds(int n_uabs, const SimRegion& region,
                                          const ParamBounds& params) {
    if (n_uabs < 0)
        throw std::invalid_argument("chromosome_bounds: n_uabs must be >= 0");
    std::vector<GeneBounds> b;
    b.reserve(2 * static_cast<std::size_t>(n_uabs) + 4);
    for (int i = 0; i < n_uabs; ++i) {
        b.push_back(GeneBounds{0.0, region.width_km});
        b.push_back(GeneBounds{0.0, region.height_km});
    }
    b.push_back(params.tau_db);
    b.push_back(params.alpha);
    b.push_back(params.rho_db);
    b.push_back(params.rho_prime_db);
    for (const auto& g : b)
        if (!(g.lo <= g.hi))
            throw std::invalid_argument("chromosome_bounds: lo must be <= hi");
    return b;
}

namespace {

void check_in_bounds(const Chromosome& c, const std::vector<GeneBounds>& bounds) {
    if (c.genes.size() != bounds.size() || bounds.size() < 4 ||
        (bounds.size() - 4) % 2 != 0)
        throw std::invalid_argument("chromosome: gene/bounds length mismatch");
    for (std::size_t i = 0; i < c.genes.size(); ++i)
        if (!(c.genes[i] >= bounds[i].lo && c.genes[i] <= bounds[i].hi))
            throw std::invalid_argument("chromosome: gene " + std::to_string(i) +
                                        " outside its bounds");
}

IcicParams icic_from_genes(const Chromosome& c, double beta) {
    const std::size_t k = c.genes.size() - 4;
    return IcicParams{c.genes[k], c.genes[k + 1], c.genes[k + 2], c.genes[k + 3],
                      beta};
}

std::vector<Point3> uabs_from_genes(const Chromosome& c, double altitude_m) {
    const int n = c.n_uabs();
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts.push_back(Point3{c.genes[2 * static_cast<std::size_t>(i)],
                             c.genes[2 * static_cast<std::size_t>(i) + 1], altitude_m});
    return pts;
}

}  // namespace

std::pair<NetworkLayout, IcicParams> decode(const Chromosome& c,
                                            const NetworkLayout& base, double beta,
                                            double uabs_altitude_m,
                                            const std::vector<GeneBounds>& bounds) {
    check_in_bounds(c, bounds);
    NetworkLayout layout = with_uabs(base, uabs_from_genes(c, uabs_altitude_m));
    IcicParams params = icic_from_genes(c, beta);
    validate(params);
    return {std::move(layout), params};
}

Chromosome encode(const NetworkLayout& layout, const IcicParams& params) {
    Chromosome c;
    c.genes.reserve(2 * layout.uabs.size() + 4);
    for (const auto& u : layout.uabs) {
        c.genes.push_back(u.x_km);
        c.genes.push_back(u.y_km);
    }
    c.genes.push_back(params.tau_db);
    c.genes.push_back(params.alpha);
    c.genes.push_back(params.rho_db);
    c.genes.push_back(params.rho_prime_db);
    return c;
}

namespace {

/// Fitness machinery with the MBS side of every link budget cached; only the
/// UABS-dependent parts are recomputed per chromosome.
class FitnessEvaluator {
  public:
    FitnessEvaluator(const NetworkLayout& base, const PathLossModel& model,
                     int n_uabs, double uabs_altitude_m, double beta,
                     std::uint64_t fading_seed, const EvalOptions& opts)
        : base_(base),
          model_(model),
          altitude_(uabs_altitude_m),
          beta_(beta),
          opts_(opts),
          n_mbs_(base.mbs.size()),
          n_uabs_(static_cast<std::size_t>(n_uabs)) {
        if (base.ue.empty())
            throw std::invalid_argument("ga: base layout has no UEs");
        if (base.mbs.empty() && n_uabs == 0)
            throw std::invalid_argument("ga: no stations to evaluate");
        const double ue_z = base.ue.front().z_m;
        for (const auto& u : base.ue)
            if (u.z_m != ue_z)
                throw std::invalid_argument("ga: UE heights must be uniform");
        fading_ = FadingField::draw(base.ue.size(), n_mbs_ + n_uabs_, fading_seed);
        mbs_props_ =
            make_station_props(base.mbs, base.mbs_eff_power_dbm, model, ue_z);
        mbs_cache_.reserve(base.ue.size());
        for (std::size_t i = 0; i < base.ue.size(); ++i)
            mbs_cache_.push_back(tier_budget(mbs_props_, base.ue[i], fading_.row(i)));
        rows_.resize(base.ue.size());
    }

    double fitness(const Chromosome& c) {
        const StationProps uabs_props = make_station_props(
            uabs_from_genes(c, altitude_), base_.uabs_eff_power_dbm, model_,
            base_.ue.front().z_m);
        for (std::size_t i = 0; i < base_.ue.size(); ++i) {
            const TierBudget ut =
                tier_budget(uabs_props, base_.ue[i], fading_.row(i) + n_mbs_);
            LinkBudget& b = rows_[i];
            b.ue_index = static_cast<int>(i);
            b.moi_index = mbs_cache_[i].nearest;
            b.uoi_index = ut.nearest;
            b.s_mbs_mw = mbs_cache_[i].s_mw;
            b.s_uabs_mw = ut.s_mw;
            b.z_mbs_other_mw = mbs_cache_[i].z_other_mw;
            b.z_uabs_other_mw = ut.z_other_mw;
            b.z_usf_mw = b.z_mbs_other_mw + b.z_uabs_other_mw;
            b.z_csf_mw = b.z_usf_mw;
        }
        return score_5pse(rows_, n_mbs_, n_uabs_, icic_from_genes(c, beta_), opts_,
                          scratch_);
    }

    SeReport full_report(const Chromosome& c) {
        fitness(c);  // refreshes rows_ for this chromosome
        ScoreScratch s;
        classify_and_score(rows_, n_mbs_, n_uabs_, icic_from_genes(c, beta_), opts_,
                           s);
        return make_report(s, icic_from_genes(c, beta_));
    }

  private:
    const NetworkLayout& base_;
    const PathLossModel& model_;
    double altitude_;
    double beta_;
    EvalOptions opts_;
    std::size_t n_mbs_, n_uabs_;
    FadingField fading_;
    StationProps mbs_props_;
    std::vector<TierBudget> mbs_cache_;
    std::vector<LinkBudget> rows_;
    ScoreScratch scratch_;
};

int roulette_pick(Xoshiro256& rng, const std::vector<double>& fits) {
    const auto [mn_it, mx_it] = std::minmax_element(fits.begin(), fits.end());
    const double mn = *mn_it, mx = *mx_it;
    if (!(mx > mn)) return static_cast<int>(rng.below(fits.size()));
    const double eps = (mx - mn) * 1e-6;
    double total = 0.0;
    for (double f : fits) total += (f - mn) + eps;
    const double u = rng.uniform(0.0, total);
    double acc = 0.0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        acc += (fits[i] - mn) + eps;
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(fits.size()) - 1;
}

}  // namespace

GaResult ga_optimize(const NetworkLayout& base, const PathLossModel& model,
                     const GaConfig& cfg, const std::vector<GeneBounds>& bounds,
                     double beta, double uabs_altitude_m, const EvalOptions& opts) {
    validate(cfg);
    validate(model);
    if (bounds.size() < 4 || (bounds.size() - 4) % 2 != 0)
        throw std::invalid_argument("ga: bounds must cover 2*n_uabs + 4 genes");
    for (const auto& b : bounds)
        if (!(b.lo <= b.hi)) throw std::invalid_argument("ga: lo must be <= hi");
    const int n_uabs = static_cast<int>((bounds.size() - 4) / 2);

    FitnessEvaluator eval(base, model, n_uabs, uabs_altitude_m, beta,
                          cfg.fading_seed, opts);
    Xoshiro256 rng(cfg.rng_seed);
    const std::size_t n_genes = bounds.size();
    const std::size_t pop_size = static_cast<std::size_t>(cfg.population_size);

    // Frozen genes (lo == hi) never consume randomness; this keeps runs with
    // pinned parameters deterministic relative to each other and avoids
    // 0 * inf when a bound is infinite.
    auto sample_gene = [&](std::size_t g) {
        return bounds[g].lo == bounds[g].hi ? bounds[g].lo
                                            : rng.uniform(bounds[g].lo, bounds[g].hi);
    };

    std::vector<Chromosome> pop(pop_size);
    for (auto& c : pop) {
        c.genes.resize(n_genes);
        for (std::size_t g = 0; g < n_genes; ++g) c.genes[g] = sample_gene(g);
    }

    std::vector<double> fits(pop_size);
    auto evaluate_all = [&] {
        for (std::size_t i = 0; i < pop_size; ++i) fits[i] = eval.fitness(pop[i]);
    };

    GaResult res;
    double best_fit = -std::numeric_limits<double>::infinity();
    auto track_best = [&] {
        for (std::size_t i = 0; i < pop_size; ++i)
            if (fits[i] > best_fit) {
                best_fit = fits[i];
                res.best = pop[i];
            }
    };
    auto push_history = [&](int gen) {
        const double mx = *std::max_element(fits.begin(), fits.end());
        const double mean =
            std::accumulate(fits.begin(), fits.end(), 0.0) / static_cast<double>(pop_size);
        res.history.push_back(GaHistoryRow{gen, mx, mean});
    };

    evaluate_all();
    track_best();
    push_history(1);

    for (int gen = 2; gen <= cfg.generations; ++gen) {
        std::vector<std::size_t> order(pop_size);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fits[a] > fits[b]; });

        std::vector<Chromosome> next;
        next.reserve(pop_size);
        for (int e = 0; e < cfg.elitism_count; ++e)
            next.push_back(pop[order[static_cast<std::size_t>(e)]]);

        while (next.size() < pop_size) {
            const auto p1 = static_cast<std::size_t>(roulette_pick(rng, fits));
            const auto p2 = static_cast<std::size_t>(roulette_pick(rng, fits));
            Chromosome c1 = pop[p1];
            Chromosome c2 = pop[p2];
            if (rng.uniform01() < cfg.crossover_prob) {
                for (std::size_t g = 0; g < n_genes; ++g) {
                    if (bounds[g].lo == bounds[g].hi) continue;
                    const double lam = rng.uniform01();
                    const double a = pop[p1].genes[g], b = pop[p2].genes[g];
                    c1.genes[g] = std::clamp(lam * a + (1.0 - lam) * b, bounds[g].lo,
                                             bounds[g].hi);
                    c2.genes[g] = std::clamp((1.0 - lam) * a + lam * b, bounds[g].lo,
                                             bounds[g].hi);
                }
            }
            for (Chromosome* c : {&c1, &c2})
                for (std::size_t g = 0; g < n_genes; ++g) {
                    if (bounds[g].lo == bounds[g].hi) continue;
                    if (rng.uniform01() < cfg.mutation_prob)
                        c->genes[g] = rng.uniform(bounds[g].lo, bounds[g].hi);
                }
            next.push_back(std::move(c1));
            if (next.size() < pop_size) next.push_back(std::move(c2));
        }

        pop = std::move(next);
        evaluate_all();
        track_best();
        push_history(gen);
    }

    res.best_params = icic_from_genes(res.best, beta);
    res.best_report = eval.full_report(res.best);
    return res;
}

void save_history_csv(const std::vector<GaHistoryRow>& history,
                      const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "generation,best_5pse_bpshz,mean_5pse_bpshz\n";
    char buf[120];
    for (const auto& row : history) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", row.generation, row.best,
                      row.mean);
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

void save_best_json(const GaResult& result, double beta, const std::string& path) {
    nlohmann::json j;
    j["schema"] = 1;
    j["n_uabs"] = result.best.n_uabs();
    nlohmann::json genes = nlohmann::json::array();
    for (double g : result.best.genes) genes.push_back(json_num(g));
    j["genes"] = genes;
    j["params"] = {{"tau_db", json_num(result.best_params.tau_db)},
                   {"alpha", result.best_params.alpha},
                   {"rho_db", json_num(result.best_params.rho_db)},
                   {"rho_prime_db", json_num(result.best_params.rho_prime_db)},
                   {"beta", beta}};
    j["fifth_percentile_se_bpshz"] = result.best_report.fifth_percentile_se;
    j["generations"] = result.history.size();
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
    if (!f) throw io_error("write failed: " + path);
}

}  // namespace uhn
