// SPDX-License-Identifier: Apache-2.0
#include "propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "errors.hpp"

namespace uhn {

void validate(const PathLossModel& model) {
    if (model.variant == PlmVariant::splm && !(model.delta > 0.0))
        throw std::invalid_argument("model: SPLM exponent must be positive");
    if (model.variant == PlmVariant::ohplm &&
        !(model.fc_mhz >= 150.0 && model.fc_mhz <= 1500.0))
        throw std::invalid_argument("model: OHPLM carrier must be in 150..1500 MHz");
    if (model.max_pl_db < 0.0)
        throw std::invalid_argument("model: max_pl_db must be positive (or 0 for default)");
}

double splm_path_loss_db(double d_m, double delta) {
    if (!(d_m > 0.0))
        throw std::invalid_argument("splm_path_loss: distance must be positive");
    return 10.0 * delta * std::log10(d_m);
}

OhplmFactors ohplm_factors(double fc_mhz, double h_bs_m, double h_ue_m,
                           bool standard_ue_correction) {
    if (!(fc_mhz > 0.0) || !(h_bs_m > 0.0) || !(h_ue_m > 0.0))
        throw std::invalid_argument("ohplm_factors: inputs must be positive");
    if (fc_mhz < 150.0 || fc_mhz > 1500.0 || h_bs_m < 30.0 || h_bs_m > 200.0 ||
        h_ue_m < 1.0 || h_ue_m > 10.0) {
        static bool warned = false;
        if (!warned) {
            std::cerr << "warning: Okumura-Hata factors requested outside the "
                         "model validity ranges; extrapolating\n";
            warned = true;
        }
    }

    const double lf = std::log10(fc_mhz);
    OhplmFactors f;
    f.a_hue = standard_ue_correction
                  ? (1.1 * lf - 0.7) * h_ue_m - (1.56 * lf - 0.8)
                  : 1.1 * lf - 0.7 * h_ue_m - 1.56 * lf - 0.8;
    f.a_factor = 69.55 + 26.16 * lf - 13.82 * std::log10(h_bs_m) - f.a_hue;
    f.b_factor = 44.9 - 6.55 * std::log10(h_bs_m);
    const double lq = std::log10(fc_mhz / 28.0);
    f.c_factor = -2.0 * lq * lq - 5.4;
    return f;
}

double ohplm_path_loss_db(double d_km, const OhplmFactors& f) {
    if (!(d_km > 0.0))
        throw std::invalid_argument("ohplm_path_loss: distance must be positive");
    const double pl = f.a_factor + f.b_factor * std::log10(d_km) + f.c_factor;
    return std::max(pl, 0.0);
}

double rsrp_linear_mw(double eff_power_dbm, double pl_db, FadingDraw fading,
                      double max_pl_db) {
    if (!(fading.h > 0.0))
        throw std::invalid_argument("rsrp: fading draw must be positive");
    if (pl_db > max_pl_db) return 0.0;
    return std::pow(10.0, (eff_power_dbm - pl_db) / 10.0) * fading.h;
}

FadingDraw draw_fading(Xoshiro256& rng) { return FadingDraw{rng.exponential()}; }

double EmpiricalCdf::quantile(double p) const {
    if (sorted_losses_db.empty())
        throw std::invalid_argument("cdf: empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("cdf: p must be in [0,1]");
    const std::size_t n = sorted_losses_db.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (k == 0) k = 1;
    return sorted_losses_db[k - 1];
}

void EmpiricalCdf::save_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "loss_db,cum_prob\n";
    char buf[80];
    const double n = static_cast<double>(sorted_losses_db.size());
    for (std::size_t i = 0; i < sorted_losses_db.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sorted_losses_db[i],
                      static_cast<double>(i + 1) / n);
        f << buf;
    }
    if (!f) throw io_error("write failed: " + path);
}

EmpiricalCdf path_loss_cdf(const NetworkLayout& layout, const PathLossModel& model) {
    validate(model);
    if (layout.ue.empty() || layout.n_stations() == 0)
        throw std::invalid_argument("path_loss_cdf: layout needs UEs and stations");

    EmpiricalCdf cdf;
    cdf.sorted_losses_db.reserve(layout.ue.size() * layout.n_stations());
    const bool splm = model.variant == PlmVariant::splm;

    // Per-tier Hata factors; station heights are uniform within a tier.
    OhplmFactors f_mbs, f_uabs;
    if (!splm) {
        const double h_ue = layout.ue.front().z_m;
        if (!layout.mbs.empty())
            f_mbs = ohplm_factors(model.fc_mhz, layout.mbs.front().z_m, h_ue,
                                  model.hata_standard_ue_correction);
        if (!layout.uabs.empty())
            f_uabs = ohplm_factors(model.fc_mhz, layout.uabs.front().z_m, h_ue,
                                   model.hata_standard_ue_correction);
    }

    for (const auto& u : layout.ue) {
        for (const auto& s : layout.mbs)
            cdf.sorted_losses_db.push_back(
                splm ? splm_path_loss_db(dist3_m(u, s), model.delta)
                     : ohplm_path_loss_db(std::max(horizontal_dist_m(u, s), 1e-3) / 1000.0,
                                          f_mbs));
        for (const auto& s : layout.uabs)
            cdf.sorted_losses_db.push_back(
                splm ? splm_path_loss_db(dist3_m(u, s), model.delta)
                     : ohplm_path_loss_db(std::max(horizontal_dist_m(u, s), 1e-3) / 1000.0,
                                          f_uabs));
    }
    std::sort(cdf.sorted_losses_db.begin(), cdf.sorted_losses_db.end());
    return cdf;
}

}  // namespace uhn
