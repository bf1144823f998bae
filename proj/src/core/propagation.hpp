// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "rng.hpp"
#include "scenario.hpp"

namespace uhn {

enum class PlmVariant { splm, ohplm };

/// Path-loss model selection. A link whose loss exceeds max_pl_db contributes
/// zero received power, both as a serving candidate and as an interferer.
struct PathLossModel {
    PlmVariant variant = PlmVariant::splm;
    double delta = 4.0;    // SPLM path-loss exponent
    double fc_mhz = 763.0; // OHPLM carrier frequency
    double max_pl_db = 0.0; // 0 selects the variant default (160 / 225 dB)
    // Okumura-Hata UE antenna correction: false evaluates
    //   a(h_ue) = 1.1 log10(fc) - 0.7 h_ue - 1.56 log10(fc) - 0.8,
    // true the textbook small/medium-city form
    //   a(h_ue) = (1.1 log10(fc) - 0.7) h_ue - (1.56 log10(fc) - 0.8).
    bool hata_standard_ue_correction = false;

    double resolved_max_pl_db() const {
        if (max_pl_db > 0.0) return max_pl_db;
        return variant == PlmVariant::splm ? 160.0 : 225.0;
    }
};

void validate(const PathLossModel& model);

/// One Rayleigh-fading power draw, H ~ Exp(1).
struct FadingDraw {
    double h = 1.0;
};

/// Okumura-Hata suburban curve-fit factors for one (fc, h_bs, h_ue) triple.
struct OhplmFactors {
    double a_factor = 0.0; // dB
    double b_factor = 0.0; // dB per decade of distance
    double c_factor = 0.0; // dB
    double a_hue = 0.0;    // UE antenna-height correction, dB
};

/// Simplified model: 10 * delta * log10(d_m). d_m is the 3-D distance in m.
double splm_path_loss_db(double d_m, double delta);

/// Suburban Okumura-Hata factors. Inputs outside the model's validity ranges
/// (fc 150..1500 MHz, h_bs 30..200 m, h_ue 1..10 m) are accepted with a
/// one-time stderr warning; non-positive inputs throw.
OhplmFactors ohplm_factors(double fc_mhz, double h_bs_m, double h_ue_m,
                           bool standard_ue_correction = false);

/// A + B log10(d_km) + C, floored at 0 dB (the formula extrapolates below
/// 1 km where it can go negative). d_km is the horizontal distance in km.
double ohplm_path_loss_db(double d_km, const OhplmFactors& f);

/// Linear-domain received power in mW: 10^(P/10) * h / 10^(pl/10), or 0 when
/// pl_db exceeds max_pl_db (link out of coverage).
double rsrp_linear_mw(double eff_power_dbm, double pl_db, FadingDraw fading,
                      double max_pl_db);

FadingDraw draw_fading(Xoshiro256& rng);

/// Empirical CDF of per-link path losses (sorted ascending).
struct EmpiricalCdf {
    std::vector<double> sorted_losses_db;

    /// Order-statistic quantile: the ceil(p*n)-th smallest for p in (0,1];
    /// quantile(0) is the minimum.
    double quantile(double p) const;
    void save_csv(const std::string& path) const; // loss_db,cum_prob
};

/// Losses of every (UE, station) pair across both tiers, without fading.
EmpiricalCdf path_loss_cdf(const NetworkLayout& layout, const PathLossModel& model);

}  // namespace uhn
