// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace uhn {

/// Parameters of one network realization: PPP intensities, disaster level,
/// node geometry and effective transmit powers (antenna attenuation factors
/// are folded into the powers; both default to 0 dB).
struct ScenarioConfig {
    SimRegion region{10.0, 10.0};
    double lambda_mbs_per_km2 = 4.0;
    double lambda_ue_per_km2 = 100.0;
    int n_uabs = 0;
    double destroy_fraction = 0.0;
    double mbs_altitude_m = 30.0;
    double uabs_altitude_m = 100.0;
    double ue_height_m = 3.0;
    double d_min_ue_mbs_m = 30.0;
    double d_min_ue_uabs_m = 10.0;
    double mbs_power_dbm = 46.0;   // effective (K * P_mbs)
    double uabs_power_dbm = 30.0;  // effective (K' * P_uabs)
    std::uint64_t rng_seed = 1;
};

/// Throws std::invalid_argument if the config violates its invariants.
void validate(const ScenarioConfig& cfg);

/// One realization of the node placement.
struct NetworkLayout {
    SimRegion region;
    std::vector<Point3> mbs;
    std::vector<Point3> uabs;
    std::vector<Point3> ue;
    double mbs_eff_power_dbm = 46.0;
    double uabs_eff_power_dbm = 30.0;
    double d_min_ue_mbs_m = 30.0;
    double d_min_ue_uabs_m = 10.0;

    std::size_t n_stations() const { return mbs.size() + uabs.size(); }
};

/// Draws MBS and UE node sets from 2-D PPPs over cfg.region. UEs violating a
/// minimum horizontal distance to any station present in the layout are
/// resampled (up to 1000 attempts each). When `preplaced_uabs` is given those
/// UABSs are part of the layout and constrain UE placement; otherwise the
/// UABS list starts empty and is filled by a deployment step later.
/// Deterministic in cfg.rng_seed.
NetworkLayout generate_ppp_layout(const ScenarioConfig& cfg,
                                  std::vector<Point3> preplaced_uabs = {});

/// Removes floor(fraction * N_mbs) uniformly chosen MBSs; survivor order is
/// preserved. UEs and UABSs are untouched.
NetworkLayout destroy_mbs(const NetworkLayout& layout, double fraction,
                          std::uint64_t seed);

/// Row-offset hexagonal lattice of exactly n_uabs points, centered in the
/// region: pitch sqrt(area/n), alternate rows shifted by half a pitch,
/// row spacing pitch*sqrt(3)/2. Throws if the lattice does not fit.
std::vector<Point3> hex_grid_positions(int n_uabs, const SimRegion& region,
                                       double altitude_m);

/// Copy of `layout` with the UABS set replaced.
NetworkLayout with_uabs(const NetworkLayout& layout, std::vector<Point3> uabs);

/// Line-oriented CSV: node_type,x_km,y_km,z_m. Coordinates are written with
/// round-trip precision.
void save_layout_csv(const NetworkLayout& layout, const std::string& path);
NetworkLayout load_layout_csv(const std::string& path, double mbs_power_dbm,
                              double uabs_power_dbm);

}  // namespace uhn
