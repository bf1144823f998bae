// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "propagation.hpp"
#include "scenario.hpp"

namespace uhn {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// The network-wide interference-coordination tuple. tau/rho/rho_prime are
/// configured in dB and converted to linear once per evaluation.
struct IcicParams {
    double tau_db = 0.0;        // cell range expansion bias
    double alpha = 1.0;         // MBS power reduction factor in CSFs
    double rho_db = 30.0;       // MUE scheduling threshold
    double rho_prime_db = -10.0; // UUE scheduling threshold
    double beta = 0.5;          // USF duty cycle
};

void validate(const IcicParams& params);

/// Interference-coordination technique. `none` pins alpha=1 and degenerate
/// scheduling thresholds (every UE lands in a USF), `eicic` pins alpha=0
/// (almost-blank subframes), `feicic` leaves alpha free. All three share one
/// evaluation path; a mode only pins parameter values.
enum class IcicMode { none, eicic, feicic };

const char* to_string(IcicMode mode);
IcicMode icic_mode_from_string(const std::string& s);

/// Applies a mode's parameter pins to `base` and returns the result.
IcicParams pin_params(IcicMode mode, IcicParams base);

/// Per-link Rayleigh fading realization, H ~ Exp(1) i.i.d. per (UE, station)
/// pair. Station slots are ordered MBSs first, then UABSs; a moving UABS
/// keeps the fading attached to its slot (common random numbers).
struct FadingField {
    std::size_t n_ue = 0;
    std::size_t n_stations = 0;
    std::vector<double> h;  // row-major [ue][station]

    static FadingField draw(std::size_t n_ue, std::size_t n_stations,
                            std::uint64_t seed);
    static FadingField unit(std::size_t n_ue, std::size_t n_stations);
    const double* row(std::size_t ue) const { return h.data() + ue * n_stations; }
};

/// Per-station propagation state for one tier under one model: positions,
/// effective power, and (for Okumura-Hata) per-station factors.
struct StationProps {
    std::vector<Point3> pos;
    std::vector<OhplmFactors> factors;  // aligned with pos when OHPLM
    double power_dbm = 0.0;
    bool splm = true;
    double delta = 4.0;
    double max_pl_db = 160.0;

    std::size_t size() const { return pos.size(); }
};

StationProps make_station_props(const std::vector<Point3>& stations,
                                double power_dbm, const PathLossModel& model,
                                double ue_height_m);

/// RSRP of one link through the model's path-loss and cutoff rules.
double station_rsrp_mw(const StationProps& props, std::size_t i, const Point3& ue,
                       double h);

/// Nearest station, its RSRP, and the summed RSRP of the rest of the tier.
struct TierBudget {
    int nearest = -1;
    double s_mw = 0.0;
    double z_other_mw = 0.0;
};

TierBudget tier_budget(const StationProps& props, const Point3& ue,
                       const double* h_slots);

/// Received powers seen by one UE: serving candidates of both tiers plus the
/// aggregate interference of everything else. Neighbouring cells' subframe
/// patterns are not assumed to align with the serving cell's, so the
/// interference is the same in USF and CSF (z_usf_mw == z_csf_mw); the power
/// reduction factor enters only through the alpha * S_mbs terms of the SIRs.
struct LinkBudget {
    int ue_index = -1;
    int moi_index = -1;  // nearest MBS; -1 when the tier is empty
    int uoi_index = -1;  // nearest UABS; -1 when the tier is empty
    double s_mbs_mw = 0.0;
    double s_uabs_mw = 0.0;
    double z_mbs_other_mw = 0.0;   // MBS interferers excluding the MOI
    double z_uabs_other_mw = 0.0;  // UABS interferers excluding the UOI
    double z_usf_mw = 0.0;         // z_mbs_other + z_uabs_other
    double z_csf_mw = 0.0;         // equal to z_usf_mw (see above)
};

/// The alpha argument is accepted for interface stability but does not
/// affect the budget (interference is alpha-independent).
LinkBudget compute_link_budget(int ue_index, const NetworkLayout& layout,
                               const PathLossModel& model,
                               const FadingField& fading, double alpha);

/// All per-UE budgets for a fixed (layout, model, fading) realization.
std::vector<LinkBudget> build_link_budget_table(const NetworkLayout& layout,
                                                const PathLossModel& model,
                                                const FadingField& fading);

/// Linear SIRs for USF/CSF from MOI and UOI. A zero denominator yields +inf
/// when the numerator is positive and 0 otherwise.
struct SirSet {
    double gamma = 0.0;
    double gamma_csf = 0.0;
    double gamma_prime = 0.0;
    double gamma_prime_csf = 0.0;
};

SirSet sir_set(const LinkBudget& link, double alpha);

enum class UeClass : std::uint8_t { usf_mue, csf_mue, usf_uue, csf_uue };

const char* to_string(UeClass cls);
inline bool is_mue(UeClass c) { return c == UeClass::usf_mue || c == UeClass::csf_mue; }
inline bool is_usf(UeClass c) { return c == UeClass::usf_mue || c == UeClass::usf_uue; }

/// Association and USF/CSF scheduling. The tie gamma == tau*gamma' goes to
/// the UOI.
UeClass associate_and_schedule(const SirSet& sirs, const IcicParams& params);

struct UeAllocation {
    int ue_index = -1;
    UeClass cls = UeClass::usf_mue;
    int serving_station = -1;  // index within the serving tier
    SirSet sirs;
};

/// USF/CSF UE counts per cell; the outer index is the station index within
/// its tier and the inner pair is {USF count, CSF count}.
struct CellLoads {
    std::vector<std::array<int, 2>> mbs;
    std::vector<std::array<int, 2>> uabs;

    int total() const;
};

struct EvalOptions {
    // Cap on log2(1 + SIR); keeps the 5pSE finite when a UE sees zero
    // interference and mirrors real modulation limits.
    double se_ceiling_bpshz = 10.0;
};

/// Spectral efficiency of one allocated UE given the load of its (cell,
/// subframe) bucket. The load counts the UE itself and must be >= 1.
double per_ue_se(const UeAllocation& alloc, const IcicParams& params, int load,
                 const EvalOptions& opts = {});

/// ceil(0.05*N)-th smallest element (1-based order statistic).
double fifth_percentile_se(const std::vector<double>& per_ue_se);

struct SeReport {
    IcicParams params;
    std::vector<UeAllocation> allocations;
    std::vector<double> per_ue_se;
    CellLoads loads;
    double fifth_percentile_se = 0.0;
    double elapsed_s = 0.0;
};

/// Full pipeline: fading draw, link budgets, SIRs, association, loads,
/// per-UE SE, 5pSE. Pure function of (layout, model, params, seed).
SeReport evaluate_5pse(const NetworkLayout& layout, const PathLossModel& model,
                       const IcicParams& params, std::uint64_t fading_seed,
                       const EvalOptions& opts = {});

/// Same pipeline with a caller-supplied fading realization.
SeReport evaluate_5pse(const NetworkLayout& layout, const PathLossModel& model,
                       const IcicParams& params, const FadingField& fading,
                       const EvalOptions& opts = {});

/// Reusable buffers plus the classification outcome of one evaluation.
struct ScoreScratch {
    std::vector<UeClass> cls;
    std::vector<int> serving;
    std::vector<SirSet> sirs;
    std::vector<double> se;
    CellLoads loads;
};

/// The shared scoring core: classifies every row and fills `out`. All
/// evaluation routes (direct, grid search, GA fitness) funnel through this
/// function so that equal parameters give bit-identical results.
void classify_and_score(const std::vector<LinkBudget>& rows, std::size_t n_mbs,
                        std::size_t n_uabs, const IcicParams& params,
                        const EvalOptions& opts, ScoreScratch& out);

/// classify_and_score + order statistic, no report assembly.
double score_5pse(const std::vector<LinkBudget>& rows, std::size_t n_mbs,
                  std::size_t n_uabs, const IcicParams& params,
                  const EvalOptions& opts, ScoreScratch& scratch);

/// Assembles a full report from a scored scratch.
SeReport make_report(const ScoreScratch& scratch, const IcicParams& params);

void save_report_json(const SeReport& report, const std::string& path);
void save_report_csv(const SeReport& report, const std::string& path);

}  // namespace uhn
