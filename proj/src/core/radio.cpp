// SPDX-License-Identifier: Apache-2.0
#include "radio.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "errors.hpp"
#include "json.hpp"

namespace uhn {

void validate(const IcicParams& params) {
    if (std::isnan(params.tau_db) || std::isnan(params.rho_db) ||
        std::isnan(params.rho_prime_db))
        throw std::invalid_argument("icic: thresholds must not be NaN");
    if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
        throw std::invalid_argument("icic: alpha must be in [0,1]");
    if (!(params.beta > 0.0 && params.beta < 1.0))
        throw std::invalid_argument("icic: beta must be in (0,1)");
}

const char* to_string(IcicMode mode) {
    switch (mode) {
        case IcicMode::none: return "none";
        case IcicMode::eicic: return "eicic";
        case IcicMode::feicic: return "feicic";
    }
    return "?";
}

IcicMode icic_mode_from_string(const std::string& s) {
    if (s == "none") return IcicMode::none;
    if (s == "eicic") return IcicMode::eicic;
    if (s == "feicic") return IcicMode::feicic;
    throw std::invalid_argument("unknown ICIC mode: " + s);
}

IcicParams pin_params(IcicMode mode, IcicParams base) {
    switch (mode) {
        case IcicMode::feicic:
            break;
        case IcicMode::eicic:
            base.alpha = 0.0;
            break;
        case IcicMode::none:
            base.alpha = 1.0;
            base.rho_db = std::numeric_limits<double>::infinity();
            base.rho_prime_db = -std::numeric_limits<double>::infinity();
            break;
    }
    return base;
}

FadingField FadingField::draw(std::size_t n_ue, std::size_t n_stations,
                              std::uint64_t seed) {
    FadingField f;
    f.n_ue = n_ue;
    f.n_stations = n_stations;
    f.h.resize(n_ue * n_stations);
    Xoshiro256 rng(seed);
    for (auto& v : f.h) v = rng.exponential();
    return f;
}

FadingField FadingField::unit(std::size_t n_ue, std::size_t n_stations) {
    FadingField f;
    f.n_ue = n_ue;
    f.n_stations = n_stations;
    f.h.assign(n_ue * n_stations, 1.0);
    return f;
}

StationProps make_station_props(const std::vector<Point3>& stations,
                                double power_dbm, const PathLossModel& model,
                                double ue_height_m) {
    StationProps p;
    p.pos = stations;
    p.power_dbm = power_dbm;
    p.splm = model.variant == PlmVariant::splm;
    p.delta = model.delta;
    p.max_pl_db = model.resolved_max_pl_db();
    if (!p.splm) {
        p.factors.reserve(stations.size());
        for (const auto& s : stations)
            p.factors.push_back(ohplm_factors(model.fc_mhz, s.z_m, ue_height_m,
                                              model.hata_standard_ue_correction));
    }
    return p;
}

double station_rsrp_mw(const StationProps& props, std::size_t i, const Point3& ue,
                       double h) {
    double pl;
    if (props.splm) {
        pl = splm_path_loss_db(dist3_m(props.pos[i], ue), props.delta);
    } else {
        // The UE can sit directly under a UABS; clamp the horizontal
        // distance to 1 mm (the 0 dB floor applies long before that).
        const double d_m = std::max(horizontal_dist_m(props.pos[i], ue), 1e-3);
        pl = ohplm_path_loss_db(d_m / 1000.0, props.factors[i]);
    }
    return rsrp_linear_mw(props.power_dbm, pl, FadingDraw{h}, props.max_pl_db);
}

TierBudget tier_budget(const StationProps& props, const Point3& ue,
                       const double* h_slots) {
    TierBudget tb;
    const std::size_t n = props.size();
    if (n == 0) return tb;

    // Nearest station under the model's serving-distance convention:
    // 3-D for SPLM, horizontal for OHPLM. Ties go to the lower index.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d2 = props.splm ? dist2_m2(props.pos[i], ue)
                                     : horizontal_dist2_km2(props.pos[i], ue);
        if (d2 < best) {
            best = d2;
            tb.nearest = static_cast<int>(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double r = station_rsrp_mw(props, i, ue, h_slots[i]);
        if (static_cast<int>(i) == tb.nearest)
            tb.s_mw = r;
        else
            tb.z_other_mw += r;
    }
    return tb;
}

namespace {

void check_layout_for_eval(const NetworkLayout& layout, const FadingField& fading) {
    if (layout.mbs.empty() && layout.uabs.empty())
        throw std::invalid_argument("link budget: layout has no stations");
    if (fading.n_ue != layout.ue.size() || fading.n_stations != layout.n_stations())
        throw std::invalid_argument("link budget: fading field does not cover the layout");
    if (!layout.ue.empty()) {
        const double z = layout.ue.front().z_m;
        for (const auto& u : layout.ue)
            if (u.z_m != z)
                throw std::invalid_argument("link budget: UE heights must be uniform");
    }
}

LinkBudget budget_row(int ue_index, const Point3& ue, const StationProps& mbs,
                      const StationProps& uabs, const double* h_row) {
    LinkBudget b;
    b.ue_index = ue_index;
    const TierBudget mt = tier_budget(mbs, ue, h_row);
    const TierBudget ut = tier_budget(uabs, ue, h_row + mbs.size());
    b.moi_index = mt.nearest;
    b.uoi_index = ut.nearest;
    b.s_mbs_mw = mt.s_mw;
    b.s_uabs_mw = ut.s_mw;
    b.z_mbs_other_mw = mt.z_other_mw;
    b.z_uabs_other_mw = ut.z_other_mw;
    b.z_usf_mw = b.z_mbs_other_mw + b.z_uabs_other_mw;
    b.z_csf_mw = b.z_usf_mw;
    return b;
}

}  // namespace

LinkBudget compute_link_budget(int ue_index, const NetworkLayout& layout,
                               const PathLossModel& model,
                               const FadingField& fading, double /*alpha*/) {
    check_layout_for_eval(layout, fading);
    if (ue_index < 0 || static_cast<std::size_t>(ue_index) >= layout.ue.size())
        throw std::invalid_argument("link budget: ue_index out of range");
    const double ue_z = layout.ue.front().z_m;
    const StationProps mp =
        make_station_props(layout.mbs, layout.mbs_eff_power_dbm, model, ue_z);
    const StationProps up =
        make_station_props(layout.uabs, layout.uabs_eff_power_dbm, model, ue_z);
    return budget_row(ue_index, layout.ue[static_cast<std::size_t>(ue_index)], mp, up,
                      fading.row(static_cast<std::size_t>(ue_index)));
}

std::vector<LinkBudget> build_link_budget_table(const NetworkLayout& layout,
                                                const PathLossModel& model,
                                                const FadingField& fading) {
    check_layout_for_eval(layout, fading);
    const double ue_z = layout.ue.empty() ? 0.0 : layout.ue.front().z_m;
    const StationProps mp =
        make_station_props(layout.mbs, layout.mbs_eff_power_dbm, model, ue_z);
    const StationProps up =
        make_station_props(layout.uabs, layout.uabs_eff_power_dbm, model, ue_z);

    std::vector<LinkBudget> rows;
    rows.reserve(layout.ue.size());
    for (std::size_t i = 0; i < layout.ue.size(); ++i)
        rows.push_back(budget_row(static_cast<int>(i), layout.ue[i], mp, up,
                                  fading.row(i)));
    return rows;
}

namespace {

inline double safe_div(double num, double den) {
    if (den == 0.0)
        return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return num / den;
}

}  // namespace

SirSet sir_set(const LinkBudget& link, double alpha) {
    // One aggregate interference term serves all four SIRs: the power
    // reduction applies to the MOI's own transmissions (the alpha * S_mbs
    // terms), while the surrounding cells' subframe patterns are not assumed
    // to line up with the serving cell's, so their contribution stays at
    // full power during CSFs.
    const double z = link.z_mbs_other_mw + link.z_uabs_other_mw;
    SirSet s;
    s.gamma = safe_div(link.s_mbs_mw, link.s_uabs_mw + z);
    s.gamma_csf = safe_div(alpha * link.s_mbs_mw, link.s_uabs_mw + z);
    s.gamma_prime = safe_div(link.s_uabs_mw, link.s_mbs_mw + z);
    s.gamma_prime_csf = safe_div(link.s_uabs_mw, alpha * link.s_mbs_mw + z);
    return s;
}

const char* to_string(UeClass cls) {
    switch (cls) {
        case UeClass::usf_mue: return "USF-MUE";
        case UeClass::csf_mue: return "CSF-MUE";
        case UeClass::usf_uue: return "USF-UUE";
        case UeClass::csf_uue: return "CSF-UUE";
    }
    return "?";
}

namespace {

struct LinearIcic {
    double tau, rho, rho_prime;

    static LinearIcic from(const IcicParams& p) {
        return LinearIcic{db_to_linear(p.tau_db), db_to_linear(p.rho_db),
                          db_to_linear(p.rho_prime_db)};
    }
};

inline UeClass classify(const SirSet& s, const LinearIcic& t) {
    if (s.gamma > t.tau * s.gamma_prime)
        return s.gamma <= t.rho ? UeClass::usf_mue : UeClass::csf_mue;
    return s.gamma_prime > t.rho_prime ? UeClass::usf_uue : UeClass::csf_uue;
}

inline UeClass classify_mue_only(const SirSet& s, const LinearIcic& t) {
    return s.gamma <= t.rho ? UeClass::usf_mue : UeClass::csf_mue;
}

inline UeClass classify_uue_only(const SirSet& s, const LinearIcic& t) {
    return s.gamma_prime > t.rho_prime ? UeClass::usf_uue : UeClass::csf_uue;
}

inline double class_sir(UeClass cls, const SirSet& s) {
    switch (cls) {
        case UeClass::usf_mue: return s.gamma;
        case UeClass::csf_mue: return s.gamma_csf;
        case UeClass::usf_uue: return s.gamma_prime;
        case UeClass::csf_uue: return s.gamma_prime_csf;
    }
    return 0.0;
}

inline double se_value(UeClass cls, const SirSet& sirs, double beta, int load,
                       double ceiling) {
    const double res = std::min(std::log2(1.0 + class_sir(cls, sirs)), ceiling);
    const double duty = is_usf(cls) ? beta : 1.0 - beta;
    return duty * res / static_cast<double>(load);
}

}  // namespace

UeClass associate_and_schedule(const SirSet& sirs, const IcicParams& params) {
    validate(params);
    return classify(sirs, LinearIcic::from(params));
}

int CellLoads::total() const {
    int n = 0;
    for (const auto& c : mbs) n += c[0] + c[1];
    for (const auto& c : uabs) n += c[0] + c[1];
    return n;
}

double per_ue_se(const UeAllocation& alloc, const IcicParams& params, int load,
                 const EvalOptions& opts) {
    validate(params);
    if (load < 1)
        throw std::invalid_argument("per_ue_se: load must count the UE itself (>= 1)");
    return se_value(alloc.cls, alloc.sirs, params.beta, load, opts.se_ceiling_bpshz);
}

double fifth_percentile_se(const std::vector<double>& per_ue_se) {
    if (per_ue_se.empty())
        throw std::invalid_argument("fifth_percentile_se: empty list");
    const std::size_t n = per_ue_se.size();
    const std::size_t k = (n + 19) / 20;  // ceil(0.05 * n)
    std::vector<double> tmp(per_ue_se);
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     tmp.end());
    return tmp[k - 1];
}

void classify_and_score(const std::vector<LinkBudget>& rows, std::size_t n_mbs,
                        std::size_t n_uabs, const IcicParams& params,
                        const EvalOptions& opts, ScoreScratch& out) {
    validate(params);
    const std::size_t n = rows.size();
    const LinearIcic t = LinearIcic::from(params);

    out.cls.resize(n);
    out.serving.resize(n);
    out.sirs.resize(n);
    out.se.resize(n);
    out.loads.mbs.assign(n_mbs, {0, 0});
    out.loads.uabs.assign(n_uabs, {0, 0});

    for (std::size_t i = 0; i < n; ++i) {
        const LinkBudget& b = rows[i];
        const SirSet s = sir_set(b, params.alpha);
        UeClass cls;
        if (b.uoi_index < 0 && b.moi_index < 0)
            throw std::invalid_argument("classify: UE has no station in either tier");
        else if (b.uoi_index < 0)
            cls = classify_mue_only(s, t);
        else if (b.moi_index < 0)
            cls = classify_uue_only(s, t);
        else
            cls = classify(s, t);
        const int serving = is_mue(cls) ? b.moi_index : b.uoi_index;
        auto& bucket = is_mue(cls) ? out.loads.mbs[static_cast<std::size_t>(serving)]
                                   : out.loads.uabs[static_cast<std::size_t>(serving)];
        ++bucket[is_usf(cls) ? 0 : 1];
        out.cls[i] = cls;
        out.serving[i] = serving;
        out.sirs[i] = s;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const UeClass cls = out.cls[i];
        const auto& bucket =
            is_mue(cls) ? out.loads.mbs[static_cast<std::size_t>(out.serving[i])]
                        : out.loads.uabs[static_cast<std::size_t>(out.serving[i])];
        const int load = bucket[is_usf(cls) ? 0 : 1];
        out.se[i] = se_value(cls, out.sirs[i], params.beta, load,
                             opts.se_ceiling_bpshz);
    }
}

double score_5pse(const std::vector<LinkBudget>& rows, std::size_t n_mbs,
                  std::size_t n_uabs, const IcicParams& params,
                  const EvalOptions& opts, ScoreScratch& scratch) {
    classify_and_score(rows, n_mbs, n_uabs, params, opts, scratch);
    return fifth_percentile_se(scratch.se);
}

SeReport make_report(const ScoreScratch& s, const IcicParams& params) {
    SeReport r;
    r.params = params;
    r.per_ue_se = s.se;
    r.loads = s.loads;
    r.fifth_percentile_se = fifth_percentile_se(s.se);
    r.allocations.resize(s.cls.size());
    for (std::size_t i = 0; i < s.cls.size(); ++i)
        r.allocations[i] = UeAllocation{static_cast<int>(i), s.cls[i], s.serving[i],
                                        s.sirs[i]};
    return r;
}

SeReport evaluate_5pse(const NetworkLayout& layout, const PathLossModel& model,
                       const IcicParams& params, const FadingField& fading,
                       const EvalOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(model);
    validate(params);
    if (layout.ue.empty())
        throw std::invalid_argument("evaluate_5pse: layout has no UEs");
    const auto rows = build_link_budget_table(layout, model, fading);
    ScoreScratch scratch;
    classify_and_score(rows, layout.mbs.size(), layout.uabs.size(), params, opts,
                       scratch);
    SeReport r = make_report(scratch, params);
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    return r;
}

SeReport evaluate_5pse(const NetworkLayout& layout, const PathLossModel& model,
                       const IcicParams& params, std::uint64_t fading_seed,
                       const EvalOptions& opts) {
    const FadingField fading =
        FadingField::draw(layout.ue.size(), layout.n_stations(), fading_seed);
    return evaluate_5pse(layout, model, params, fading, opts);
}

namespace {

nlohmann::json json_num(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

nlohmann::json params_json(const IcicParams& p) {
    return {{"tau_db", json_num(p.tau_db)},
            {"alpha", p.alpha},
            {"rho_db", json_num(p.rho_db)},
            {"rho_prime_db", json_num(p.rho_prime_db)},
            {"beta", p.beta}};
}

}  // namespace

void save_report_json(const SeReport& report, const std::string& path) {
    nlohmann::json j;
    j["schema"] = 1;
    j["params"] = params_json(report.params);
    j["n_ue"] = report.per_ue_se.size();
    j["fifth_percentile_se_bpshz"] = report.fifth_percentile_se;
    j["elapsed_s"] = report.elapsed_s;
    nlohmann::json loads;
    loads["mbs"] = nlohmann::json::array();
    for (const auto& c : report.loads.mbs) loads["mbs"].push_back({c[0], c[1]});
    loads["uabs"] = nlohmann::json::array();
    for (const auto& c : report.loads.uabs) loads["uabs"].push_back({c[0], c[1]});
    j["cell_loads"] = loads;
    nlohmann::json ues = nlohmann::json::array();
    for (std::size_t i = 0; i < report.allocations.size(); ++i) {
        const auto& a = report.allocations[i];
        const double sir = [&] {
            switch (a.cls) {
                case UeClass::usf_mue: return a.sirs.gamma;
                case UeClass::csf_mue: return a.sirs.gamma_csf;
                case UeClass::usf_uue: return a.sirs.gamma_prime;
                default: return a.sirs.gamma_prime_csf;
            }
        }();
        ues.push_back({{"ue_index", a.ue_index},
                       {"class", to_string(a.cls)},
                       {"serving_station",
                        std::string(is_mue(a.cls) ? "mbs:" : "uabs:") +
                            std::to_string(a.serving_station)},
                       {"sir_db", json_num(linear_to_db(sir))},
                       {"se_bpshz", report.per_ue_se[i]}});
    }
    j["per_ue"] = ues;

    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
    if (!f) throw io_error("write failed: " + path);
}

void save_report_csv(const SeReport& report, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "ue_index,class,serving_station,sir_db,se_bpshz\n";
    char buf[160];
    for (std::size_t i = 0; i < report.allocations.size(); ++i) {
        const auto& a = report.allocations[i];
        const double sir = [&] {
            switch (a.cls) {
                case UeClass::usf_mue: return a.sirs.gamma;
                case UeClass::csf_mue: return a.sirs.gamma_csf;
                case UeClass::usf_uue: return a.sirs.gamma_prime;
                default: return a.sirs.gamma_prime_csf;
            }
        }();
        std::snprintf(buf, sizeof buf, "%d,%s,%s%d,%.17g,%.17g\n", a.ue_index,
                      to_string(a.cls), is_mue(a.cls) ? "mbs:" : "uabs:",
                      a.serving_station, linear_to_db(sir), report.per_ue_se[i]);
        f << buf;
    }
    if (!f) throw io_error("write failed: " + path);
}

}  // namespace uhn
